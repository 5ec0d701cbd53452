#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hbvp/chebyshev.hpp"
#include "hbvp/expr.hpp"

namespace hbvp {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMinDegree = 8;
inline constexpr int kMaxProductDegree = 512;

// Vector- or matrix-valued function on [a,b] stored as node values at the
// Chebyshev-Gauss-Lobatto points. When a source expression (t only) is
// attached, pointwise evaluation and derivatives use it exactly.
//
// Entry (i, j) is stored in column i*cols + j of values().
class GridFunction {
 public:
  GridFunction() = default;

  static GridFunction from_exprs(const std::vector<Expr>& entries, int rows, int cols, Interval iv,
                                 int degree, double eps = 0.0);
  static GridFunction from_values(Eigen::MatrixXcd values, int rows, int cols, Interval iv);
  static GridFunction constant(const Eigen::MatrixXcd& value, Interval iv, int degree);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int entries() const { return rows_ * cols_; }
  int degree() const { return static_cast<int>(values_.rows()) - 1; }
  Interval interval() const { return iv_; }
  std::vector<double> nodes() const { return cheb::lobatto_nodes(degree(), iv_); }

  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::VectorXcd entry_values(int i, int j = 0) const { return values_.col(i * cols_ + j); }

  bool has_source() const { return source_.has_value(); }
  const std::vector<Expr>& source() const { return *source_; }

  cplx entry_at(int e, double t) const;
  Eigen::MatrixXcd at(double t) const;
  // samples(k, e) = entry e at ts[k]
  Eigen::MatrixXcd samples(const std::vector<double>& ts) const;

  GridFunction block(int row, int col, int nrows, int ncols) const;
  GridFunction without_source() const;
  GridFunction resample(int degree) const;
  // Pointwise-exact expression for every entry (sampled data wrapped as
  // Chebyshev interpolants when no source is attached).
  std::vector<Expr> exact_entries() const;

  GridFunction operator-() const;
  friend GridFunction operator+(const GridFunction& f, const GridFunction& g);
  friend GridFunction operator-(const GridFunction& f, const GridFunction& g);
  friend GridFunction operator*(cplx c, const GridFunction& g);

 private:
  GridFunction(Eigen::MatrixXcd values, int rows, int cols, Interval iv,
               std::optional<std::vector<Expr>> source)
      : values_(std::move(values)), rows_(rows), cols_(cols), iv_(iv), source_(std::move(source)) {}

  Eigen::MatrixXcd values_;
  int rows_ = 1;
  int cols_ = 1;
  Interval iv_;
  std::optional<std::vector<Expr>> source_;
};

// Evaluate e at t, nudging by 1e-12 of the interval length if t hits a singular point.
cplx eval_nudged(const Expr& e, double t, Interval iv);

GridFunction differentiate(const GridFunction& g);
GridFunction differentiate(const GridFunction& g, int order);

// Matrix product f*g pointwise. Result degree: deg f + deg g, capped at 512.
GridFunction product(const GridFunction& f, const GridFunction& g);

// Stack m x 1 functions vertically / place columns side by side.
GridFunction vstack(const std::vector<GridFunction>& parts);
GridFunction hstack(const std::vector<GridFunction>& parts);

}  // namespace hbvp
