#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hbvp/expr.hpp"
#include "hbvp/grid_function.hpp"
#include "hbvp/holder.hpp"

namespace hbvp {

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExprMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Expr> entries;  // row-major

  ExprMatrix() = default;
  ExprMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<std::size_t>(r * c)) {}
  ExprMatrix(int r, int c, std::vector<Expr> e);

  static ExprMatrix identity(int n);
  static ExprMatrix zero(int r, int c) { return ExprMatrix(r, c); }

  Expr& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * cols + j)]; }
  const Expr& operator()(int i, int j) const {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }

  bool depends_on_t() const;
  Eigen::MatrixXcd eval(double t, double eps) const;
};

// Term coeff * y^{(order)}(point); coeff is rm x m, an expression in eps.
struct PointTerm {
  int order = 0;
  double point = 0.0;
  ExprMatrix coeff;
};

// Term int_a^b density(t) y^{(order)}(t) dt; density is rm x m in (t, eps).
struct IntegralTerm {
  int order = 0;
  ExprMatrix density;
};

struct BoundaryOperatorFamily {
  std::vector<PointTerm> point_terms;
  std::vector<IntegralTerm> integral_terms;
};

// L(eps) y = y^{(r)} + sum_{l<r} A_l(t,eps) y^{(l)} = f(t,eps),  B(eps) y = c(eps).
struct ProblemFamily {
  std::string name;
  int r = 2;
  int m = 1;
  HolderIndex idx{0, 1.0};
  Interval interval;
  std::vector<ExprMatrix> coeffs;                        // A_0 .. A_{r-1}, each m x m
  std::optional<std::vector<ExprMatrix>> coeffs_at_zero;  // overrides coeffs at eps = 0
  ExprMatrix rhs;                                        // m x 1
  BoundaryOperatorFamily boundary;
  ExprMatrix target;  // rm x 1, in eps
  double eps0 = 1.0;

  // Throws ProblemError naming the offending field.
  void validate() const;
  HolderIndex solution_index() const { return idx.raised(r); }
  const std::vector<ExprMatrix>& coeffs_at(double eps) const {
    return (eps == 0.0 && coeffs_at_zero) ? *coeffs_at_zero : coeffs;
  }
};

struct NumericPointTerm {
  int order = 0;
  double point = 0.0;
  Eigen::MatrixXcd coeff;
};

struct NumericIntegralTerm {
  int order = 0;
  GridFunction density;
};

// B(eps) at a fixed eps.
struct BoundaryOperator {
  int rows = 0;  // rm
  int m = 1;
  Interval interval;
  std::vector<NumericPointTerm> point_terms;
  std::vector<NumericIntegralTerm> integral_terms;
  int quadrature_order = 64;

  int max_order() const;
};

struct ProblemInstance {
  std::string name;
  int r = 2;
  int m = 1;
  HolderIndex idx{0, 1.0};
  Interval interval;
  double eps = 0.0;
  int degree = 32;
  std::vector<GridFunction> coeffs;  // A_0 .. A_{r-1}
  GridFunction rhs;
  BoundaryOperator boundary;
  Eigen::VectorXcd target;

  ProblemInstance with_degree(int degree) const;
};

ProblemInstance instantiate(const ProblemFamily& fam, double eps, int degree);

BoundaryOperator instantiate_boundary(const ProblemFamily& fam, double eps, int degree);

// B y for y of shape m x 1. quadrature_order <= 0 uses B.quadrature_order.
Eigen::VectorXcd apply_B(const BoundaryOperator& B, const GridFunction& y, int quadrature_order = 0);

// Column-wise [B Y] for Y of shape m x k.
Eigen::MatrixXcd apply_B_columns(const BoundaryOperator& B, const GridFunction& Y);

// Linear functional form: rows x m(N+1), acting on node values stacked
// component-major (component i occupies entries i*(N+1) .. i*(N+1)+N).
Eigen::MatrixXcd boundary_rows(const BoundaryOperator& B, int degree);

// Upper bound C_B with |B y|_1 <= C_B ||y||_{q,alpha} for q >= max_order():
// sum of |point coefficients| plus the quadrature mass of |densities|.
double boundary_bound(const BoundaryOperator& B);

// l1 norm on C^{rm}.
double vector_norm(const Eigen::VectorXcd& v);

}  // namespace hbvp
