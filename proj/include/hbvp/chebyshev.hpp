#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hbvp {

using cplx = std::complex<double>;

struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  bool contains(double t) const { return t >= a && t <= b; }
};

// Chebyshev-Gauss-Lobatto machinery on a general interval [a,b]. Nodes are
// returned in ascending order, node 0 = a and node N = b.
namespace cheb {

std::vector<double> lobatto_nodes(int degree, Interval iv);

// First-kind (Gauss) points, interior to the interval, ascending.
std::vector<double> gauss_nodes(int count, Interval iv);

// Barycentric weights for the Lobatto nodes: (-1)^j, halved at both ends.
std::vector<double> lobatto_weights(int degree);

// Spectral differentiation matrix for the Lobatto nodes (negative-sum diagonal).
Eigen::MatrixXd diff_matrix(int degree, Interval iv);

// Row i interpolates node values onto targets[i] (barycentric formula).
Eigen::MatrixXd interp_matrix(const std::vector<double>& nodes,
                              const std::vector<double>& weights,
                              const std::vector<double>& targets);

cplx barycentric(const std::vector<double>& nodes,
                 const std::vector<double>& weights,
                 const Eigen::Ref<const Eigen::VectorXcd>& values, double t);

// Clenshaw-Curtis weights on the Lobatto nodes of the given degree.
std::vector<double> clenshaw_curtis_weights(int degree, Interval iv);

// Chebyshev coefficients c_k of the interpolant, T_k in the mapped variable.
Eigen::VectorXcd coefficients(const Eigen::Ref<const Eigen::VectorXcd>& values);

}  // namespace cheb

// Immutable Chebyshev interpolant of a scalar function; shared by Expr nodes
// that wrap sampled data.
class ChebInterpolant {
 public:
  ChebInterpolant(Interval iv, Eigen::VectorXcd values);

  int degree() const { return static_cast<int>(values_.size()) - 1; }
  Interval interval() const { return iv_; }
  const Eigen::VectorXcd& values() const { return values_; }
  const std::vector<double>& nodes() const { return nodes_; }

  cplx operator()(double t) const;
  ChebInterpolant derivative() const;

 private:
  Interval iv_;
  Eigen::VectorXcd values_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace hbvp
