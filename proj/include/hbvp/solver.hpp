#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "hbvp/grid_function.hpp"
#include "hbvp/problem.hpp"

namespace hbvp {

// The homogeneous problem has a nontrivial solution (characteristic matrix
// singular to tolerance): the solution is not unique or does not exist.
class ConditionZeroViolated : public std::runtime_error {
 public:
  ConditionZeroViolated(double margin, double tolerance)
      : std::runtime_error("Condition (0) violated: characteristic matrix margin " + sci(margin) +
                           " <= tolerance " + sci(tolerance)),
        margin_(margin),
        tolerance_(tolerance) {}
  double margin() const { return margin_; }
  double tolerance() const { return tolerance_; }

 private:
  static std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
  }
  double margin_;
  double tolerance_;
};

// Collocation failed or the residual stayed above the acceptance threshold.
class SolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  double cond0_rel_tol = 1e-10;
  // Accept when ||L y - f||_sup <= residual_tol * (1 + ||f||_sup).
  double residual_tol = 1e-6;
  bool retry_doubled = true;
  int residual_samples = 256;
};

// x' + A x = g with the block companion layout:
//   A = [ 0  -I   0 ...  0 ]
//       [ 0   0  -I ...  0 ]
//       [        ...       ]
//       [ A_0 A_1 ... A_{r-1} ],   g = col(0, ..., 0, f).
struct CompanionSystem {
  int r = 1;
  int m = 1;
  GridFunction A;  // rm x rm
  GridFunction g;  // rm x 1
};

struct FundamentalMatrix {
  GridFunction X;  // rm x rm, X(a) = I
  double residual = 0.0;
};

struct CharacteristicMatrix {
  Eigen::MatrixXcd M;
  double margin = 0.0;  // smallest singular value
  double norm = 0.0;    // largest singular value
};

struct ConditionZero {
  bool satisfied = false;
  double margin = 0.0;
  double tolerance = 0.0;
};

struct Solution {
  GridFunction y;  // m x 1
  double ode_residual = 0.0;
  double boundary_residual = 0.0;
  double cond0_margin = 0.0;
  int degree = 0;
};

struct FredholmReport {
  int size = 0;
  int rank = 0;
  int nullity = 0;
  int corank = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

CompanionSystem build_companion(const ProblemInstance& inst);

// col(y, y', ..., y^{(r-1)})
GridFunction lift(const GridFunction& y, int r);

// X' + A X = 0, X(a) = I, by rectangular Chebyshev collocation.
FundamentalMatrix fundamental_matrix(const CompanionSystem& cs, int degree);

// x' + A x = g, x(a) = 0.
GridFunction particular_solution(const CompanionSystem& cs, int degree);

CharacteristicMatrix characteristic_matrix(const BoundaryOperator& B, const FundamentalMatrix& fm);

ConditionZero check_condition_zero(const CharacteristicMatrix& cm, double rel_tol = 1e-10);

// Companion route: y = top block of X v + x_p with M v = c - B x_p.
Solution solve_bvp(const ProblemInstance& inst, const SolveOptions& opts = {});

// Direct route: square collocation of the r-th order system with boundary rows.
Solution solve_direct(const ProblemInstance& inst, const SolveOptions& opts = {});

// Y (m x rm) with L Y = 0 and [B Y] = I_{rm}.
GridFunction solve_matrix_bvp(const ProblemInstance& inst, const SolveOptions& opts = {});

// -X' X^{-1} at the nodes.
GridFunction recover_coefficients(const FundamentalMatrix& fm);

// y^{(r)} + sum_l A_l y^{(l)} for y of shape m x k.
GridFunction apply_L(const ProblemInstance& inst, const GridFunction& y);

// Square collocation matrix of (L, B) at the instance degree, size m(N+1).
Eigen::MatrixXcd collocation_matrix(const ProblemInstance& inst);

FredholmReport discrete_fredholm(const ProblemInstance& inst, double rel_tol = 1e-11);

}  // namespace hbvp
