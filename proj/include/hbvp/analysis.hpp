#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hbvp/holder.hpp"
#include "hbvp/problem.hpp"
#include "hbvp/solver.hpp"

namespace hbvp {

struct AnalysisOptions {
  int degree = 32;
  int samples = kDefaultSamples;
  bool check_refinement = false;
  SolveOptions solve;
  // A sequence "tends to 0" when its last tail_length entries strictly
  // decrease and the final one is below tail_factor * (first + 1). Sequences
  // that never exceed zero_floor count as converged.
  double tail_factor = 1e-3;
  int tail_length = 5;
  double zero_floor = 1e-13;
  // two_sided_sweep flags ratios spread wider than this factor
  double ratio_band = 1e4;
  // boundedness_probe_B: UNBOUNDED when estimates grow by more than this factor
  double growth_cap = 1e3;
  // Residual acceptance for the matrix problem (f = 0, c = unit vectors) in
  // main_theorem_suite. Its columns inherit the roughness of A, so collocation
  // converges only algebraically there; this guards against gross failure.
  double matrix_residual_tol = 0.5;
  int jobs = 1;
};

// eps0 * factor^k for k = 1..count
std::vector<double> geometric_sequence(double eps0, double factor, int count);

bool tends_to_zero(const std::vector<double>& values, const AnalysisOptions& opts);

// {t^p e_q : p <= r+2} u {sin t e_q, cos t e_q}, q = 1..m
std::vector<GridFunction> default_probes(const ProblemFamily& fam, int degree);

struct Discrepancy {
  double interior = 0.0;  // ||L(eps) y0 - f(eps)||_{n,alpha}
  double boundary = 0.0;  // |B(eps) y0 - c(eps)|
  double total() const { return interior + boundary; }
};

Discrepancy discrepancy(const ProblemFamily& fam, double eps, const GridFunction& y0,
                        const HolderIndex& idx, const AnalysisOptions& opts = {});

// 1 + K sum_l ||A_l(eps)||_{n,alpha} + C_B(eps): bounds d(eps) / ||y(0) - y(eps)||_{n+r,alpha}.
double discrepancy_certificate(const ProblemFamily& fam, double eps, const HolderIndex& idx,
                               const AnalysisOptions& opts = {});

struct LimitConditionReport {
  std::vector<double> eps_sequence;
  std::vector<std::vector<double>> condI_norms;  // [eps][l] = ||A_l(eps) - A_l(0)||_{n,alpha}
  std::vector<double> condII_probe;              // max over probes |B(eps)y - B(0)y|
  std::vector<double> condIII_norm;              // ||f(eps) - f(0)||_{n,alpha}
  std::vector<double> condIV;                    // |c(eps) - c(0)|
  bool verdict_I = false;
  bool verdict_II = false;
  bool verdict_III = false;
  bool verdict_IV = false;
};

LimitConditionReport limit_conditions_report(const ProblemFamily& fam,
                                             const std::vector<double>& eps_sequence,
                                             const std::vector<GridFunction>& probes,
                                             const HolderIndex& idx,
                                             const AnalysisOptions& opts = {});

struct SweepRecord {
  double eps = 0.0;
  bool solved = false;
  std::string message;
  double error = 0.0;        // ||y(0) - y(eps)||_{n+r,alpha}
  double discrepancy = 0.0;  // d_{n,alpha}(eps)
  std::optional<double> ratio;
  double cond0_margin = 0.0;
  double ode_residual = 0.0;
  double boundary_residual = 0.0;
  int degree = 0;
};

struct SweepReport {
  std::string family;
  std::vector<SweepRecord> records;
  double baseline_discrepancy = 0.0;  // d(0) of y(0): the solver's own residual level
  std::optional<double> kappa_low;
  std::optional<double> kappa_high;
  bool band_ok = true;                // kappa_high / kappa_low <= ratio_band
  bool error_tends_to_zero = false;
};

// Throws ConditionZeroViolated when the eps = 0 problem is singular.
SweepReport two_sided_sweep(const ProblemFamily& fam, const std::vector<double>& eps_sequence,
                            const HolderIndex& idx, const AnalysisOptions& opts = {});

struct ContinuityVerdict {
  std::string family;
  // criterion side
  bool condition_zero = false;
  double cond0_margin = 0.0;
  bool limit_I = false;
  bool limit_II = false;
  bool criterion = false;
  // behavior side
  bool solvable = false;    // (*) along the sweep, eps = 0 included
  bool continuous = false;  // (**) family data and matrix problem converge
  bool behavior = false;
  bool agreement = false;
  std::vector<double> family_errors;  // successful eps only
  std::vector<double> matrix_errors;
  std::vector<std::string> notes;
};

ContinuityVerdict main_theorem_suite(const ProblemFamily& fam, const std::vector<double>& eps_sequence,
                                      const HolderIndex& idx, const AnalysisOptions& opts = {});

using OperatorBlackBox = std::function<GridFunction(const GridFunction&)>;

// Recovers A_0..A_{r-1} from L applied to Z = t^p I_m, p = 0..r-1:
//   A_{k+1} = (L(t^{k+1} I) - sum_{l<=k} A_l Z^{(l)}) / (k+1)!
std::vector<GridFunction> extract_coefficients_monomials(const OperatorBlackBox& op, int r, int m,
                                                         Interval iv, int degree);
std::vector<GridFunction> extract_coefficients_monomials(const ProblemFamily& fam, double eps,
                                                         int degree);

struct OperatorConvergenceReport {
  std::vector<double> eps_sequence;
  std::vector<double> S;  // sum_l ||A_l(eps) - A_l(0)||_{n,alpha}
  std::vector<double> P;  // max over probes ||L(eps)y - L(0)y||_{n,alpha} / ||y||_{n+r,alpha}
  double c2 = 0.0;
  bool bound_holds = false;  // P <= c2 S for every eps
  bool S_tends_to_zero = false;
  bool P_tends_to_zero = false;
  bool consistent = false;
};

OperatorConvergenceReport theorem2_equivalence_check(const ProblemFamily& fam,
                                          const std::vector<double>& eps_sequence,
                                          const std::vector<GridFunction>& probes,
                                          const HolderIndex& idx, const AnalysisOptions& opts = {});

struct BoundednessReport {
  std::vector<double> eps_sequence;
  std::vector<double> estimates;  // max over probes |B(eps)y| / ||y||_{n+r,alpha}
  bool bounded = false;
};

BoundednessReport boundedness_probe_B(const ProblemFamily& fam, const std::vector<double>& eps_sequence,
                                      const std::vector<GridFunction>& probes,
                                      const AnalysisOptions& opts = {});

}  // namespace hbvp
