#pragma once

#include <vector>

#include "hbvp/grid_function.hpp"

namespace hbvp {

// Index (n, alpha) of the Hoelder space C^{n,alpha}.
class HolderIndex {
 public:
  HolderIndex(int n, double alpha);

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  HolderIndex raised(int r) const { return HolderIndex(n_ + r, alpha_); }

 private:
  int n_;
  double alpha_;
};

inline constexpr int kDefaultSamples = 1024;

struct SeminormValue {
  double value = 0.0;
  // false if doubling the sample count moved the value by more than 0.1%
  bool converged = true;
};

struct NormValue {
  std::vector<double> sup_parts;  // j = 0..n
  double seminorm = 0.0;
  double total = 0.0;
  bool converged = true;
};

// Uniform grid with `samples` subintervals, merged with the Lobatto nodes of g.
// Doubling `samples` yields a superset.
std::vector<double> sampling_grid(const GridFunction& g, int samples);

// Union of the sampling grids of several functions; norms evaluated on a
// common grid keep product inequalities exact between sampled values.
std::vector<double> merged_grid(const std::vector<GridFunction>& gs, int samples);

// Sum over entries of max |g_e| on the sampling grid.
double sup_norm(const GridFunction& g, int samples = kDefaultSamples);

// Lower bound of the Hoelder seminorm of g^{(n)}, exhaustive over sample pairs,
// summed over entries.
SeminormValue holder_seminorm(const GridFunction& g, const HolderIndex& idx,
                              int samples = kDefaultSamples, bool check_refinement = true);

NormValue holder_norm(const GridFunction& g, const HolderIndex& idx, int samples = kDefaultSamples,
                      bool check_refinement = true);

// Norm with every part sampled on the given sorted grid.
double holder_norm_on(const GridFunction& g, const HolderIndex& idx, const std::vector<double>& ts);

// Largest difference quotient |x(t2)-x(t1)|/|t2-t1|^alpha over the given
// sample values, one entry.
double max_difference_quotient(const std::vector<double>& ts, const Eigen::VectorXcd& x,
                               double alpha);

// Certified constant for ||fg||_{n,alpha} <= K ||f|| ||g||.
double algebra_constant(int n);

}  // namespace hbvp
