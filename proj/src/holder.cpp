#include "hbvp/holder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hbvp {

HolderIndex::HolderIndex(int n, double alpha) : n_(n), alpha_(alpha) {
  if (n < 0) throw std::invalid_argument("Hoelder index n must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("Hoelder exponent must lie in (0,1], got " + std::to_string(alpha));
}

std::vector<double> sampling_grid(const GridFunction& g, int samples) {
  if (samples < 1) throw std::invalid_argument("sampling_grid: samples must be positive");
  const Interval iv = g.interval();
  std::vector<double> ts = g.nodes();
  ts.reserve(ts.size() + static_cast<std::size_t>(samples) + 1);
  const double h = iv.length() / samples;
  for (int k = 0; k <= samples; ++k) ts.push_back(k == samples ? iv.b : iv.a + k * h);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

std::vector<double> merged_grid(const std::vector<GridFunction>& gs, int samples) {
  if (gs.empty()) throw std::invalid_argument("merged_grid: no functions");
  std::vector<double> ts;
  for (const auto& g : gs) {
    const auto part = sampling_grid(g, samples);
    ts.insert(ts.end(), part.begin(), part.end());
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

double sup_norm(const GridFunction& g, int samples) {
  const auto ts = sampling_grid(g, samples);
  const Eigen::MatrixXcd s = g.samples(ts);
  double total = 0.0;
  for (Eigen::Index e = 0; e < s.cols(); ++e) total += s.col(e).cwiseAbs().maxCoeff();
  return total;
}

double max_difference_quotient(const std::vector<double>& ts, const Eigen::VectorXcd& x,
                               double alpha) {
  const std::size_t p = ts.size();
  double best = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const cplx xi = x[static_cast<Eigen::Index>(i)];
    for (std::size_t j = i + 1; j < p; ++j) {
      const double dt = ts[j] - ts[i];
      const double num = std::abs(x[static_cast<Eigen::Index>(j)] - xi);
      if (num == 0.0) continue;
      const double q = num / (alpha == 1.0 ? dt : std::pow(dt, alpha));
      if (q > best) best = q;
    }
  }
  return best;
}

namespace {

double seminorm_at(const GridFunction& top, double alpha, int samples) {
  const auto ts = sampling_grid(top, samples);
  const Eigen::MatrixXcd s = top.samples(ts);
  double total = 0.0;
  for (Eigen::Index e = 0; e < s.cols(); ++e)
    total += max_difference_quotient(ts, s.col(e), alpha);
  return total;
}

}  // namespace

SeminormValue holder_seminorm(const GridFunction& g, const HolderIndex& idx, int samples,
                              bool check_refinement) {
  if (samples < 64) throw std::invalid_argument("holder_seminorm: at least 64 samples required");
  const GridFunction top = differentiate(g, idx.n());
  SeminormValue out;
  out.value = seminorm_at(top, idx.alpha(), samples);
  if (check_refinement) {
    const double refined = seminorm_at(top, idx.alpha(), 2 * samples);
    out.converged = std::abs(refined - out.value) <= 1e-3 * std::abs(refined);
  }
  return out;
}

NormValue holder_norm(const GridFunction& g, const HolderIndex& idx, int samples,
                      bool check_refinement) {
  NormValue out;
  GridFunction d = g;
  for (int j = 0; j <= idx.n(); ++j) {
    if (j > 0) d = differentiate(d);
    out.sup_parts.push_back(sup_norm(d, samples));
  }
  if (samples < 64) throw std::invalid_argument("holder_norm: at least 64 samples required");
  out.seminorm = seminorm_at(d, idx.alpha(), samples);
  if (check_refinement) {
    const double refined = seminorm_at(d, idx.alpha(), 2 * samples);
    out.converged = std::abs(refined - out.seminorm) <= 1e-3 * std::abs(refined);
  }
  out.total = out.seminorm;
  for (double s : out.sup_parts) out.total += s;
  return out;
}

double holder_norm_on(const GridFunction& g, const HolderIndex& idx, const std::vector<double>& ts) {
  double total = 0.0;
  GridFunction d = g;
  for (int j = 0; j <= idx.n(); ++j) {
    if (j > 0) d = differentiate(d);
    const Eigen::MatrixXcd s = d.samples(ts);
    for (Eigen::Index e = 0; e < s.cols(); ++e) total += s.col(e).cwiseAbs().maxCoeff();
    if (j == idx.n())
      for (Eigen::Index e = 0; e < s.cols(); ++e) total += max_difference_quotient(ts, s.col(e), idx.alpha());
  }
  return total;
}

double algebra_constant(int n) {
  return std::ldexp(1.0, n + 1) * static_cast<double>((n + 1) * (n + 1));
}

}  // namespace hbvp
