#include "hbvp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

namespace hbvp {

namespace {

int effective_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("HBVP_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count); the first exception is rethrown after all workers finish.
template <class F>
void parallel_for(int count, int jobs, F&& fn) {
  const int workers = std::min(effective_jobs(jobs), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double norm_of(const GridFunction& g, const HolderIndex& idx, const AnalysisOptions& opts) {
  return holder_norm(g, idx, opts.samples, opts.check_refinement).total;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> geometric_sequence(double eps0, double factor, int count) {
  std::vector<double> out;
  double e = eps0;
  for (int k = 0; k < count; ++k) {
    e *= factor;
    out.push_back(e);
  }
  return out;
}

bool tends_to_zero(const std::vector<double>& values, const AnalysisOptions& opts) {
  if (values.empty()) return false;
  for (double v : values)
    if (!std::isfinite(v)) return false;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v <= opts.zero_floor; }))
    return true;
  const int n = static_cast<int>(values.size());
  if (n < opts.tail_length) return false;
  for (int i = n - opts.tail_length + 1; i < n; ++i) {
    const double prev = values[static_cast<std::size_t>(i - 1)];
    const double cur = values[static_cast<std::size_t>(i)];
    if (!(cur < prev || cur <= opts.zero_floor)) return false;
  }
  return values.back() < opts.tail_factor * (values.front() + 1.0);
}

std::vector<GridFunction> default_probes(const ProblemFamily& fam, int degree) {
  std::vector<Expr> shapes;
  for (int p = 0; p <= fam.r + 2; ++p) shapes.push_back(pow(Expr::t(), p));
  shapes.push_back(sin(Expr::t()));
  shapes.push_back(cos(Expr::t()));
  std::vector<GridFunction> out;
  for (const auto& s : shapes) {
    for (int q = 0; q < fam.m; ++q) {
      std::vector<Expr> entries(static_cast<std::size_t>(fam.m), Expr::constant(0.0));
      entries[static_cast<std::size_t>(q)] = s;
      out.push_back(GridFunction::from_exprs(entries, fam.m, 1, fam.interval, degree));
    }
  }
  return out;
}

Discrepancy discrepancy(const ProblemFamily& fam, double eps, const GridFunction& y0,
                        const HolderIndex& idx, const AnalysisOptions& opts) {
  const ProblemInstance inst = instantiate(fam, eps, std::max(y0.degree(), opts.degree));
  Discrepancy d;
  d.interior = norm_of(apply_L(inst, y0) - inst.rhs, idx, opts);
  d.boundary = vector_norm(apply_B(inst.boundary, y0) - inst.target);
  return d;
}

double discrepancy_certificate(const ProblemFamily& fam, double eps, const HolderIndex& idx,
                               const AnalysisOptions& opts) {
  const ProblemInstance inst = instantiate(fam, eps, opts.degree);
  double a = 0.0;
  for (const auto& c : inst.coeffs) a += norm_of(c, idx, opts);
  // ||x^{(j)}||_{n,alpha} <= max(1, |I|^{1-alpha}) ||x||_{n+r,alpha} for j < r
  const double shift = std::max(1.0, std::pow(fam.interval.length(), 1.0 - idx.alpha()));
  return shift * (1.0 + algebra_constant(idx.n()) * a) + boundary_bound(inst.boundary);
}

LimitConditionReport limit_conditions_report(const ProblemFamily& fam,
                                             const std::vector<double>& eps_sequence,
                                             const std::vector<GridFunction>& probes,
                                             const HolderIndex& idx, const AnalysisOptions& opts) {
  const ProblemInstance inst0 = instantiate(fam, 0.0, opts.degree);
  std::vector<Eigen::VectorXcd> b0;
  for (const auto& y : probes) b0.push_back(apply_B(inst0.boundary, y));

  const std::size_t count = eps_sequence.size();
  LimitConditionReport rep;
  rep.eps_sequence = eps_sequence;
  rep.condI_norms.assign(count, {});
  rep.condII_probe.assign(count, 0.0);
  rep.condIII_norm.assign(count, 0.0);
  rep.condIV.assign(count, 0.0);

  parallel_for(static_cast<int>(count), opts.jobs, [&](int k) {
    const auto kk = static_cast<std::size_t>(k);
    const ProblemInstance inst = instantiate(fam, eps_sequence[kk], opts.degree);
    for (int l = 0; l < fam.r; ++l) {
      const auto ll = static_cast<std::size_t>(l);
      rep.condI_norms[kk].push_back(norm_of(inst.coeffs[ll] - inst0.coeffs[ll], idx, opts));
    }
    double worst = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p)
      worst = std::max(worst, vector_norm(apply_B(inst.boundary, probes[p]) - b0[p]));
    rep.condII_probe[kk] = worst;
    rep.condIII_norm[kk] = norm_of(inst.rhs - inst0.rhs, idx, opts);
    rep.condIV[kk] = vector_norm(inst.target - inst0.target);
  });

  rep.verdict_I = true;
  for (int l = 0; l < fam.r; ++l) {
    std::vector<double> seq;
    for (const auto& row : rep.condI_norms) seq.push_back(row[static_cast<std::size_t>(l)]);
    rep.verdict_I = rep.verdict_I && tends_to_zero(seq, opts);
  }
  rep.verdict_II = tends_to_zero(rep.condII_probe, opts);
  rep.verdict_III = tends_to_zero(rep.condIII_norm, opts);
  rep.verdict_IV = tends_to_zero(rep.condIV, opts);
  return rep;
}

SweepReport two_sided_sweep(const ProblemFamily& fam, const std::vector<double>& eps_sequence,
                            const HolderIndex& idx, const AnalysisOptions& opts) {
  const HolderIndex sol_idx = idx.raised(fam.r);
  const Solution base = solve_bvp(instantiate(fam, 0.0, opts.degree), opts.solve);
  SweepReport rep;
  rep.family = fam.name;
  rep.baseline_discrepancy = discrepancy(fam, 0.0, base.y, idx, opts).total();
  const double floor = 10.0 * rep.baseline_discrepancy;

  rep.records.assign(eps_sequence.size(), {});
  parallel_for(static_cast<int>(eps_sequence.size()), opts.jobs, [&](int k) {
    SweepRecord& rec = rep.records[static_cast<std::size_t>(k)];
    rec.eps = eps_sequence[static_cast<std::size_t>(k)];
    try {
      const Solution sol = solve_bvp(instantiate(fam, rec.eps, opts.degree), opts.solve);
      rec.solved = true;
      rec.degree = sol.degree;
      rec.cond0_margin = sol.cond0_margin;
      rec.ode_residual = sol.ode_residual;
      rec.boundary_residual = sol.boundary_residual;
      rec.error = norm_of(base.y - sol.y, sol_idx, opts);
    } catch (const ConditionZeroViolated& e) {
      rec.message = e.what();
      rec.cond0_margin = e.margin();
    } catch (const SolveFailure& e) {
      rec.message = e.what();
    } catch (const ProblemError& e) {
      rec.message = e.what();
    }
    try {
      rec.discrepancy = discrepancy(fam, rec.eps, base.y, idx, opts).total();
    } catch (const ProblemError& e) {
      rec.discrepancy = std::numeric_limits<double>::quiet_NaN();
      if (rec.message.empty()) rec.message = e.what();
    }
    if (rec.solved && rec.eps > 0.0 && rec.discrepancy > floor) rec.ratio = rec.error / rec.discrepancy;
  });

  std::vector<double> errors;
  for (const auto& rec : rep.records) {
    if (rec.solved) errors.push_back(rec.error);
    if (!rec.ratio) continue;
    rep.kappa_low = rep.kappa_low ? std::min(*rep.kappa_low, *rec.ratio) : *rec.ratio;
    rep.kappa_high = rep.kappa_high ? std::max(*rep.kappa_high, *rec.ratio) : *rec.ratio;
  }
  if (rep.kappa_low && rep.kappa_high)
    rep.band_ok = *rep.kappa_low > 0.0 && *rep.kappa_high / *rep.kappa_low <= opts.ratio_band;
  rep.error_tends_to_zero = errors.size() == eps_sequence.size() && tends_to_zero(errors, opts);
  return rep;
}

ContinuityVerdict main_theorem_suite(const ProblemFamily& fam, const std::vector<double>& eps_sequence,
                                      const HolderIndex& idx, const AnalysisOptions& opts) {
  ContinuityVerdict v;
  v.family = fam.name;
  const HolderIndex sol_idx = idx.raised(fam.r);

  const ProblemInstance inst0 = instantiate(fam, 0.0, opts.degree);
  {
    const CompanionSystem cs = build_companion(inst0);
    const CharacteristicMatrix cm =
        characteristic_matrix(inst0.boundary, fundamental_matrix(cs, opts.degree));
    const ConditionZero c0 = check_condition_zero(cm, opts.solve.cond0_rel_tol);
    v.condition_zero = c0.satisfied;
    v.cond0_margin = c0.margin;
  }
  const LimitConditionReport lim =
      limit_conditions_report(fam, eps_sequence, default_probes(fam, opts.degree), idx, opts);
  v.limit_I = lim.verdict_I;
  v.limit_II = lim.verdict_II;
  v.criterion = v.condition_zero && v.limit_I && v.limit_II;

  SolveOptions matrix_opts = opts.solve;
  matrix_opts.residual_tol = std::max(opts.matrix_residual_tol, opts.solve.residual_tol);
  GridFunction y0;
  GridFunction Y0;
  bool base_ok = false;
  try {
    y0 = solve_bvp(inst0, opts.solve).y;
    Y0 = solve_matrix_bvp(inst0, matrix_opts);
    base_ok = true;
  } catch (const std::runtime_error& e) {
    v.notes.push_back(std::string("eps=0: ") + e.what());
  }

  if (base_ok) {
    const std::size_t count = eps_sequence.size();
    std::vector<double> fam_err(count, 0.0);
    std::vector<double> mat_err(count, 0.0);
    std::vector<std::string> failure(count);
    parallel_for(static_cast<int>(count), opts.jobs, [&](int k) {
      const auto kk = static_cast<std::size_t>(k);
      try {
        const ProblemInstance inst = instantiate(fam, eps_sequence[kk], opts.degree);
        fam_err[kk] = norm_of(y0 - solve_bvp(inst, opts.solve).y, sol_idx, opts);
        mat_err[kk] = norm_of(Y0 - solve_matrix_bvp(inst, matrix_opts), sol_idx, opts);
      } catch (const std::runtime_error& e) {
        failure[kk] = e.what();
      }
    });
    v.solvable = true;
    for (std::size_t k = 0; k < count; ++k) {
      if (!failure[k].empty()) {
        v.solvable = false;
        v.notes.push_back("eps=" + std::to_string(eps_sequence[k]) + ": " + failure[k]);
        continue;
      }
      v.family_errors.push_back(fam_err[k]);
      v.matrix_errors.push_back(mat_err[k]);
    }
    v.continuous = v.solvable && tends_to_zero(v.family_errors, opts) &&
                   tends_to_zero(v.matrix_errors, opts);
  }
  v.behavior = v.solvable && v.continuous;
  v.agreement = v.behavior == v.criterion;
  return v;
}

std::vector<GridFunction> extract_coefficients_monomials(const OperatorBlackBox& op, int r, int m,
                                                         Interval iv, int degree) {
  const int n1 = degree + 1;
  const auto nodes = cheb::lobatto_nodes(degree, iv);
  const int mm = m * m;
  std::vector<Eigen::MatrixXcd> found;
  for (int p = 0; p < r; ++p) {
    std::vector<Expr> entries(static_cast<std::size_t>(mm), Expr::constant(0.0));
    for (int i = 0; i < m; ++i) entries[static_cast<std::size_t>(i * m + i)] = pow(Expr::t(), p);
    const GridFunction z = GridFunction::from_exprs(entries, m, m, iv, degree);
    const GridFunction lz = op(z);
    if (lz.rows() != m || lz.cols() != m)
      throw ShapeError("extract_coefficients_monomials: operator must map m x m to m x m");
    Eigen::MatrixXcd acc = lz.resample(degree).values();
    // Z^{(l)} = p!/(p-l)! t^{p-l} I
    for (int l = 0; l < p; ++l) {
      const double c = factorial(p) / factorial(p - l);
      for (int k = 0; k < n1; ++k)
        acc.row(k) -= c * std::pow(nodes[static_cast<std::size_t>(k)], p - l) *
                      found[static_cast<std::size_t>(l)].row(k);
    }
    found.push_back(acc / factorial(p));
  }
  std::vector<GridFunction> out;
  for (auto& a : found) out.push_back(GridFunction::from_values(std::move(a), m, m, iv));
  return out;
}

std::vector<GridFunction> extract_coefficients_monomials(const ProblemFamily& fam, double eps,
                                                         int degree) {
  const ProblemInstance inst = instantiate(fam, eps, degree);
  return extract_coefficients_monomials([&](const GridFunction& z) { return apply_L(inst, z); },
                                        fam.r, fam.m, fam.interval, degree);
}

OperatorConvergenceReport theorem2_equivalence_check(const ProblemFamily& fam,
                                          const std::vector<double>& eps_sequence,
                                          const std::vector<GridFunction>& probes,
                                          const HolderIndex& idx, const AnalysisOptions& opts) {
  const HolderIndex sol_idx = idx.raised(fam.r);
  const ProblemInstance inst0 = instantiate(fam, 0.0, opts.degree);

  std::vector<GridFunction> l0;
  for (const auto& y : probes) l0.push_back(apply_L(inst0, y));
  // One grid for every norm: coefficient, probe and product nodes all included.
  std::vector<GridFunction> members = l0;
  members.insert(members.end(), probes.begin(), probes.end());
  members.insert(members.end(), inst0.coeffs.begin(), inst0.coeffs.end());
  const std::vector<double> grid = merged_grid(members, opts.samples);

  std::vector<double> probe_norm;
  double ratio = 0.0;
  for (const auto& y : probes) {
    const double ny = holder_norm_on(y, sol_idx, grid);
    probe_norm.push_back(ny);
    GridFunction d = y;
    for (int j = 0; j < fam.r; ++j) {
      ratio = std::max(ratio, holder_norm_on(d, idx, grid) / ny);
      d = differentiate(d);
    }
  }

  OperatorConvergenceReport rep;
  rep.eps_sequence = eps_sequence;
  rep.c2 = algebra_constant(idx.n()) * ratio;
  rep.S.assign(eps_sequence.size(), 0.0);
  rep.P.assign(eps_sequence.size(), 0.0);
  parallel_for(static_cast<int>(eps_sequence.size()), opts.jobs, [&](int k) {
    const auto kk = static_cast<std::size_t>(k);
    const ProblemInstance inst = instantiate(fam, eps_sequence[kk], opts.degree);
    double s = 0.0;
    for (int l = 0; l < fam.r; ++l) {
      const auto ll = static_cast<std::size_t>(l);
      s += holder_norm_on(inst.coeffs[ll] - inst0.coeffs[ll], idx, grid);
    }
    double p = 0.0;
    for (std::size_t q = 0; q < probes.size(); ++q)
      p = std::max(p, holder_norm_on(apply_L(inst, probes[q]) - l0[q], idx, grid) / probe_norm[q]);
    rep.S[kk] = s;
    rep.P[kk] = p;
  });

  rep.bound_holds = true;
  for (std::size_t k = 0; k < eps_sequence.size(); ++k)
    if (!(rep.P[k] <= rep.c2 * rep.S[k] * (1.0 + 1e-9) + 1e-13)) rep.bound_holds = false;
  rep.S_tends_to_zero = tends_to_zero(rep.S, opts);
  rep.P_tends_to_zero = tends_to_zero(rep.P, opts);
  rep.consistent = rep.bound_holds && rep.S_tends_to_zero == rep.P_tends_to_zero;
  return rep;
}

BoundednessReport boundedness_probe_B(const ProblemFamily& fam, const std::vector<double>& eps_sequence,
                                      const std::vector<GridFunction>& probes,
                                      const AnalysisOptions& opts) {
  const HolderIndex sol_idx = fam.solution_index();
  std::vector<double> probe_norm;
  for (const auto& y : probes) probe_norm.push_back(norm_of(y, sol_idx, opts));

  BoundednessReport rep;
  rep.eps_sequence = eps_sequence;
  rep.estimates.assign(eps_sequence.size(), 0.0);
  parallel_for(static_cast<int>(eps_sequence.size()), opts.jobs, [&](int k) {
    const auto kk = static_cast<std::size_t>(k);
    const BoundaryOperator B = instantiate_boundary(fam, eps_sequence[kk], opts.degree);
    double est = 0.0;
    for (std::size_t q = 0; q < probes.size(); ++q)
      est = std::max(est, vector_norm(apply_B(B, probes[q])) / probe_norm[q]);
    rep.estimates[kk] = est;
  });

  rep.bounded = !rep.estimates.empty();
  double top = 0.0;
  for (double e : rep.estimates) {
    if (!std::isfinite(e)) rep.bounded = false;
    top = std::max(top, e);
  }
  if (rep.bounded) rep.bounded = top <= opts.growth_cap * std::max(rep.estimates.front(), 1e-300);
  return rep;
}

}  // namespace hbvp
