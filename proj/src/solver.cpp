#include "hbvp/solver.hpp"

#include <cmath>

#include "hbvp/holder.hpp"

namespace hbvp {

CompanionSystem build_companion(const ProblemInstance& inst) {
  const int r = inst.r;
  const int m = inst.m;
  const int rm = r * m;
  std::vector<Expr> a(static_cast<std::size_t>(rm * rm), Expr::constant(0.0));
  auto at = [&](int i, int j) -> Expr& { return a[static_cast<std::size_t>(i * rm + j)]; };
  for (int blk = 0; blk + 1 < r; ++blk)
    for (int i = 0; i < m; ++i) at(blk * m + i, (blk + 1) * m + i) = Expr::constant(-1.0);
  for (int l = 0; l < r; ++l) {
    const auto entries = inst.coeffs[static_cast<std::size_t>(l)].exact_entries();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        at((r - 1) * m + i, l * m + j) = entries[static_cast<std::size_t>(i * m + j)];
  }
  std::vector<Expr> g(static_cast<std::size_t>(rm), Expr::constant(0.0));
  const auto f = inst.rhs.exact_entries();
  for (int i = 0; i < m; ++i) g[static_cast<std::size_t>((r - 1) * m + i)] = f[static_cast<std::size_t>(i)];

  CompanionSystem cs;
  cs.r = r;
  cs.m = m;
  cs.A = GridFunction::from_exprs(a, rm, rm, inst.interval, inst.degree);
  cs.g = GridFunction::from_exprs(g, rm, 1, inst.interval, inst.degree);
  return cs;
}

GridFunction lift(const GridFunction& y, int r) {
  std::vector<GridFunction> parts{y};
  for (int k = 1; k < r; ++k) parts.push_back(differentiate(parts.back()));
  return vstack(parts);
}

namespace {

// Rectangular collocation for x' + A x = rhs_c, x(a) = x0_c, one column per
// right-hand side. The ODE is imposed at N first-kind points and the initial
// condition closes the system. Returns one (N+1) x rm block per column.
std::vector<Eigen::MatrixXcd> solve_ivp(const GridFunction& A, const std::vector<Eigen::MatrixXcd>& rhs_at_s,
                                        const std::vector<Eigen::VectorXcd>& x0, int degree) {
  const Interval iv = A.interval();
  const int n = A.rows();
  const int n1 = degree + 1;
  const auto nodes = cheb::lobatto_nodes(degree, iv);
  const auto s = cheb::gauss_nodes(degree, iv);
  const Eigen::MatrixXd p = cheb::interp_matrix(nodes, cheb::lobatto_weights(degree), s);
  const Eigen::MatrixXd pd = p * cheb::diff_matrix(degree, iv);
  const Eigen::MatrixXcd as = A.samples(s);

  const int size = n * n1;
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(size, size);
  for (int i = 0; i < n; ++i) {
    k.block(i * degree, i * n1, degree, n1) += pd.cast<cplx>();
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXcd aij = as.col(i * n + j);
      if (aij.cwiseAbs().maxCoeff() == 0.0) continue;
      k.block(i * degree, j * n1, degree, n1) += aij.asDiagonal() * p.cast<cplx>();
    }
  }
  for (int i = 0; i < n; ++i) k(n * degree + i, i * n1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(k);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(size, static_cast<Eigen::Index>(x0.size()));
  for (std::size_t c = 0; c < x0.size(); ++c) {
    const auto cc = static_cast<Eigen::Index>(c);
    for (int i = 0; i < n; ++i) {
      rhs.block(i * degree, cc, degree, 1) = rhs_at_s[c].col(i);
      rhs(n * degree + i, cc) = x0[c][i];
    }
  }
  const Eigen::MatrixXcd u = lu.solve(rhs);
  if (!u.allFinite())
    throw SolveFailure("collocation matrix singular at degree " + std::to_string(degree) +
                       "; increase the degree");
  std::vector<Eigen::MatrixXcd> out;
  for (std::size_t c = 0; c < x0.size(); ++c) {
    Eigen::MatrixXcd v(n1, n);
    for (int i = 0; i < n; ++i) v.col(i) = u.block(i * n1, static_cast<Eigen::Index>(c), n1, 1);
    out.push_back(std::move(v));
  }
  return out;
}

struct CompanionParts {
  FundamentalMatrix fm;
  GridFunction xp;
};

GridFunction columns_to_matrix(const std::vector<Eigen::MatrixXcd>& cols, int n, Interval iv) {
  const auto n1 = cols.front().rows();
  Eigen::MatrixXcd v(n1, n * static_cast<int>(cols.size()));
  const int k = static_cast<int>(cols.size());
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < n; ++i) v.col(i * k + c) = cols[static_cast<std::size_t>(c)].col(i);
  return GridFunction::from_values(std::move(v), n, k, iv);
}

double ivp_residual(const GridFunction& A, const GridFunction& X, const GridFunction* g) {
  const int samples = 4 * X.degree();
  std::vector<double> ts;
  const Interval iv = X.interval();
  for (int k = 0; k <= samples; ++k) ts.push_back(iv.a + iv.length() * k / samples);
  const Eigen::MatrixXcd dx = differentiate(X).samples(ts);
  const Eigen::MatrixXcd xs = X.samples(ts);
  const Eigen::MatrixXcd as = A.samples(ts);
  const Eigen::MatrixXcd gs = g ? g->samples(ts) : Eigen::MatrixXcd();
  const int n = A.rows();
  const int k = X.cols();
  double worst = 0.0;
  for (std::size_t q = 0; q < ts.size(); ++q) {
    const auto qq = static_cast<Eigen::Index>(q);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < k; ++c) {
        cplx v = dx(qq, i * k + c);
        for (int j = 0; j < n; ++j) v += as(qq, i * n + j) * xs(qq, j * k + c);
        if (g) v -= gs(qq, i);
        worst = std::max(worst, std::abs(v));
      }
  }
  return worst;
}

CompanionParts companion_solve(const CompanionSystem& cs, int degree, bool with_particular) {
  const int n = cs.A.rows();
  const Interval iv = cs.A.interval();
  const auto s = cheb::gauss_nodes(degree, iv);
  std::vector<Eigen::MatrixXcd> rhs;
  std::vector<Eigen::VectorXcd> x0;
  for (int c = 0; c < n; ++c) {
    rhs.push_back(Eigen::MatrixXcd::Zero(degree, n));
    x0.push_back(Eigen::VectorXcd::Unit(n, c));
  }
  if (with_particular) {
    rhs.push_back(cs.g.samples(s));
    x0.push_back(Eigen::VectorXcd::Zero(n));
  }
  auto cols = solve_ivp(cs.A, rhs, x0, degree);
  CompanionParts out;
  if (with_particular) {
    Eigen::MatrixXcd xp = cols.back();
    cols.pop_back();
    out.xp = GridFunction::from_values(std::move(xp), n, 1, iv);
  }
  out.fm.X = columns_to_matrix(cols, n, iv);
  out.fm.residual = ivp_residual(cs.A, out.fm.X, nullptr);
  return out;
}

double singular_min(const Eigen::MatrixXcd& m, double* largest = nullptr) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (largest) *largest = sv.size() ? sv(0) : 0.0;
  return sv.size() ? sv(sv.size() - 1) : 0.0;
}

void check_residual(const ProblemInstance& inst, Solution& sol, const SolveOptions& opts,
                    bool* accepted) {
  const GridFunction res = apply_L(inst, sol.y) - inst.rhs;
  sol.ode_residual = sup_norm(res, opts.residual_samples);
  sol.boundary_residual = vector_norm(apply_B(inst.boundary, sol.y) - inst.target);
  const double scale = 1.0 + sup_norm(inst.rhs, opts.residual_samples);
  *accepted = std::isfinite(sol.ode_residual) && sol.ode_residual <= opts.residual_tol * scale;
}

template <class Attempt>
Solution solve_with_retry(const ProblemInstance& inst, const SolveOptions& opts, Attempt attempt) {
  Solution sol = attempt(inst);
  bool ok = false;
  check_residual(inst, sol, opts, &ok);
  if (ok) return sol;
  if (opts.retry_doubled) {
    const ProblemInstance finer = inst.with_degree(2 * inst.degree);
    Solution retry = attempt(finer);
    check_residual(finer, retry, opts, &ok);
    if (ok) return retry;
    sol = retry;
  }
  throw SolveFailure("residual " + std::to_string(sol.ode_residual) + " above acceptance at degree " +
                     std::to_string(sol.degree) + " (eps=" + std::to_string(inst.eps) + ")");
}

}  // namespace

FundamentalMatrix fundamental_matrix(const CompanionSystem& cs, int degree) {
  const CompanionSystem at = {cs.r, cs.m, cs.A.resample(degree), cs.g.resample(degree)};
  return companion_solve(at, degree, false).fm;
}

GridFunction particular_solution(const CompanionSystem& cs, int degree) {
  const int n = cs.A.rows();
  const auto s = cheb::gauss_nodes(degree, cs.A.interval());
  auto cols = solve_ivp(cs.A, {cs.g.samples(s)}, {Eigen::VectorXcd::Zero(n)}, degree);
  return GridFunction::from_values(std::move(cols.front()), n, 1, cs.A.interval());
}

CharacteristicMatrix characteristic_matrix(const BoundaryOperator& B, const FundamentalMatrix& fm) {
  const int rm = fm.X.rows();
  CharacteristicMatrix cm;
  cm.M = apply_B_columns(B, fm.X.block(0, 0, B.m, rm));
  cm.margin = singular_min(cm.M, &cm.norm);
  return cm;
}

ConditionZero check_condition_zero(const CharacteristicMatrix& cm, double rel_tol) {
  ConditionZero out;
  out.margin = cm.margin;
  out.tolerance = rel_tol * cm.norm;
  out.satisfied = cm.margin > out.tolerance;
  return out;
}

Solution solve_bvp(const ProblemInstance& inst, const SolveOptions& opts) {
  return solve_with_retry(inst, opts, [&](const ProblemInstance& in) {
    const CompanionSystem cs = build_companion(in);
    const CompanionParts parts = companion_solve(cs, in.degree, true);
    const CharacteristicMatrix cm = characteristic_matrix(in.boundary, parts.fm);
    const ConditionZero c0 = check_condition_zero(cm, opts.cond0_rel_tol);
    if (!c0.satisfied) throw ConditionZeroViolated(c0.margin, c0.tolerance);
    const int m = in.m;
    const int rm = in.r * m;
    const Eigen::VectorXcd bxp = apply_B(in.boundary, parts.xp.block(0, 0, m, 1));
    const Eigen::VectorXcd v = cm.M.partialPivLu().solve(in.target - bxp);
    const Eigen::MatrixXcd& xv = parts.fm.X.values();
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(xv.rows(), m);
    for (int i = 0; i < m; ++i) {
      y.col(i) = parts.xp.values().col(i);
      for (int k = 0; k < rm; ++k) y.col(i) += v[k] * xv.col(i * rm + k);
    }
    Solution sol;
    sol.y = GridFunction::from_values(std::move(y), m, 1, in.interval);
    sol.cond0_margin = c0.margin;
    sol.degree = in.degree;
    return sol;
  });
}

Eigen::MatrixXcd collocation_matrix(const ProblemInstance& inst) {
  const int degree = inst.degree;
  const int n1 = degree + 1;
  const int m = inst.m;
  const int r = inst.r;
  const int rows_per = n1 - r;
  if (rows_per < 1) throw SolveFailure("degree too small for the equation order");
  const Interval iv = inst.interval;
  const auto nodes = cheb::lobatto_nodes(degree, iv);
  const auto s = cheb::gauss_nodes(rows_per, iv);
  const Eigen::MatrixXd p = cheb::interp_matrix(nodes, cheb::lobatto_weights(degree), s);
  const Eigen::MatrixXd d = cheb::diff_matrix(degree, iv);
  std::vector<Eigen::MatrixXcd> pdl;  // P D^l, l = 0..r
  Eigen::MatrixXd dl = Eigen::MatrixXd::Identity(n1, n1);
  for (int l = 0; l <= r; ++l) {
    pdl.push_back((p * dl).cast<cplx>());
    dl = d * dl;
  }
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(m * n1, m * n1);
  for (int i = 0; i < m; ++i) k.block(i * rows_per, i * n1, rows_per, n1) += pdl[static_cast<std::size_t>(r)];
  for (int l = 0; l < r; ++l) {
    const Eigen::MatrixXcd as = inst.coeffs[static_cast<std::size_t>(l)].samples(s);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Eigen::VectorXcd aij = as.col(i * m + j);
        if (aij.cwiseAbs().maxCoeff() == 0.0) continue;
        k.block(i * rows_per, j * n1, rows_per, n1) += aij.asDiagonal() * pdl[static_cast<std::size_t>(l)];
      }
  }
  k.bottomRows(r * m) = boundary_rows(inst.boundary, degree);
  return k;
}

Solution solve_direct(const ProblemInstance& inst, const SolveOptions& opts) {
  return solve_with_retry(inst, opts, [&](const ProblemInstance& in) {
    const int degree = in.degree;
    const int n1 = degree + 1;
    const int m = in.m;
    const int rows_per = n1 - in.r;
    const Eigen::MatrixXcd k = collocation_matrix(in);
    double largest = 0.0;
    const double smallest = singular_min(k, &largest);
    if (!(smallest > opts.cond0_rel_tol * 1e-3 * largest))
      throw ConditionZeroViolated(smallest, opts.cond0_rel_tol * 1e-3 * largest);
    const auto s = cheb::gauss_nodes(rows_per, in.interval);
    const Eigen::MatrixXcd fs = in.rhs.samples(s);
    Eigen::VectorXcd rhs(m * n1);
    for (int i = 0; i < m; ++i) rhs.segment(i * rows_per, rows_per) = fs.col(i);
    rhs.tail(in.r * m) = in.target;
    const Eigen::VectorXcd u = k.partialPivLu().solve(rhs);
    Eigen::MatrixXcd y(n1, m);
    for (int i = 0; i < m; ++i) y.col(i) = u.segment(i * n1, n1);
    Solution sol;
    sol.y = GridFunction::from_values(std::move(y), m, 1, in.interval);
    sol.cond0_margin = smallest;
    sol.degree = degree;
    return sol;
  });
}

namespace {

GridFunction matrix_bvp_at(const ProblemInstance& inst, const SolveOptions& opts) {
  const CompanionSystem cs = build_companion(inst);
  const FundamentalMatrix fm = companion_solve(cs, inst.degree, false).fm;
  const CharacteristicMatrix cm = characteristic_matrix(inst.boundary, fm);
  const ConditionZero c0 = check_condition_zero(cm, opts.cond0_rel_tol);
  if (!c0.satisfied) throw ConditionZeroViolated(c0.margin, c0.tolerance);
  const int m = inst.m;
  const int rm = inst.r * m;
  const Eigen::MatrixXcd minv = cm.M.inverse();
  const Eigen::MatrixXcd& xv = fm.X.values();
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(xv.rows(), m * rm);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < rm; ++j)
      for (int k = 0; k < rm; ++k) y.col(i * rm + j) += minv(k, j) * xv.col(i * rm + k);
  return GridFunction::from_values(std::move(y), m, rm, inst.interval);
}

}  // namespace

GridFunction solve_matrix_bvp(const ProblemInstance& inst, const SolveOptions& opts) {
  GridFunction y = matrix_bvp_at(inst, opts);
  double res = sup_norm(apply_L(inst, y), opts.residual_samples);
  if (res <= opts.residual_tol) return y;
  if (opts.retry_doubled) {
    const ProblemInstance finer = inst.with_degree(2 * inst.degree);
    y = matrix_bvp_at(finer, opts);
    res = sup_norm(apply_L(finer, y), opts.residual_samples);
    if (res <= opts.residual_tol) return y;
  }
  throw SolveFailure("matrix problem residual " + std::to_string(res) + " above acceptance (eps=" +
                     std::to_string(inst.eps) + ")");
}

GridFunction recover_coefficients(const FundamentalMatrix& fm) {
  const GridFunction& x = fm.X;
  const int n = x.rows();
  const GridFunction dx = differentiate(x);
  Eigen::MatrixXcd out(x.degree() + 1, n * n);
  for (int k = 0; k <= x.degree(); ++k) {
    Eigen::MatrixXcd xk(n, n);
    Eigen::MatrixXcd dk(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        xk(i, j) = x.values()(k, i * n + j);
        dk(i, j) = dx.values()(k, i * n + j);
      }
    double largest = 0.0;
    const double smallest = singular_min(xk, &largest);
    if (!(smallest > 1e-12 * largest))
      throw SolveFailure("fundamental matrix nearly singular at node " + std::to_string(k));
    const Eigen::MatrixXcd a = -dk * xk.inverse();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(k, i * n + j) = a(i, j);
  }
  return GridFunction::from_values(std::move(out), n, n, x.interval());
}

GridFunction apply_L(const ProblemInstance& inst, const GridFunction& y) {
  if (y.rows() != inst.m) throw ShapeError("apply_L: function must have m rows");
  std::vector<GridFunction> d{y};
  for (int k = 1; k <= inst.r; ++k) d.push_back(differentiate(d.back()));
  GridFunction out = d[static_cast<std::size_t>(inst.r)];
  for (int l = 0; l < inst.r; ++l)
    out = out + product(inst.coeffs[static_cast<std::size_t>(l)], d[static_cast<std::size_t>(l)]);
  return out;
}

FredholmReport discrete_fredholm(const ProblemInstance& inst, double rel_tol) {
  const Eigen::MatrixXcd k = collocation_matrix(inst);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k);
  const auto& sv = svd.singularValues();
  FredholmReport rep;
  rep.size = static_cast<int>(k.rows());
  rep.sigma_max = sv(0);
  rep.sigma_min = sv(sv.size() - 1);
  const double tol = rel_tol * rep.sigma_max;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rep.rank;
  rep.nullity = rep.size - rep.rank;
  rep.corank = static_cast<int>(k.rows()) - rep.rank;
  return rep;
}

}  // namespace hbvp
