#include "hbvp/problem.hpp"

#include <algorithm>
#include <map>

#include "hbvp/log.hpp"

namespace hbvp {

ExprMatrix::ExprMatrix(int r, int c, std::vector<Expr> e) : rows(r), cols(c), entries(std::move(e)) {
  if (static_cast<int>(entries.size()) != r * c) throw ShapeError("ExprMatrix: entry count mismatch");
}

ExprMatrix ExprMatrix::identity(int n) {
  ExprMatrix id(n, n);
  for (int i = 0; i < n; ++i) id(i, i) = Expr::constant(1.0);
  return id;
}

bool ExprMatrix::depends_on_t() const {
  return std::any_of(entries.begin(), entries.end(), [](const Expr& e) { return e.depends_on_t(); });
}

Eigen::MatrixXcd ExprMatrix::eval(double t, double eps) const {
  Eigen::MatrixXcd out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = (*this)(i, j).eval(t, eps);
  return out;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ProblemError(what);
}

void require_shape(const ExprMatrix& e, int rows, int cols, const std::string& field) {
  require(e.rows == rows && e.cols == cols && static_cast<int>(e.entries.size()) == rows * cols,
          field + ": expected shape " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
              std::to_string(e.rows) + "x" + std::to_string(e.cols));
}

}  // namespace

void ProblemFamily::validate() const {
  require(r >= 1, "r: must be >= 1");
  require(m >= 1, "m: must be >= 1");
  require(interval.a < interval.b, "interval: need a < b");
  require(eps0 > 0.0, "eps0: must be positive");
  require(static_cast<int>(coeffs.size()) == r, "coeffs: expected " + std::to_string(r) + " matrices");
  for (int l = 0; l < r; ++l) require_shape(coeffs[l], m, m, "coeffs[" + std::to_string(l) + "]");
  if (coeffs_at_zero) {
    require(static_cast<int>(coeffs_at_zero->size()) == r,
            "coeffs_at_zero: expected " + std::to_string(r) + " matrices");
    for (int l = 0; l < r; ++l)
      require_shape((*coeffs_at_zero)[l], m, m, "coeffs_at_zero[" + std::to_string(l) + "]");
  }
  require_shape(rhs, m, 1, "rhs");
  require_shape(target, r * m, 1, "target");
  require(!target.depends_on_t(), "target: must not depend on t");
  require(!boundary.point_terms.empty() || !boundary.integral_terms.empty(),
          "boundary: at least one term required");
  const int max_order = idx.n() + r;
  for (std::size_t k = 0; k < boundary.point_terms.size(); ++k) {
    const auto& p = boundary.point_terms[k];
    const std::string key = "boundary.point_terms[" + std::to_string(k) + "]";
    require(p.order >= 0 && p.order <= max_order,
            key + ".order: must lie in [0, " + std::to_string(max_order) + "]");
    require(interval.contains(p.point), key + ".point: outside the interval");
    require_shape(p.coeff, r * m, m, key + ".coeff");
    require(!p.coeff.depends_on_t(), key + ".coeff: must not depend on t");
  }
  for (std::size_t k = 0; k < boundary.integral_terms.size(); ++k) {
    const auto& q = boundary.integral_terms[k];
    const std::string key = "boundary.integral_terms[" + std::to_string(k) + "]";
    require(q.order >= 0 && q.order <= max_order,
            key + ".order: must lie in [0, " + std::to_string(max_order) + "]");
    require_shape(q.density, r * m, m, key + ".density");
  }
}

int BoundaryOperator::max_order() const {
  int q = 0;
  for (const auto& p : point_terms) q = std::max(q, p.order);
  for (const auto& p : integral_terms) q = std::max(q, p.order);
  return q;
}

ProblemInstance ProblemInstance::with_degree(int new_degree) const {
  ProblemInstance out = *this;
  out.degree = new_degree;
  for (auto& a : out.coeffs) a = a.resample(new_degree);
  out.rhs = rhs.resample(new_degree);
  out.boundary.quadrature_order = std::max(2 * new_degree, 64);
  return out;
}

namespace {

template <class F>
auto with_context(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const EvalError& e) {
    throw ProblemError(context + ": " + e.what());
  }
}

std::string eps_text(double eps) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", eps);
  return buf;
}

}  // namespace

BoundaryOperator instantiate_boundary(const ProblemFamily& fam, double eps, int degree) {
  BoundaryOperator B;
  B.rows = fam.r * fam.m;
  B.m = fam.m;
  B.interval = fam.interval;
  B.quadrature_order = std::max(2 * degree, 64);
  const std::string at = " at eps=" + eps_text(eps);
  for (std::size_t k = 0; k < fam.boundary.point_terms.size(); ++k) {
    const auto& p = fam.boundary.point_terms[k];
    B.point_terms.push_back(
        {p.order, p.point,
         with_context("boundary.point_terms[" + std::to_string(k) + "].coeff" + at,
                      [&] { return p.coeff.eval(p.point, eps); })});
  }
  for (std::size_t k = 0; k < fam.boundary.integral_terms.size(); ++k) {
    const auto& q = fam.boundary.integral_terms[k];
    B.integral_terms.push_back(
        {q.order, with_context("boundary.integral_terms[" + std::to_string(k) + "].density" + at, [&] {
           return GridFunction::from_exprs(q.density.entries, q.density.rows, q.density.cols,
                                           fam.interval, degree, eps);
         })});
  }
  return B;
}

ProblemInstance instantiate(const ProblemFamily& fam, double eps, int degree) {
  if (!(eps >= 0.0 && eps < fam.eps0))
    throw ProblemError("eps=" + eps_text(eps) + " outside [0, eps0=" + eps_text(fam.eps0) + ")");
  ProblemInstance inst;
  inst.name = fam.name;
  inst.r = fam.r;
  inst.m = fam.m;
  inst.idx = fam.idx;
  inst.interval = fam.interval;
  inst.eps = eps;
  inst.degree = degree;
  const std::string at = " at eps=" + eps_text(eps);
  const auto& coeffs = fam.coeffs_at(eps);
  for (int l = 0; l < fam.r; ++l) {
    inst.coeffs.push_back(with_context("coeffs[" + std::to_string(l) + "]" + at, [&] {
      return GridFunction::from_exprs(coeffs[l].entries, fam.m, fam.m, fam.interval, degree, eps);
    }));
  }
  inst.rhs = with_context("rhs" + at, [&] {
    return GridFunction::from_exprs(fam.rhs.entries, fam.m, 1, fam.interval, degree, eps);
  });
  inst.boundary = instantiate_boundary(fam, eps, degree);
  inst.target = with_context("target" + at, [&] {
    const Eigen::MatrixXcd c = fam.target.eval(fam.interval.a, eps);
    return Eigen::VectorXcd(c.col(0));
  });
  return inst;
}

Eigen::VectorXcd apply_B(const BoundaryOperator& B, const GridFunction& y, int quadrature_order) {
  if (y.rows() != B.m || y.cols() != 1)
    throw ShapeError("apply_B: expected an " + std::to_string(B.m) + "x1 function");
  const int q_order = quadrature_order > 0 ? quadrature_order : B.quadrature_order;
  std::map<int, GridFunction> derivs;
  auto derivative = [&](int q) -> const GridFunction& {
    auto it = derivs.find(q);
    if (it == derivs.end()) it = derivs.emplace(q, differentiate(y, q)).first;
    return it->second;
  };

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(B.rows);
  for (const auto& p : B.point_terms) out += p.coeff * derivative(p.order).at(p.point).col(0);

  if (!B.integral_terms.empty()) {
    if (q_order < y.degree())
      warn("apply_B: quadrature order " + std::to_string(q_order) + " below the degree " +
           std::to_string(y.degree()) + " of y");
    const auto s = cheb::lobatto_nodes(q_order, B.interval);
    const auto w = cheb::clenshaw_curtis_weights(q_order, B.interval);
    for (const auto& term : B.integral_terms) {
      const Eigen::MatrixXcd ys = derivative(term.order).samples(s);
      const Eigen::MatrixXcd ds = term.density.samples(s);
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        for (int i = 0; i < B.rows; ++i)
          for (int j = 0; j < B.m; ++j) out[i] += w[k] * ds(kk, i * B.m + j) * ys(kk, j);
      }
    }
  }
  return out;
}

Eigen::MatrixXcd apply_B_columns(const BoundaryOperator& B, const GridFunction& Y) {
  if (Y.rows() != B.m) throw ShapeError("apply_B_columns: row count must equal m");
  Eigen::MatrixXcd out(B.rows, Y.cols());
  for (int k = 0; k < Y.cols(); ++k) out.col(k) = apply_B(B, Y.block(0, k, B.m, 1));
  return out;
}

Eigen::MatrixXcd boundary_rows(const BoundaryOperator& B, int degree) {
  const int n1 = degree + 1;
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(B.rows, B.m * n1);
  const auto nodes = cheb::lobatto_nodes(degree, B.interval);
  const auto bw = cheb::lobatto_weights(degree);
  const Eigen::MatrixXd d = cheb::diff_matrix(degree, B.interval);
  auto dpow = [&](int q) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n1, n1);
    for (int k = 0; k < q; ++k) r = d * r;
    return r;
  };

  for (const auto& p : B.point_terms) {
    const Eigen::RowVectorXd e = cheb::interp_matrix(nodes, bw, {p.point}) * dpow(p.order);
    for (int i = 0; i < B.rows; ++i)
      for (int j = 0; j < B.m; ++j) rows.block(i, j * n1, 1, n1) += p.coeff(i, j) * e.cast<cplx>();
  }
  if (!B.integral_terms.empty()) {
    const auto s = cheb::lobatto_nodes(B.quadrature_order, B.interval);
    const auto w = cheb::clenshaw_curtis_weights(B.quadrature_order, B.interval);
    const Eigen::MatrixXd interp = cheb::interp_matrix(nodes, bw, s);
    for (const auto& term : B.integral_terms) {
      const Eigen::MatrixXcd r = (interp * dpow(term.order)).cast<cplx>();
      const Eigen::MatrixXcd ds = term.density.samples(s);
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        for (int i = 0; i < B.rows; ++i)
          for (int j = 0; j < B.m; ++j)
            rows.block(i, j * n1, 1, n1) += (w[k] * ds(kk, i * B.m + j)) * r.row(kk);
      }
    }
  }
  return rows;
}

double boundary_bound(const BoundaryOperator& B) {
  double c = 0.0;
  for (const auto& p : B.point_terms) c += p.coeff.cwiseAbs().sum();
  if (!B.integral_terms.empty()) {
    const auto s = cheb::lobatto_nodes(B.quadrature_order, B.interval);
    const auto w = cheb::clenshaw_curtis_weights(B.quadrature_order, B.interval);
    for (const auto& term : B.integral_terms) {
      const Eigen::MatrixXcd ds = term.density.samples(s);
      for (std::size_t k = 0; k < s.size(); ++k)
        c += std::abs(w[k]) * ds.row(static_cast<Eigen::Index>(k)).cwiseAbs().sum();
    }
  }
  return c;
}

double vector_norm(const Eigen::VectorXcd& v) { return v.cwiseAbs().sum(); }

}  // namespace hbvp
