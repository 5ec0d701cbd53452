#include "hbvp/grid_function.hpp"

#include <algorithm>
#include <string>

#include "hbvp/log.hpp"

namespace hbvp {

namespace {

void check_degree(int degree) {
  if (degree < kMinDegree)
    throw std::invalid_argument("grid degree " + std::to_string(degree) + " is below the minimum " +
                                std::to_string(kMinDegree));
}

void check_same_shape(const GridFunction& f, const GridFunction& g, const char* what) {
  if (f.rows() != g.rows() || f.cols() != g.cols())
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(f.rows()) + "x" +
                     std::to_string(f.cols()) + " vs " + std::to_string(g.rows()) + "x" +
                     std::to_string(g.cols()));
  if (f.interval().a != g.interval().a || f.interval().b != g.interval().b)
    throw ShapeError(std::string(what) + ": interval mismatch");
}

}  // namespace

cplx eval_nudged(const Expr& e, double t, Interval iv) {
  try {
    return e.eval(t, 0.0);
  } catch (const EvalError&) {
    const double delta = 1e-12 * iv.length();
    const double moved = (t + delta <= iv.b) ? t + delta : t - delta;
    return e.eval(moved, 0.0);
  }
}

GridFunction GridFunction::from_exprs(const std::vector<Expr>& entries, int rows, int cols,
                                      Interval iv, int degree, double eps) {
  check_degree(degree);
  if (static_cast<int>(entries.size()) != rows * cols)
    throw ShapeError("from_exprs: expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(entries.size()));
  std::vector<Expr> bound;
  bound.reserve(entries.size());
  for (const auto& e : entries) bound.push_back(substitute_eps(e, eps));
  const auto t = cheb::lobatto_nodes(degree, iv);
  Eigen::MatrixXcd values(degree + 1, rows * cols);
  for (int e = 0; e < rows * cols; ++e)
    for (int k = 0; k <= degree; ++k) values(k, e) = eval_nudged(bound[e], t[k], iv);
  return GridFunction(std::move(values), rows, cols, iv, std::move(bound));
}

GridFunction GridFunction::from_values(Eigen::MatrixXcd values, int rows, int cols, Interval iv) {
  check_degree(static_cast<int>(values.rows()) - 1);
  if (values.cols() != rows * cols) throw ShapeError("from_values: column count must equal rows*cols");
  return GridFunction(std::move(values), rows, cols, iv, std::nullopt);
}

GridFunction GridFunction::constant(const Eigen::MatrixXcd& value, Interval iv, int degree) {
  std::vector<Expr> entries;
  for (Eigen::Index i = 0; i < value.rows(); ++i)
    for (Eigen::Index j = 0; j < value.cols(); ++j) entries.push_back(Expr::constant(value(i, j)));
  return from_exprs(entries, static_cast<int>(value.rows()), static_cast<int>(value.cols()), iv,
                    degree);
}

cplx GridFunction::entry_at(int e, double t) const {
  if (source_) return eval_nudged((*source_)[e], t, iv_);
  return cheb::barycentric(nodes(), cheb::lobatto_weights(degree()), values_.col(e), t);
}

Eigen::MatrixXcd GridFunction::at(double t) const {
  Eigen::MatrixXcd m(rows_, cols_);
  if (source_) {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = eval_nudged((*source_)[i * cols_ + j], t, iv_);
    return m;
  }
  const Eigen::MatrixXd p = cheb::interp_matrix(nodes(), cheb::lobatto_weights(degree()), {t});
  const Eigen::RowVectorXcd row = p.cast<cplx>() * values_;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = row(i * cols_ + j);
  return m;
}

Eigen::MatrixXcd GridFunction::samples(const std::vector<double>& ts) const {
  if (!source_) {
    const Eigen::MatrixXd p = cheb::interp_matrix(nodes(), cheb::lobatto_weights(degree()), ts);
    return p.cast<cplx>() * values_;
  }
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(ts.size()), entries());
  for (int e = 0; e < entries(); ++e)
    for (std::size_t k = 0; k < ts.size(); ++k)
      out(static_cast<Eigen::Index>(k), e) = eval_nudged((*source_)[e], ts[k], iv_);
  return out;
}

GridFunction GridFunction::block(int row, int col, int nrows, int ncols) const {
  if (row < 0 || col < 0 || row + nrows > rows_ || col + ncols > cols_)
    throw ShapeError("block: out of range");
  Eigen::MatrixXcd v(values_.rows(), nrows * ncols);
  std::optional<std::vector<Expr>> src;
  if (source_) src.emplace();
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) {
      const int from = (row + i) * cols_ + (col + j);
      v.col(i * ncols + j) = values_.col(from);
      if (source_) src->push_back((*source_)[from]);
    }
  return GridFunction(std::move(v), nrows, ncols, iv_, std::move(src));
}

GridFunction GridFunction::without_source() const {
  return GridFunction(values_, rows_, cols_, iv_, std::nullopt);
}

GridFunction GridFunction::resample(int new_degree) const {
  if (new_degree == degree()) return *this;
  if (source_) return from_exprs(*source_, rows_, cols_, iv_, new_degree);
  check_degree(new_degree);
  return GridFunction(samples(cheb::lobatto_nodes(new_degree, iv_)), rows_, cols_, iv_, std::nullopt);
}

std::vector<Expr> GridFunction::exact_entries() const {
  if (source_) return *source_;
  std::vector<Expr> out;
  out.reserve(static_cast<std::size_t>(entries()));
  for (int e = 0; e < entries(); ++e)
    out.push_back(Expr::interpolant(std::make_shared<const ChebInterpolant>(iv_, values_.col(e))));
  return out;
}

GridFunction GridFunction::operator-() const { return cplx(-1.0) * *this; }

namespace {

GridFunction combine(const GridFunction& f, const GridFunction& g, double sign) {
  const int degree = std::max(f.degree(), g.degree());
  const GridFunction fr = f.resample(degree);
  const GridFunction gr = g.resample(degree);
  Eigen::MatrixXcd v = fr.values() + sign * gr.values();
  if (!f.has_source() && !g.has_source())
    return GridFunction::from_values(std::move(v), f.rows(), f.cols(), f.interval());
  const auto fe = f.exact_entries();
  const auto ge = g.exact_entries();
  std::vector<Expr> src;
  for (std::size_t e = 0; e < fe.size(); ++e) src.push_back(sign > 0 ? fe[e] + ge[e] : fe[e] - ge[e]);
  return GridFunction::from_exprs(src, f.rows(), f.cols(), f.interval(), degree);
}

}  // namespace

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  check_same_shape(f, g, "add");
  return combine(f, g, 1.0);
}

GridFunction operator-(const GridFunction& f, const GridFunction& g) {
  check_same_shape(f, g, "subtract");
  return combine(f, g, -1.0);
}

GridFunction operator*(cplx c, const GridFunction& g) {
  std::optional<std::vector<Expr>> src;
  if (g.source_) {
    src.emplace();
    for (const auto& e : *g.source_) src->push_back(Expr::constant(c) * e);
  }
  return GridFunction(c * g.values_, g.rows_, g.cols_, g.iv_, std::move(src));
}

GridFunction differentiate(const GridFunction& g) {
  if (g.has_source()) {
    std::vector<Expr> d;
    for (const auto& e : g.source()) d.push_back(diff_t(e));
    return GridFunction::from_exprs(d, g.rows(), g.cols(), g.interval(), g.degree());
  }
  const Eigen::MatrixXd dm = cheb::diff_matrix(g.degree(), g.interval());
  return GridFunction::from_values(dm.cast<cplx>() * g.values(), g.rows(), g.cols(), g.interval());
}

GridFunction differentiate(const GridFunction& g, int order) {
  GridFunction d = g;
  for (int k = 0; k < order; ++k) d = differentiate(d);
  return d;
}

GridFunction product(const GridFunction& f, const GridFunction& g) {
  const bool scalar = f.rows() == 1 && f.cols() == 1;
  if (!scalar && f.cols() != g.rows())
    throw ShapeError("product: cannot multiply " + std::to_string(f.rows()) + "x" +
                     std::to_string(f.cols()) + " by " + std::to_string(g.rows()) + "x" +
                     std::to_string(g.cols()));
  if (f.interval().a != g.interval().a || f.interval().b != g.interval().b)
    throw ShapeError("product: interval mismatch");
  const int rows = scalar ? g.rows() : f.rows();
  const int cols = g.cols();
  const int inner = scalar ? 1 : f.cols();
  int degree = f.degree() + g.degree();
  if (degree > kMaxProductDegree) {
    warn("product degree " + std::to_string(degree) + " capped at " +
         std::to_string(kMaxProductDegree));
    degree = kMaxProductDegree;
  }

  auto entry_f = [&](int i, int k) { return scalar ? 0 : i * f.cols() + k; };
  auto entry_g = [&](int k, int j, int i) { return scalar ? i * g.cols() + j : k * g.cols() + j; };

  if (f.has_source() || g.has_source()) {
    const auto fe = f.exact_entries();
    const auto ge = g.exact_entries();
    std::vector<Expr> src;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        Expr acc = Expr::constant(0.0);
        for (int k = 0; k < inner; ++k) acc = acc + fe[entry_f(i, k)] * ge[entry_g(k, j, i)];
        src.push_back(acc);
      }
    return GridFunction::from_exprs(src, rows, cols, f.interval(), degree);
  }

  const auto t = cheb::lobatto_nodes(degree, f.interval());
  const Eigen::MatrixXcd fs = f.samples(t);
  const Eigen::MatrixXcd gs = g.samples(t);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(degree + 1, rows * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int k = 0; k < inner; ++k)
        v.col(i * cols + j).array() += fs.col(entry_f(i, k)).array() * gs.col(entry_g(k, j, i)).array();
  return GridFunction::from_values(std::move(v), rows, cols, f.interval());
}

namespace {

GridFunction stack(const std::vector<GridFunction>& parts, bool vertical) {
  if (parts.empty()) throw ShapeError("stack: no parts");
  const Interval iv = parts.front().interval();
  int degree = 0;
  bool sourced = false;
  int rows = 0;
  int cols = 0;
  for (const auto& p : parts) {
    degree = std::max(degree, p.degree());
    sourced = sourced || p.has_source();
    if (vertical) {
      if (p.cols() != parts.front().cols()) throw ShapeError("vstack: column mismatch");
      rows += p.rows();
      cols = p.cols();
    } else {
      if (p.rows() != parts.front().rows()) throw ShapeError("hstack: row mismatch");
      cols += p.cols();
      rows = p.rows();
    }
  }
  // Gather entries in row-major order of the stacked shape.
  std::vector<Eigen::VectorXcd> cols_v(static_cast<std::size_t>(rows * cols));
  std::vector<Expr> src(static_cast<std::size_t>(rows * cols));
  int offset = 0;
  for (const auto& p : parts) {
    const GridFunction q = p.resample(degree);
    const auto ex = sourced ? p.exact_entries() : std::vector<Expr>{};
    for (int i = 0; i < p.rows(); ++i)
      for (int j = 0; j < p.cols(); ++j) {
        const int r = vertical ? offset + i : i;
        const int c = vertical ? j : offset + j;
        cols_v[static_cast<std::size_t>(r * cols + c)] = q.values().col(i * p.cols() + j);
        if (sourced) src[static_cast<std::size_t>(r * cols + c)] = ex[static_cast<std::size_t>(i * p.cols() + j)];
      }
    offset += vertical ? p.rows() : p.cols();
  }
  if (sourced) return GridFunction::from_exprs(src, rows, cols, iv, degree);
  Eigen::MatrixXcd v(degree + 1, rows * cols);
  for (int e = 0; e < rows * cols; ++e) v.col(e) = cols_v[static_cast<std::size_t>(e)];
  return GridFunction::from_values(std::move(v), rows, cols, iv);
}

}  // namespace

GridFunction vstack(const std::vector<GridFunction>& parts) { return stack(parts, true); }
GridFunction hstack(const std::vector<GridFunction>& parts) { return stack(parts, false); }

}  // namespace hbvp
