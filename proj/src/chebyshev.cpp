#include "hbvp/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hbvp {
namespace cheb {

std::vector<double> lobatto_nodes(int degree, Interval iv) {
  if (degree < 1) throw std::invalid_argument("lobatto_nodes: degree must be >= 1");
  std::vector<double> t(degree + 1);
  const double mid = 0.5 * (iv.a + iv.b);
  const double half = 0.5 * iv.length();
  for (int j = 0; j <= degree; ++j) {
    // sin form keeps the nodes symmetric to rounding
    const double x = std::sin(std::numbers::pi * (2.0 * j - degree) / (2.0 * degree));
    t[j] = mid + half * x;
  }
  t.front() = iv.a;
  t.back() = iv.b;
  return t;
}

std::vector<double> gauss_nodes(int count, Interval iv) {
  if (count < 1) throw std::invalid_argument("gauss_nodes: count must be >= 1");
  std::vector<double> t(count);
  const double mid = 0.5 * (iv.a + iv.b);
  const double half = 0.5 * iv.length();
  for (int k = 0; k < count; ++k) {
    const double x = -std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * count));
    t[k] = mid + half * x;
  }
  return t;
}

std::vector<double> lobatto_weights(int degree) {
  std::vector<double> w(degree + 1);
  for (int j = 0; j <= degree; ++j) w[j] = (j % 2 == 0) ? 1.0 : -1.0;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Eigen::MatrixXd diff_matrix(int degree, Interval iv) {
  const auto t = lobatto_nodes(degree, iv);
  const auto w = lobatto_weights(degree);
  const int n = degree + 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (t[i] - t[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

Eigen::MatrixXd interp_matrix(const std::vector<double>& nodes,
                              const std::vector<double>& weights,
                              const std::vector<double>& targets) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(targets.size()), n);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double x = targets[i];
    Eigen::Index exact = -1;
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double diff = x - nodes[j];
      if (diff == 0.0) {
        exact = j;
        break;
      }
      const double c = weights[j] / diff;
      p(i, j) = c;
      denom += c;
    }
    if (exact >= 0) {
      p.row(i).setZero();
      p(i, exact) = 1.0;
    } else {
      p.row(i) /= denom;
    }
  }
  return p;
}

cplx barycentric(const std::vector<double>& nodes,
                 const std::vector<double>& weights,
                 const Eigen::Ref<const Eigen::VectorXcd>& values, double t) {
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double diff = t - nodes[j];
    if (diff == 0.0) return values[static_cast<Eigen::Index>(j)];
    const double c = weights[j] / diff;
    num += c * values[static_cast<Eigen::Index>(j)];
    den += c;
  }
  return num / den;
}

std::vector<double> clenshaw_curtis_weights(int degree, Interval iv) {
  // Trefethen, Spectral Methods in MATLAB, clencurt.m; nodes theta_j = j*pi/N.
  const int n = degree;
  std::vector<double> w(n + 1, 0.0);
  std::vector<double> v(n - 1 > 0 ? n - 1 : 0, 1.0);
  const double pi = std::numbers::pi;
  auto theta = [&](int j) { return pi * j / n; };
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (n * n - 1.0);
    for (int k = 1; k < n / 2; ++k)
      for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
    for (int j = 1; j < n; ++j) v[j - 1] -= std::cos(n * theta(j)) / (n * n - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (static_cast<double>(n) * n);
    for (int k = 1; k <= (n - 1) / 2; ++k)
      for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / n;
  // The weights are symmetric, so the reversed (ascending) node order is fine.
  const double scale = 0.5 * iv.length();
  for (double& x : w) x *= scale;
  return w;
}

Eigen::VectorXcd coefficients(const Eigen::Ref<const Eigen::VectorXcd>& values) {
  // values at ascending nodes x_j = -cos(j*pi/N); T_k(-x) = (-1)^k T_k(x).
  const auto n = static_cast<int>(values.size()) - 1;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  for (int k = 0; k <= n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      s += wj * values[j] * std::cos(std::numbers::pi * k * j / n);
    }
    const double ck = (k == 0 || k == n) ? 1.0 / n : 2.0 / n;
    c[k] = ck * s * ((k % 2 == 0) ? 1.0 : -1.0);
  }
  return c;
}

}  // namespace cheb

ChebInterpolant::ChebInterpolant(Interval iv, Eigen::VectorXcd values)
    : iv_(iv), values_(std::move(values)) {
  const int n = degree();
  nodes_ = cheb::lobatto_nodes(n, iv_);
  weights_ = cheb::lobatto_weights(n);
}

cplx ChebInterpolant::operator()(double t) const {
  return cheb::barycentric(nodes_, weights_, values_, t);
}

ChebInterpolant ChebInterpolant::derivative() const {
  const Eigen::MatrixXd d = cheb::diff_matrix(degree(), iv_);
  return ChebInterpolant(iv_, d * values_);
}

}  // namespace hbvp
