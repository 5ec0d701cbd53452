#include "hbvp/report.hpp"

#include <cmath>
#include <cstdio>

namespace hbvp {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

std::string log10_text(double x) { return x > 0.0 ? format_number(std::log10(x)) : "-inf"; }

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
  os << "eps,solved,degree,error,discrepancy,ratio,cond0_margin,ode_residual,boundary_residual\n";
  for (const auto& r : rep.records) {
    os << format_number(r.eps) << ',' << (r.solved ? 1 : 0) << ',' << r.degree << ','
       << (r.solved ? format_number(r.error) : "") << ',' << format_number(r.discrepancy) << ','
       << (r.ratio ? format_number(*r.ratio) : "") << ',' << format_number(r.cond0_margin) << ','
       << format_number(r.ode_residual) << ',' << format_number(r.boundary_residual) << '\n';
  }
}

void write_sweep_plot_csv(std::ostream& os, const SweepReport& rep) {
  os << "eps,log10_eps,log10_error,log10_discrepancy\n";
  for (const auto& r : rep.records) {
    if (!r.solved) continue;
    os << format_number(r.eps) << ',' << log10_text(r.eps) << ',' << log10_text(r.error) << ','
       << log10_text(r.discrepancy) << '\n';
  }
}

void write_solution_csv(std::ostream& os, const GridFunction& y, int samples) {
  os << 't';
  for (int i = 0; i < y.rows(); ++i) os << ",re_y" << i + 1 << ",im_y" << i + 1;
  os << '\n';
  const Interval iv = y.interval();
  std::vector<double> ts;
  for (int k = 0; k <= samples; ++k) ts.push_back(iv.a + (iv.b - iv.a) * k / samples);
  ts.back() = iv.b;
  const Eigen::MatrixXcd s = y.samples(ts);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    os << format_number(ts[k]);
    for (int i = 0; i < y.rows(); ++i) {
      const cplx v = s(static_cast<Eigen::Index>(k), i);
      os << ',' << format_number(v.real()) << ',' << format_number(v.imag());
    }
    os << '\n';
  }
}

nlohmann::json to_json(const Solution& sol) {
  return {{"degree", sol.degree},
          {"ode_residual", number(sol.ode_residual)},
          {"boundary_residual", number(sol.boundary_residual)},
          {"cond0_margin", number(sol.cond0_margin)}};
}

nlohmann::json to_json(const SweepReport& rep) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : rep.records) {
    nlohmann::json j = {{"eps", number(r.eps)},
                        {"solved", r.solved},
                        {"degree", r.degree},
                        {"error", number(r.error)},
                        {"discrepancy", number(r.discrepancy)},
                        {"ratio", r.ratio ? number(*r.ratio) : nlohmann::json(nullptr)},
                        {"cond0_margin", number(r.cond0_margin)}};
    if (!r.message.empty()) j["message"] = r.message;
    records.push_back(j);
  }
  auto opt = [](const std::optional<double>& x) { return x ? number(*x) : nlohmann::json(nullptr); };
  return {{"family", rep.family},
          {"baseline_discrepancy", number(rep.baseline_discrepancy)},
          {"kappa_low", opt(rep.kappa_low)},
          {"kappa_high", opt(rep.kappa_high)},
          {"band_ok", rep.band_ok},
          {"error_tends_to_zero", rep.error_tends_to_zero},
          {"records", records}};
}

nlohmann::json to_json(const ContinuityVerdict& v) {
  return {{"family", v.family},
          {"criterion",
           {{"condition_zero", v.condition_zero},
            {"cond0_margin", number(v.cond0_margin)},
            {"limit_I", v.limit_I},
            {"limit_II", v.limit_II},
            {"holds", v.criterion}}},
          {"behavior", {{"solvable", v.solvable}, {"continuous", v.continuous}, {"holds", v.behavior}}},
          {"agreement", v.agreement},
          {"notes", v.notes}};
}

}  // namespace hbvp
