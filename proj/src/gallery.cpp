#include "hbvp/gallery.hpp"

#include <array>
#include <utility>

#include "hbvp/config.hpp"

namespace hbvp {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kGallery{{
    {"F1_smooth_perturb", R"J({
      "r": 2, "m": 1, "n": 0, "alpha": 0.5, "interval": [0, 1], "eps0": 1,
      "coeffs": [[["1+eps"]], [["0"]]],
      "rhs": ["1"],
      "boundary": {"point_terms": [
        {"order": 0, "point": 0, "coeff": [["1"], ["0"]]},
        {"order": 0, "point": 1, "coeff": [["0"], ["1"]]}]},
      "target": ["0", "1"]
    })J"},
    {"F2_boundary_perturb", R"J({
      "r": 2, "m": 1, "n": 0, "alpha": 0.5, "interval": [0, 1], "eps0": 1,
      "coeffs": [[["1"]], [["t"]]],
      "rhs": ["exp(t)"],
      "boundary": {
        "point_terms": [
          {"order": 0, "point": 0, "coeff": [["1"], ["0"]]},
          {"order": 1, "point": 0, "coeff": [["-eps"], ["0"]]},
          {"order": 0, "point": 1, "coeff": [["0"], ["1"]]}],
        "integral_terms": [
          {"order": 0, "density": [["0"], ["eps"]]}]},
      "target": ["0", "1"]
    })J"},
    {"F3_cond0_violated", R"J({
      "r": 2, "m": 1, "n": 0, "alpha": 1, "interval": [0, 1], "eps0": 1,
      "coeffs": [[["eps"]], [["0"]]],
      "rhs": ["1"],
      "boundary": {"point_terms": [
        {"order": 0, "point": 1, "coeff": [["1"], ["0"]]},
        {"order": 0, "point": 0, "coeff": [["-1"], ["0"]]},
        {"order": 1, "point": 1, "coeff": [["0"], ["1"]]},
        {"order": 1, "point": 0, "coeff": [["0"], ["-1"]]}]},
      "target": ["0", "0"]
    })J"},
    {"F4_limitI_violated", R"J({
      "r": 2, "m": 1, "n": 0, "alpha": 0.5, "interval": [0, 1], "eps0": 1,
      "coeffs": [[["sin(t/eps)"]], [["0"]]],
      "coeffs_at_zero": [[["0"]], [["0"]]],
      "rhs": ["1"],
      "boundary": {"point_terms": [
        {"order": 0, "point": 0, "coeff": [["1"], ["0"]]},
        {"order": 0, "point": 1, "coeff": [["0"], ["1"]]}]},
      "target": ["0", "0"]
    })J"},
    {"F5_multipoint_integral", R"J({
      "r": 2, "m": 2, "n": 0, "alpha": 1, "interval": [0, 1], "eps0": 1,
      "coeffs": [
        [["2+eps", "eps*t"], ["sin(t)", "1"]],
        [["0", "1"], ["eps", "t"]]],
      "rhs": ["cos(t)+eps", "exp(t)"],
      "boundary": {
        "point_terms": [
          {"order": 0, "point": 0, "coeff": [["1", "0"], ["0", "0"], ["0", "0"], ["0", "0"]]},
          {"order": 1, "point": 0, "coeff": [["eps", "0"], ["0", "0"], ["0", "0"], ["0", "0"]]},
          {"order": 0, "point": 0.5, "coeff": [["0", "0"], ["0", "1"], ["0", "0"], ["0", "0"]]},
          {"order": 0, "point": 1, "coeff": [["0", "0"], ["0", "0"], ["1", "0"], ["0", "1"]]}],
        "integral_terms": [
          {"order": 0, "density": [["0", "0"], ["0", "0"], ["1", "0"], ["0", "(1+eps)*t"]]}]},
      "target": ["1", "0", "eps", "2"]
    })J"},
    {"F6_holder_rough", R"J({
      "r": 2, "m": 1, "n": 0, "alpha": 0.5, "interval": [0, 1], "eps0": 1,
      "coeffs": [[["(1+eps)*(1+powabs(t-0.5, 0.5))"]], [["0"]]],
      "rhs": ["-sin(t) + 2*eps + (1+eps)*(1+powabs(t-0.5, 0.5))*(sin(t)+eps*t^2)"],
      "boundary": {"point_terms": [
        {"order": 0, "point": 0, "coeff": [["1"], ["0"]]},
        {"order": 0, "point": 1, "coeff": [["0"], ["1"]]}]},
      "target": ["0", "sin(1)+eps"]
    })J"},
}};

}  // namespace

std::vector<std::string> gallery_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : kGallery) names.emplace_back(name);
  return names;
}

nlohmann::json gallery_config(std::string_view name) {
  for (const auto& [n, text] : kGallery) {
    if (n == name) {
      auto j = nlohmann::json::parse(text);
      j["name"] = std::string(n);
      return j;
    }
  }
  throw ProblemError("unknown gallery family '" + std::string(name) + "'");
}

ProblemFamily gallery(std::string_view name) { return family_from_json(gallery_config(name)); }

}  // namespace hbvp
