#include <doctest.h>

#include <cmath>

#include "hbvp/config.hpp"
#include "hbvp/gallery.hpp"
#include "hbvp/problem.hpp"

using namespace hbvp;
using nlohmann::json;

namespace {

json dirichlet_config() {
  return json::parse(R"J({
    "name": "test", "r": 2, "m": 1, "n": 0, "alpha": 0.5, "interval": [0, 1], "eps0": 1,
    "coeffs": [[["1+eps"]], [[0]]],
    "rhs": ["t"],
    "boundary": {"point_terms": [
      {"order": 0, "point": 0, "coeff": [["1"], ["0"]]},
      {"order": 0, "point": 1, "coeff": [["0"], ["1"]]}]},
    "target": [0, "2*eps"]
  })J");
}

std::string error_key(const json& cfg) {
  try {
    family_from_json(cfg);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("config parses into a family") {
  const ProblemFamily fam = family_from_json(dirichlet_config());
  CHECK(fam.name == "test");
  CHECK(fam.r == 2);
  CHECK(fam.idx.alpha() == 0.5);
  const ProblemInstance inst = instantiate(fam, 0.25, 16);
  CHECK(std::abs(inst.coeffs[0].at(0.4)(0, 0) - 1.25) < 1e-15);
  CHECK(std::abs(inst.target[1] - 0.5) < 1e-15);
  CHECK(inst.boundary.point_terms.size() == 2);
}

TEST_CASE("config errors name the key") {
  json c = dirichlet_config();
  c["coeffs"][0][0][0] = "1+";
  CHECK(error_key(c) == "coeffs[0][0][0]");

  c = dirichlet_config();
  c.erase("rhs");
  CHECK(error_key(c) == "rhs");

  c = dirichlet_config();
  c["alpha"] = 1.5;
  CHECK(error_key(c) == "alpha");

  c = dirichlet_config();
  c["boundary"]["point_terms"][1]["point"] = 3;
  CHECK(error_key(c).rfind("boundary.point_terms[1]", 0) == 0);

  c = dirichlet_config();
  c["target"] = json::array({0});
  CHECK(error_key(c).rfind("target", 0) == 0);

  c = dirichlet_config();
  c["boundary"]["point_terms"][0]["coeff"] = json::array({json::array({"t"}), json::array({"0"})});
  CHECK(error_key(c).rfind("boundary.point_terms[0]", 0) == 0);
}

TEST_CASE("eps outside the range is rejected") {
  const ProblemFamily fam = family_from_json(dirichlet_config());
  CHECK_THROWS_AS(instantiate(fam, -0.1, 16), ProblemError);
  CHECK_THROWS_AS(instantiate(fam, 1.0, 16), ProblemError);
}

TEST_CASE("evaluation failures are reported with the field") {
  json c = dirichlet_config();
  c["coeffs"][0][0][0] = "1/eps";
  const ProblemFamily fam = family_from_json(c);
  try {
    instantiate(fam, 0.0, 16);
    FAIL("expected ProblemError");
  } catch (const ProblemError& e) {
    CHECK(std::string(e.what()).find("coeffs[0]") != std::string::npos);
  }
}

TEST_CASE("apply_B: point and integral terms") {
  // B y = (y(0) - 2 y'(0), int_0^1 t y)
  const ProblemFamily fam = family_from_json(json::parse(R"J({
    "r": 2, "m": 1, "n": 0, "alpha": 1, "interval": [0, 1], "eps0": 1,
    "coeffs": [[[0]], [[0]]], "rhs": [0],
    "boundary": {
      "point_terms": [{"order": 0, "point": 0, "coeff": [[1], [0]]},
                      {"order": 1, "point": 0, "coeff": [[-2], [0]]}],
      "integral_terms": [{"order": 0, "density": [[0], ["t"]]}]},
    "target": [0, 0]
  })J"));
  const BoundaryOperator B = instantiate_boundary(fam, 0.0, 16);
  const auto y = GridFunction::from_exprs({parse_expression("exp(t)")}, 1, 1, fam.interval, 16);
  const Eigen::VectorXcd v = apply_B(B, y);
  CHECK(std::abs(v[0] - (1.0 - 2.0)) < 1e-13);
  CHECK(std::abs(v[1] - 1.0) < 1e-13);  // int t e^t = 1
  // the linear-functional form agrees on node values
  const Eigen::MatrixXcd rows = boundary_rows(B, 16);
  const Eigen::VectorXcd nodal = y.values().col(0);
  CHECK((rows * nodal - v).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(boundary_bound(B) == doctest::Approx(3.5));
  CHECK(vector_norm(v) == doctest::Approx(2.0));
}

TEST_CASE("gallery families validate and instantiate") {
  const auto names = gallery_names();
  CHECK(names.size() == 6);
  for (const auto& name : names) {
    CAPTURE(name);
    const ProblemFamily fam = gallery(name);
    CHECK_NOTHROW(fam.validate());
    CHECK(fam.name == name);
    CHECK_NOTHROW(instantiate(fam, 0.0, 16));
    CHECK_NOTHROW(instantiate(fam, 0.5, 16));
  }
  CHECK_THROWS_AS(gallery("nope"), ProblemError);
}

TEST_CASE("coeffs_at_zero overrides eps = 0 only") {
  const ProblemFamily fam = gallery("F4_limitI_violated");
  CHECK(std::abs(instantiate(fam, 0.0, 16).coeffs[0].at(0.3)(0, 0)) == 0.0);
  CHECK(std::abs(instantiate(fam, 0.1, 16).coeffs[0].at(0.3)(0, 0) - std::sin(3.0)) < 1e-14);
}

TEST_CASE("with_degree resamples and scales quadrature") {
  const ProblemInstance inst = instantiate(gallery("F2_boundary_perturb"), 0.1, 16).with_degree(48);
  CHECK(inst.coeffs[1].degree() == 48);
  CHECK(inst.boundary.quadrature_order == 96);
}
