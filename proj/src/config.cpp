#include "hbvp/config.hpp"

#include <fstream>
#include <sstream>

namespace hbvp {

namespace {

using nlohmann::json;

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing key");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

int to_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

double to_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

Expr to_expr(const json& v, const std::string& path) {
  if (v.is_number()) return Expr::constant(v.get<double>());
  if (!v.is_string()) throw ConfigError(path, "expected an expression string or number");
  try {
    return parse_expression(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

const json& to_array(const json& v, const std::string& path, std::size_t size) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  if (v.size() != size)
    throw ConfigError(path, "expected " + std::to_string(size) + " elements, got " + std::to_string(v.size()));
  return v;
}

ExprMatrix to_matrix(const json& v, int rows, int cols, const std::string& path) {
  to_array(v, path, static_cast<std::size_t>(rows));
  ExprMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    const json& row = to_array(v[static_cast<std::size_t>(i)], row_path, static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j)
      out(i, j) = to_expr(row[static_cast<std::size_t>(j)], row_path + "[" + std::to_string(j) + "]");
  }
  return out;
}

ExprMatrix to_vector(const json& v, int rows, const std::string& path) {
  to_array(v, path, static_cast<std::size_t>(rows));
  ExprMatrix out(rows, 1);
  for (int i = 0; i < rows; ++i)
    out(i, 0) = to_expr(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return out;
}

std::vector<ExprMatrix> to_coeffs(const json& v, int r, int m, const std::string& path) {
  to_array(v, path, static_cast<std::size_t>(r));
  std::vector<ExprMatrix> out;
  for (int l = 0; l < r; ++l)
    out.push_back(to_matrix(v[static_cast<std::size_t>(l)], m, m, path + "[" + std::to_string(l) + "]"));
  return out;
}

}  // namespace

ProblemFamily family_from_json(const json& config) {
  if (!config.is_object()) throw ConfigError("<root>", "expected an object");
  ProblemFamily fam;
  if (config.contains("name")) {
    if (!config["name"].is_string()) throw ConfigError("name", "expected a string");
    fam.name = config["name"].get<std::string>();
  }
  fam.r = to_int(field(config, "r", ""), "r");
  fam.m = to_int(field(config, "m", ""), "m");
  if (fam.r < 1) throw ConfigError("r", "must be >= 1");
  if (fam.m < 1) throw ConfigError("m", "must be >= 1");
  const int n = to_int(field(config, "n", ""), "n");
  const double alpha = to_double(field(config, "alpha", ""), "alpha");
  try {
    fam.idx = HolderIndex(n, alpha);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(n < 0 ? "n" : "alpha", e.what());
  }
  const json& iv = to_array(field(config, "interval", ""), "interval", 2);
  fam.interval = {to_double(iv[0], "interval[0]"), to_double(iv[1], "interval[1]")};
  if (!(fam.interval.a < fam.interval.b)) throw ConfigError("interval", "need a < b");
  fam.eps0 = to_double(field(config, "eps0", ""), "eps0");
  if (!(fam.eps0 > 0.0)) throw ConfigError("eps0", "must be positive");

  const int rm = fam.r * fam.m;
  fam.coeffs = to_coeffs(field(config, "coeffs", ""), fam.r, fam.m, "coeffs");
  if (config.contains("coeffs_at_zero"))
    fam.coeffs_at_zero = to_coeffs(config["coeffs_at_zero"], fam.r, fam.m, "coeffs_at_zero");
  fam.rhs = to_vector(field(config, "rhs", ""), fam.m, "rhs");
  fam.target = to_vector(field(config, "target", ""), rm, "target");
  if (fam.target.depends_on_t()) throw ConfigError("target", "must not depend on t");

  const json& bnd = field(config, "boundary", "");
  if (!bnd.is_object()) throw ConfigError("boundary", "expected an object");
  if (bnd.contains("point_terms")) {
    const json& pts = bnd["point_terms"];
    if (!pts.is_array()) throw ConfigError("boundary.point_terms", "expected an array");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const std::string path = "boundary.point_terms[" + std::to_string(k) + "]";
      PointTerm p;
      p.order = to_int(field(pts[k], "order", path), join(path, "order"));
      p.point = to_double(field(pts[k], "point", path), join(path, "point"));
      p.coeff = to_matrix(field(pts[k], "coeff", path), rm, fam.m, join(path, "coeff"));
      if (p.coeff.depends_on_t()) throw ConfigError(join(path, "coeff"), "must not depend on t");
      fam.boundary.point_terms.push_back(std::move(p));
    }
  }
  if (bnd.contains("integral_terms")) {
    const json& its = bnd["integral_terms"];
    if (!its.is_array()) throw ConfigError("boundary.integral_terms", "expected an array");
    for (std::size_t k = 0; k < its.size(); ++k) {
      const std::string path = "boundary.integral_terms[" + std::to_string(k) + "]";
      IntegralTerm q;
      q.order = to_int(field(its[k], "order", path), join(path, "order"));
      q.density = to_matrix(field(its[k], "density", path), rm, fam.m, join(path, "density"));
      fam.boundary.integral_terms.push_back(std::move(q));
    }
  }
  try {
    fam.validate();
  } catch (const ProblemError& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ConfigError(msg.substr(0, colon), colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
  return fam;
}

ProblemFamily load_family_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json config;
  try {
    in >> config;
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("JSON parse error: ") + e.what());
  }
  ProblemFamily fam = family_from_json(config);
  if (fam.name.empty()) fam.name = path.stem().string();
  return fam;
}

}  // namespace hbvp
