#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hbvp/problem.hpp"

namespace hbvp {

// Malformed problem configuration; the message starts with the key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Schema (all expression entries are strings in t and eps, or plain numbers):
//   r, m, n: integers; alpha: number in (0,1]; interval: [a, b]; eps0: number
//   coeffs: r matrices A_0..A_{r-1}, each a list of m rows of m entries
//   coeffs_at_zero: optional, same shape, used in place of coeffs at eps = 0
//   rhs: m entries
//   boundary.point_terms: [{order, point, coeff: rm rows of m entries (eps only)}]
//   boundary.integral_terms: [{order, density: rm rows of m entries}]
//   target: rm entries (eps only)
//   name: optional string
ProblemFamily family_from_json(const nlohmann::json& config);
ProblemFamily load_family_file(const std::filesystem::path& path);

}  // namespace hbvp
