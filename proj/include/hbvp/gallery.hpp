#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hbvp/problem.hpp"

namespace hbvp {

// Built-in problem families:
//   F1_smooth_perturb      y'' + (1+eps) y = 1, Dirichlet on [0,1]
//   F2_boundary_perturb    y'' + t y' + y = e^t, Robin/integral conditions moving with eps
//   F3_cond0_violated      y'' + eps y = 1, periodic-difference conditions
//   F4_limitI_violated     y'' + sin(t/eps) y = 1 (A_0 = 0 at eps = 0), Dirichlet
//   F5_multipoint_integral 2x2 system, multipoint and integral conditions
//   F6_holder_rough        rough coefficient |t-1/2|^{1/2}, exact solution sin t + eps t^2
std::vector<std::string> gallery_names();
nlohmann::json gallery_config(std::string_view name);
ProblemFamily gallery(std::string_view name);

}  // namespace hbvp
