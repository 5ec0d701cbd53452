#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "hbvp/analysis.hpp"
#include "hbvp/solver.hpp"

namespace hbvp {

// %.17g, "nan" / "inf" spelled out
std::string format_number(double x);

// eps,solved,degree,error,discrepancy,ratio,cond0_margin,ode_residual,boundary_residual
void write_sweep_csv(std::ostream& os, const SweepReport& rep);

// eps,log10_eps,log10_error,log10_discrepancy; unsolved rows are skipped
void write_sweep_plot_csv(std::ostream& os, const SweepReport& rep);

// t, then re/im of each component, on `samples`+1 uniform points
void write_solution_csv(std::ostream& os, const GridFunction& y, int samples = 200);

nlohmann::json to_json(const Solution& sol);
nlohmann::json to_json(const SweepReport& rep);
nlohmann::json to_json(const ContinuityVerdict& v);

}  // namespace hbvp
