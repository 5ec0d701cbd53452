// hbvp: solve, sweep and verify parameter-dependent boundary-value problems.
//
// Exit codes: 0 ok, 1 config/usage error, 2 Condition (0) violated,
// 3 verification disagreement or solver tolerance not met.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbvp/analysis.hpp"
#include "hbvp/config.hpp"
#include "hbvp/gallery.hpp"
#include "hbvp/log.hpp"
#include "hbvp/report.hpp"
#include "hbvp/solver.hpp"

namespace fs = std::filesystem;
using namespace hbvp;

namespace {

enum Exit { kOk = 0, kConfig = 1, kCondZero = 2, kDisagree = 3 };

struct Common {
  std::string config;
  std::string gallery;
  int degree = 32;
  int samples = kDefaultSamples;
  std::string out = ".";
  std::optional<double> tol;
  int jobs = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--degree", c.degree, "Chebyshev degree N (>= 8)")->check(CLI::Range(kMinDegree, 4096));
  cmd->add_option("--samples", c.samples, "Hoelder sampling subintervals M")->check(CLI::Range(64, 1 << 16));
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--tol", c.tol, "residual acceptance tolerance");
  cmd->add_option("--jobs", c.jobs, "worker threads (0: HBVP_JOBS or 1)");
  cmd->add_flag("--quiet", c.quiet, "suppress warnings");
}

ProblemFamily load(const Common& c) {
  if (!c.config.empty() && !c.gallery.empty()) throw ConfigError("problem", "give --config or --gallery, not both");
  if (!c.config.empty()) return load_family_file(c.config);
  if (!c.gallery.empty()) return gallery(c.gallery);
  throw ConfigError("problem", "one of --config or --gallery is required");
}

AnalysisOptions analysis_options(const Common& c) {
  AnalysisOptions o;
  o.degree = c.degree;
  o.samples = c.samples;
  if (c.tol) o.solve.residual_tol = *c.tol;
  o.jobs = c.jobs > 0 ? c.jobs : 0;
  if (c.jobs == 0 && !std::getenv("HBVP_JOBS")) o.jobs = 1;
  return o;
}

std::ofstream open_out(const Common& c, const std::string& file) {
  fs::create_directories(c.out);
  const fs::path p = fs::path(c.out) / file;
  std::ofstream os(p);
  if (!os) throw ConfigError("out", "cannot write " + p.string());
  return os;
}

int cmd_solve(const Common& c, double eps) {
  const ProblemFamily fam = load(c);
  const AnalysisOptions o = analysis_options(c);
  const ProblemInstance inst = instantiate(fam, eps, c.degree);
  const Solution sol = solve_bvp(inst, o.solve);
  {
    auto os = open_out(c, "solution.csv");
    write_solution_csv(os, sol.y);
  }
  nlohmann::json summary = to_json(sol);
  summary["family"] = fam.name;
  summary["eps"] = eps;
  {
    auto os = open_out(c, "summary.json");
    os << summary.dump(2) << '\n';
  }
  std::cout << fam.name << " eps=" << format_number(eps) << " degree=" << sol.degree
            << " ode_residual=" << format_number(sol.ode_residual)
            << " boundary_residual=" << format_number(sol.boundary_residual)
            << " cond0_margin=" << format_number(sol.cond0_margin) << '\n';
  return kOk;
}

int cmd_sweep(const Common& c, std::vector<double> eps_list, double eps0, double factor, int count) {
  const ProblemFamily fam = load(c);
  const AnalysisOptions o = analysis_options(c);
  if (eps_list.empty()) {
    if (!(factor > 0.0 && factor < 1.0)) throw ConfigError("factor", "must lie in (0, 1)");
    if (count < 1) throw ConfigError("count", "must be >= 1");
    eps_list = geometric_sequence(eps0, factor, count);
  }
  for (double e : eps_list)
    if (!(e >= 0.0 && e < fam.eps0))
      throw ConfigError("eps", format_number(e) + " outside [0, eps0=" + format_number(fam.eps0) + ")");
  const SweepReport rep = two_sided_sweep(fam, eps_list, fam.idx, o);
  {
    auto os = open_out(c, "sweep.csv");
    write_sweep_csv(os, rep);
  }
  {
    auto os = open_out(c, "sweep_plot.csv");
    write_sweep_plot_csv(os, rep);
  }
  {
    auto os = open_out(c, "sweep.json");
    os << to_json(rep).dump(2) << '\n';
  }
  std::cout << fam.name << ": " << rep.records.size() << " eps values";
  if (rep.kappa_low)
    std::cout << ", ratio in [" << format_number(*rep.kappa_low) << ", " << format_number(*rep.kappa_high) << "]";
  std::cout << (rep.band_ok ? "" : ", RATIO BAND EXCEEDED")
            << (rep.error_tends_to_zero ? ", error -> 0" : ", error tail not decreasing") << '\n';
  return kOk;
}

int cmd_verify(const Common& c, bool all, int count, double factor) {
  std::vector<ProblemFamily> fams;
  if (all) {
    for (const auto& name : gallery_names()) fams.push_back(gallery(name));
  } else {
    fams.push_back(load(c));
  }
  const AnalysisOptions o = analysis_options(c);
  nlohmann::json out = nlohmann::json::array();
  bool ok = true;
  for (const auto& fam : fams) {
    const auto eps = geometric_sequence(fam.eps0, factor, count);
    const ContinuityVerdict v = main_theorem_suite(fam, eps, fam.idx, o);
    const OperatorConvergenceReport oc = theorem2_equivalence_check(fam, eps, default_probes(fam, c.degree), fam.idx, o);
    nlohmann::json j = to_json(v);
    j["operator_convergence"] = {{"c2", oc.c2},
                                 {"bound_holds", oc.bound_holds},
                                 {"S_tends_to_zero", oc.S_tends_to_zero},
                                 {"P_tends_to_zero", oc.P_tends_to_zero},
                                 {"consistent", oc.consistent}};
    out.push_back(j);
    const bool fam_ok = v.agreement && oc.consistent;
    ok = ok && fam_ok;
    std::cout << fam.name << ": criterion " << (v.criterion ? "PASS" : "FAIL") << " (Condition (0) "
              << (v.condition_zero ? "PASS" : "FAIL") << ", Limit Condition I " << (v.limit_I ? "PASS" : "FAIL")
              << ", Limit Condition II " << (v.limit_II ? "PASS" : "FAIL") << "), behavior "
              << (v.behavior ? "PASS" : "FAIL") << ", " << (v.agreement ? "AGREEMENT" : "DISAGREEMENT")
              << ", operator convergence " << (oc.consistent ? "consistent" : "INCONSISTENT") << '\n';
  }
  {
    auto os = open_out(c, "verify.json");
    os << out.dump(2) << '\n';
  }
  return ok ? kOk : kDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-dependent boundary-value problems in Hoelder spaces"};
  app.require_subcommand(1);

  Common sc;
  double solve_eps = 0.0;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--config", sc.config, "problem config (JSON)");
  solve->add_option("--gallery", sc.gallery, "built-in family name");
  solve->add_option("--eps", solve_eps, "parameter value");
  add_common(solve, sc);

  Common wc;
  std::vector<double> eps_list;
  double eps0 = 1.0;
  double factor = 0.5;
  int count = 20;
  auto* sweep = app.add_subcommand("sweep", "two-sided estimate sweep");
  sweep->add_option("--config", wc.config, "problem config (JSON)");
  sweep->add_option("--gallery", wc.gallery, "built-in family name");
  sweep->add_option("--eps", eps_list, "explicit eps values");
  sweep->add_option("--eps0", eps0, "geometric start: eps_k = eps0 * factor^k");
  sweep->add_option("--factor", factor, "geometric ratio");
  sweep->add_option("--count", count, "number of eps values");
  add_common(sweep, wc);

  Common vc;
  bool all = false;
  int vcount = 20;
  double vfactor = 0.5;
  auto* verify = app.add_subcommand("verify", "continuity verification suite");
  verify->add_flag("--all", all, "every gallery family");
  verify->add_option("--config", vc.config, "problem config (JSON)");
  verify->add_option("--gallery", vc.gallery, "built-in family name");
  verify->add_option("--count", vcount, "sweep length");
  verify->add_option("--factor", vfactor, "sweep ratio");
  add_common(verify, vc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*solve) {
      set_quiet(sc.quiet);
      return cmd_solve(sc, solve_eps);
    }
    if (*sweep) {
      set_quiet(wc.quiet);
      return cmd_sweep(wc, eps_list, eps0, factor, count);
    }
    set_quiet(vc.quiet);
    if (!all && vc.config.empty() && vc.gallery.empty())
      throw ConfigError("problem", "one of --all, --config or --gallery is required");
    return cmd_verify(vc, all, vcount, vfactor);
  } catch (const ConditionZeroViolated& e) {
    std::cerr << "hbvp: " << e.what() << '\n';
    return kCondZero;
  } catch (const SolveFailure& e) {
    std::cerr << "hbvp: solve failed: " << e.what() << '\n';
    return kDisagree;
  } catch (const ConfigError& e) {
    std::cerr << "hbvp: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ProblemError& e) {
    std::cerr << "hbvp: problem error: " << e.what() << '\n';
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "hbvp: parse error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "hbvp: " << e.what() << '\n';
    return kConfig;
  }
}
