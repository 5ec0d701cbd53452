#include <doctest.h>

#include <sstream>

#include "hbvp/gallery.hpp"
#include "hbvp/report.hpp"

using namespace hbvp;

TEST_CASE("numbers print with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sweep CSV: fixed columns, blank ratio, deterministic") {
  const ProblemFamily fam = gallery("F1_smooth_perturb");
  const SweepReport rep = two_sided_sweep(fam, {0.0, 0.5, 0.25}, fam.idx);
  std::ostringstream a, b;
  write_sweep_csv(a, rep);
  write_sweep_csv(b, two_sided_sweep(fam, {0.0, 0.5, 0.25}, fam.idx));
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "eps,solved,degree,error,discrepancy,ratio,cond0_margin,ode_residual,boundary_residual");
  std::getline(in, line);
  CHECK(line.rfind("0,1,32,0,", 0) == 0);
  CHECK(line.find(",,") != std::string::npos);  // ratio blank at eps = 0
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  std::ostringstream plot;
  write_sweep_plot_csv(plot, rep);
  CHECK(plot.str().rfind("eps,log10_eps,log10_error,log10_discrepancy\n", 0) == 0);
}

TEST_CASE("JSON summaries carry verdicts") {
  ContinuityVerdict v;
  v.family = "x";
  v.agreement = true;
  const auto j = to_json(v);
  CHECK(j["agreement"] == true);
  CHECK(j["criterion"]["holds"] == false);
}

TEST_CASE("solution CSV columns") {
  const auto y = GridFunction::from_exprs({Expr::t(), Expr::constant(cplx(0, 1))}, 2, 1, Interval{0, 1}, 8);
  std::ostringstream os;
  write_solution_csv(os, y, 4);
  CHECK(os.str().rfind("t,re_y1,im_y1,re_y2,im_y2\n0,0,0,0,1\n", 0) == 0);
}
