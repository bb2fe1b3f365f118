#pragma once

#include <optional>
#include <string>

#include "run_config.hpp"

namespace qtoa::cli {

enum ExitCode { kSuccess = 0, kInvalid = 2, kInfeasible = 3, kNumericalFailure = 4 };

struct SolvePhaseArgs {
  std::optional<double> b;
  std::string method = "closed-form";  // closed-form | numeric
};

struct ToaArgs {
  std::string method = "both";  // exact | asymptotic | both
  int max_order = 8;
};

struct DistArgs {
  double arrival_point = 0.0;
  std::optional<double> grid_factor;
  std::optional<int> points;
  bool fwhm = false;
  std::string sidecar;  // default: <out>.json, or stderr when writing to stdout
};

struct ImprintArgs {
  double gamma = 1.0;
};

int cmd_solve_phase(const RunConfig& cfg, const SolvePhaseArgs& args);
int cmd_qfactor(const RunConfig& cfg);
int cmd_toa(const RunConfig& cfg, const ToaArgs& args);
int cmd_dist(const RunConfig& cfg, const DistArgs& args);
int cmd_imprint_demo(const RunConfig& cfg, const ImprintArgs& args);
int cmd_verify(const RunConfig& cfg);

}  // namespace qtoa::cli
