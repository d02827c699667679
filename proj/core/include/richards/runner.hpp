#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "richards/optim.hpp"
#include "richards/scenario.hpp"

namespace richards {

/// Everything one optimization run produces, plus plot-ready summaries.
struct OutputBundle {
  Scenario scenario;
  OptimizationReport report;
  std::vector<double> mean_theta;  // depth-averaged theta per time level
  double wall_time_seconds = 0.0;
};

struct RunOptions {
  bool wide_fields = false;  // wide-form field CSVs instead of long-form (z,t,value)
};

/// Validate, optimize, and write theta.csv, adjoint.csv, control.csv,
/// mean_theta.csv, cost_history.csv, report.json into out_dir (created if
/// absent). Numbers are printed with 17 significant digits so repeated runs
/// are byte-identical; wall time lives only in report.json.
OutputBundle run(const Scenario& scenario, const std::filesystem::path& out_dir,
                 const RunOptions& options = {});

/// Re-emit an existing bundle's files (run() calls this internally).
void write_outputs(const OutputBundle& bundle, const std::filesystem::path& out_dir,
                   const RunOptions& options = {});

std::string report_json(const OutputBundle& bundle);

}  // namespace richards
