#include "richards/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "richards/errors.hpp"

namespace richards {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_file(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void write_field_csv(const std::filesystem::path& path, const Grid1D& grid,
                     const std::vector<double>& values, const char* value_name, bool wide) {
  auto os = open_file(path);
  const int Nz = grid.Nz, Nt = grid.Nt;
  auto at = [&](int i, int n) { return values[static_cast<size_t>(n) * Nz + i]; };
  if (!wide) {
    os << "z,t," << value_name << "\n";
    for (int n = 0; n < Nt; ++n)
      for (int i = 0; i < Nz; ++i)
        os << fmt(grid.z(i)) << ',' << fmt(grid.t(n)) << ',' << fmt(at(i, n)) << "\n";
  } else {
    os << "z\\t";
    for (int n = 0; n < Nt; ++n) os << ',' << fmt(grid.t(n));
    os << "\n";
    for (int i = 0; i < Nz; ++i) {
      os << fmt(grid.z(i));
      for (int n = 0; n < Nt; ++n) os << ',' << fmt(at(i, n));
      os << "\n";
    }
  }
}

void write_series_csv(const std::filesystem::path& path, const Grid1D& grid,
                      const std::vector<double>& values, const char* value_name) {
  auto os = open_file(path);
  os << "t," << value_name << "\n";
  for (int n = 0; n < grid.Nt; ++n) os << fmt(grid.t(n)) << ',' << fmt(values[n]) << "\n";
}

}  // namespace

std::string report_json(const OutputBundle& bundle) {
  nlohmann::json j;
  j["scenario"] = nlohmann::json::parse(serialize_scenario(bundle.scenario));
  j["iterations"] = bundle.report.iterations;
  j["exit_reason"] = to_string(bundle.report.exit_reason);
  j["cost_history"] = bundle.report.cost_history;
  j["clamp_events"] = bundle.report.clamp_events;
  j["wall_time_seconds"] = bundle.wall_time_seconds;
  j["solver_settings"] = {{"maxit", bundle.scenario.pgd.maxit},
                          {"tol", bundle.scenario.pgd.tol},
                          {"lambda", bundle.scenario.pgd.lambda},
                          {"epsilon", bundle.scenario.pgd.epsilon},
                          {"picard_tol", bundle.scenario.pgd.picard_tol},
                          {"picard_maxit", bundle.scenario.pgd.picard_maxit},
                          {"linesearch_max_evals", bundle.scenario.pgd.linesearch.max_evals},
                          {"track_normalized", bundle.scenario.pgd.track_normalized}};
  j["projected_gradient_norm_initial"] = bundle.report.projected_gradient_norm_initial;
  j["projected_gradient_norm_final"] = bundle.report.projected_gradient_norm_final;
  j["saturation_warning"] = bundle.report.final_state.saturation_warning;
  j["reduced_cost_evals"] = bundle.report.reduced_cost_evals;
  return j.dump(2) + "\n";
}

void write_outputs(const OutputBundle& bundle, const std::filesystem::path& out_dir,
                   const RunOptions& options) {
  std::filesystem::create_directories(out_dir);
  const Grid1D& grid = bundle.report.final_state.grid;

  write_field_csv(out_dir / "theta.csv", grid, bundle.report.final_state.values, "theta",
                  options.wide_fields);
  write_field_csv(out_dir / "adjoint.csv", grid, bundle.report.final_adjoint.values, "p",
                  options.wide_fields);
  write_series_csv(out_dir / "control.csv", grid, bundle.report.final_control.values, "u");
  write_series_csv(out_dir / "mean_theta.csv", grid, bundle.mean_theta, "mean_theta");

  auto os = open_file(out_dir / "cost_history.csv");
  os << "iteration,cost\n";
  for (size_t k = 0; k < bundle.report.cost_history.size(); ++k)
    os << (k + 1) << ',' << fmt(bundle.report.cost_history[k]) << "\n";

  open_file(out_dir / "report.json") << report_json(bundle);
}

OutputBundle run(const Scenario& scenario, const std::filesystem::path& out_dir,
                 const RunOptions& options) {
  const auto violations = scenario.validate();
  if (!violations.empty()) {
    std::string msg = "scenario '" + scenario.name + "' failed validation:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }

  OutputBundle bundle;
  bundle.scenario = scenario;

  const auto start = std::chrono::steady_clock::now();
  bundle.report = pgd(scenario.problem(), scenario.pgd, scenario.initial_control());
  bundle.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const StateField& theta = bundle.report.final_state;
  const Grid1D& grid = theta.grid;
  bundle.mean_theta.resize(grid.Nt);
  for (int n = 0; n < grid.Nt; ++n) {
    double s = 0.5 * (theta(0, n) + theta(grid.Nz - 1, n));
    for (int i = 1; i < grid.Nz - 1; ++i) s += theta(i, n);
    bundle.mean_theta[n] = s * grid.dz() / grid.Z;
  }

  write_outputs(bundle, out_dir, options);
  return bundle;
}

}  // namespace richards
