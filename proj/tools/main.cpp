// Command-line driver: list built-in scenarios, validate config documents,
// run the optimizer with CSV/JSON outputs, and check the adjoint gradient
// against finite differences.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "richards/errors.hpp"
#include "richards/runner.hpp"
#include "richards/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;

richards::Scenario load_scenario(const std::string& name_or_file) {
  if (std::filesystem::exists(name_or_file)) {
    std::ifstream in(name_or_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return richards::parse_scenario(ss.str());
  }
  return richards::builtin_scenario(name_or_file);
}

struct RunOverrides {
  int maxit = -1;
  double tol = -1.0, eps = -1.0, lambda = -1.0;
  int nz = -1, nt = -1;

  void apply(richards::Scenario& s) const {
    if (maxit > 0) s.pgd.maxit = maxit;
    if (tol > 0.0) s.pgd.tol = tol;
    if (eps > 0.0) s.pgd.epsilon = eps;
    if (lambda > 0.0) s.pgd.lambda = lambda;
    if (nz > 0) s.grid.Nz = nz;
    if (nt > 0) s.grid.Nt = nt;
  }
};

int thread_cap() {
  if (const char* env = std::getenv("RICHARDS_OPTCTL_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

int run_scenarios(const std::vector<std::string>& names, const std::string& out_dir,
                  const RunOverrides& overrides, bool wide) {
  std::vector<richards::Scenario> scenarios;
  for (const auto& name : names) {
    try {
      richards::Scenario s = load_scenario(name);
      overrides.apply(s);
      const auto violations = s.validate();
      if (!violations.empty()) {
        std::cerr << "error: scenario '" << s.name << "' failed validation:\n";
        for (const auto& v : violations) std::cerr << "  " << v << "\n";
        return kExitValidation;
      }
      scenarios.push_back(std::move(s));
    } catch (const richards::SchemaError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const richards::ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const richards::UnknownScenario& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    }
  }

  const richards::RunOptions options{wide};
  std::atomic<int> next{0};
  std::atomic<int> failures{0};
  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= static_cast<int>(scenarios.size())) return;
      const richards::Scenario& s = scenarios[k];
      const std::filesystem::path dir =
          scenarios.size() == 1 ? std::filesystem::path(out_dir)
                                : std::filesystem::path(out_dir) / s.name;
      try {
        const auto bundle = richards::run(s, dir, options);
        std::ostringstream line;
        line << s.name << ": exit_reason=" << richards::to_string(bundle.report.exit_reason)
             << " iterations=" << bundle.report.iterations
             << " final_cost=" << bundle.report.cost_history.back()
             << " wall_time=" << bundle.wall_time_seconds << "s -> " << dir.string() << "\n";
        std::cout << line.str();
      } catch (const std::exception& e) {
        std::cerr << s.name << ": solver failure: " << e.what() << "\n";
        ++failures;
      }
    }
  };

  const int nthreads = std::min<int>(thread_cap(), static_cast<int>(scenarios.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  return failures.load() == 0 ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal irrigation schedules for unsaturated soil columns"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List built-in scenarios");
  list->callback([] {
    for (const auto& name : richards::builtin_scenario_names()) std::cout << name << "\n";
  });

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Validate a scenario config document");
  validate->add_option("file", validate_file, "Path to a JSON scenario document")->required();

  std::vector<std::string> run_names;
  std::string out_dir = "out";
  RunOverrides overrides;
  bool wide = false;
  auto* run_cmd = app.add_subcommand("run", "Optimize one or more scenarios and write outputs");
  run_cmd->add_option("scenario", run_names, "Built-in name or config file path")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--maxit", overrides.maxit, "Override pgd.maxit");
  run_cmd->add_option("--tol", overrides.tol, "Override pgd.tol");
  run_cmd->add_option("--eps", overrides.eps, "Override pgd.epsilon");
  run_cmd->add_option("--lambda", overrides.lambda, "Override pgd.lambda");
  run_cmd->add_option("--nz", overrides.nz, "Override grid.Nz");
  run_cmd->add_option("--nt", overrides.nt, "Override grid.Nt");
  run_cmd->add_flag("--wide", wide, "Write wide-form field CSVs instead of long-form");

  std::string check_name;
  auto* check = app.add_subcommand(
      "gradient-check", "Compare the adjoint gradient against finite differences");
  check->add_option("scenario", check_name, "Built-in name or config file path")->required();

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    try {
      std::ifstream in(validate_file);
      if (!in) {
        std::cerr << "error: cannot read " << validate_file << "\n";
        return kExitValidation;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      const auto scenario = richards::parse_scenario(ss.str());
      std::cout << scenario.name << ": valid\n";
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "invalid: " << e.what() << "\n";
      return kExitValidation;
    }
  }

  if (*run_cmd) return run_scenarios(run_names, out_dir, overrides, wide);

  if (*check) {
    try {
      richards::Scenario s = load_scenario(check_name);
      // the consistency test runs on a coarse grid so the FD side stays cheap
      s.grid.Nz = 41;
      s.grid.Nt = 41;
      const auto result = richards::gradient_check(s.problem(), s.pgd);
      for (size_t d = 0; d < result.relative_errors.size(); ++d)
        std::printf("direction %zu: relative error %.3e\n", d + 1, result.relative_errors[d]);
      std::printf("max relative error: %.3e\n", result.max_relative_error);
      return kExitOk;
    } catch (const richards::ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const richards::UnknownScenario& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitSolver;
    }
  }
  return kExitOk;
}
