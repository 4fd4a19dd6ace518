// qpf: scenario-driven command line for the quantized predictor-feedback
// toolkit. Subcommands: constants, simulate, baseline, verify, sweep.
// Exit codes: 0 ok, 2 configuration error, 3 divergence, 4 failed
// verification in strict mode.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpf/qpf.h"

namespace {

struct scenario_deleter {
  void operator()(qpf_scenario* s) const { qpf_scenario_free(s); }
};
struct run_deleter {
  void operator()(qpf_run* r) const { qpf_run_free(r); }
};
using scenario_ptr = std::unique_ptr<qpf_scenario, scenario_deleter>;
using run_ptr = std::unique_ptr<qpf_run, run_deleter>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  qpf_string_free(s);
  return out;
}

int report_error(int code) {
  std::fprintf(stderr, "error: %s\n", qpf_last_error());
  return code;
}

scenario_ptr load_scenario(const std::string& path, int& code) {
  qpf_scenario* raw = nullptr;
  code = qpf_scenario_from_file(path.c_str(), &raw);
  return scenario_ptr(raw);
}

std::string output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("QPF_OUT_DIR"); env && *env) return env;
  return ".";
}

std::string scenario_name(const qpf_scenario* s) {
  char* js = nullptr;
  if (qpf_scenario_to_json(s, &js) != QPF_OK) return "scenario";
  const std::string text = take_string(js);
  // cheap extraction: first "name": "..." pair of the canonical form
  const auto pos = text.find("\"name\": \"");
  if (pos == std::string::npos) return "scenario";
  const auto start = pos + 9;
  const auto end = text.find('"', start);
  return text.substr(start, end - start);
}

int write_outputs(const qpf_run* run, const std::string& dir,
                  const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string trace = dir + "/" + name + "_trace.csv";
  const std::string plot = dir + "/" + name + "_plot.csv";
  const std::string manifest = dir + "/" + name + "_manifest.json";
  if (int rc = qpf_run_write_csv(run, trace.c_str()); rc != QPF_OK)
    return report_error(rc);
  if (int rc = qpf_run_write_plot_csv(run, plot.c_str()); rc != QPF_OK)
    return report_error(rc);
  char* js = nullptr;
  if (int rc = qpf_run_summary_json(run, &js); rc != QPF_OK)
    return report_error(rc);
  const std::string summary = take_string(js);
  FILE* f = std::fopen(manifest.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", manifest.c_str());
    return QPF_ERR_INTERNAL;
  }
  std::fputs(summary.c_str(), f);
  std::fputc('\n', f);
  std::fclose(f);
  std::printf("%s\n", summary.c_str());
  std::fprintf(stderr, "wrote %s, %s, %s\n", trace.c_str(), plot.c_str(),
               manifest.c_str());
  return QPF_OK;
}

int run_and_write(const qpf_scenario* scn, const std::string& backend,
                  const std::string& out_flag) {
  qpf_run* raw = nullptr;
  const int rc = backend.empty()
                     ? qpf_run_simulate(scn, &raw)
                     : qpf_run_simulate_backend(scn, backend.c_str(), &raw);
  run_ptr run(raw);
  if (rc != QPF_OK && rc != QPF_ERR_DIVERGED) return report_error(rc);
  if (!run) return report_error(QPF_ERR_INTERNAL);
  const int wrc = write_outputs(run.get(), output_dir(out_flag),
                                scenario_name(scn));
  if (wrc != QPF_OK) return wrc;
  if (rc == QPF_ERR_DIVERGED) {
    std::fprintf(stderr, "divergence guard tripped: %s\n", qpf_last_error());
    return QPF_ERR_DIVERGED;
  }
  return QPF_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantized predictor-feedback simulation and verification"};
  app.require_subcommand(1);

  std::string scenario_path, backend, out_dir, sweep_param;
  std::vector<double> sweep_values;
  int workers = 1;
  bool strict = false;
  double fixed_mu = 1.0;

  auto add_scenario_flag = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario JSON file")
        ->required();
  };

  CLI::App* c_const = app.add_subcommand(
      "constants", "compute the design constants for a scenario");
  add_scenario_flag(c_const);

  CLI::App* c_sim = app.add_subcommand("simulate", "run a scenario");
  add_scenario_flag(c_sim);
  c_sim->add_option("--backend", backend,
                    "transport backend override: exact|laxfriedrichs");
  c_sim->add_option("--out", out_dir,
                    "output directory (default $QPF_OUT_DIR or '.')");

  CLI::App* c_base = app.add_subcommand(
      "baseline", "run with the non-switched law at a fixed zoom value");
  add_scenario_flag(c_base);
  c_base->add_option("--mu", fixed_mu, "fixed zoom value")->required();
  c_base->add_option("--backend", backend,
                     "transport backend override: exact|laxfriedrichs");
  c_base->add_option("--out", out_dir,
                     "output directory (default $QPF_OUT_DIR or '.')");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "static feasibility and quantizer-property checks");
  add_scenario_flag(c_verify);
  c_verify->add_flag("--strict", strict,
                     "exit with code 4 when a check fails");

  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "re-run a scenario across values of one parameter");
  add_scenario_flag(c_sweep);
  c_sweep->add_option("--param", sweep_param, "parameter name")->required();
  c_sweep->add_option("--values", sweep_values, "parameter values")
      ->required()
      ->delimiter(',');
  c_sweep->add_option("--workers", workers, "worker threads (default 1)");
  c_sweep->add_option("--out", out_dir,
                      "output directory (default $QPF_OUT_DIR or '.')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return QPF_ERR_CONFIG;
  }

  int rc = QPF_OK;
  scenario_ptr scn = load_scenario(scenario_path, rc);
  if (rc != QPF_OK) return report_error(rc);

  if (c_const->parsed()) {
    char* js = nullptr;
    if ((rc = qpf_scenario_constants_json(scn.get(), &js)) != QPF_OK)
      return report_error(rc);
    std::printf("%s\n", take_string(js).c_str());
    return QPF_OK;
  }

  if (c_sim->parsed()) return run_and_write(scn.get(), backend, out_dir);

  if (c_base->parsed()) {
    // rebuild the scenario with the fixed-zoom controller
    char* js = nullptr;
    if ((rc = qpf_scenario_to_json(scn.get(), &js)) != QPF_OK)
      return report_error(rc);
    std::string text = take_string(js);
    // patch controller and fixed_mu through the JSON form
    try {
      auto j = nlohmann::ordered_json::parse(text);
      j["controller"] = "nominal_fixed_mu";
      j["fixed_mu"] = fixed_mu;
      text = j.dump(2);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return QPF_ERR_INTERNAL;
    }
    qpf_scenario* patched_raw = nullptr;
    if ((rc = qpf_scenario_from_json(text.c_str(), &patched_raw)) != QPF_OK)
      return report_error(rc);
    scenario_ptr patched(patched_raw);
    return run_and_write(patched.get(), backend, out_dir);
  }

  if (c_verify->parsed()) {
    char* js = nullptr;
    rc = qpf_verify_json(scn.get(), strict ? 1 : 0, &js);
    std::printf("%s\n", take_string(js).c_str());
    if (rc == QPF_ERR_CONDITION) {
      std::fprintf(stderr, "verification failed (strict)\n");
      return QPF_ERR_CONDITION;
    }
    return rc == QPF_OK ? QPF_OK : report_error(rc);
  }

  if (c_sweep->parsed()) {
    char* js = nullptr;
    rc = qpf_sweep_json(scn.get(), sweep_param.c_str(), sweep_values.data(),
                        sweep_values.size(), workers, &js);
    if (rc != QPF_OK) return report_error(rc);
    const std::string text = take_string(js);
    std::printf("%s\n", text.c_str());
    if (!out_dir.empty() || std::getenv("QPF_OUT_DIR")) {
      const std::string dir = output_dir(out_dir);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      const std::string path =
          dir + "/" + scenario_name(scn.get()) + "_sweep.json";
      FILE* f = std::fopen(path.c_str(), "w");
      if (f) {
        std::fputs(text.c_str(), f);
        std::fputc('\n', f);
        std::fclose(f);
        std::fprintf(stderr, "wrote %s\n", path.c_str());
      }
    }
    return QPF_OK;
  }

  return QPF_ERR_CONFIG;
}
