// runner: orchestration — run a scenario end to end (constants, simulation,
// analysis), emit trace CSV / plot CSV / JSON manifest, static verification
// reports, and deterministic parameter sweeps over a worker pool.
#pragma once

#include <string>
#include <vector>

#include "analysis.hpp"
#include "scenario.hpp"

namespace qpf {

struct run_result {
  scenario scn;
  design_constants consts;
  double tau_used = 0.0;
  trajectory traj;
  run_class cls = run_class::indeterminate;
  envelope_report env;
  window_report windows;
  t0_report t0;
  disturbance_report dist;
  condition_check th1, th2;
  double tail_rate = 0.0;
  double fit_from = 0.0;

  nlohmann::ordered_json manifest() const;
};

run_result run_scenario(const scenario& s);

// columns: t, x1..xn, U, mu, phase, norm, envelope (%.17g, deterministic)
void write_trace_csv(const run_result& r, const std::string& path);
// columns: t, norm, envelope
void write_plot_csv(const run_result& r, const std::string& path);

// static checks only (no simulation): small gain, both feasibility
// conditions, quantizer property scan; "all_pass" aggregates the small-gain
// check, the mode-relevant feasibility condition, and the quantizer scan
nlohmann::ordered_json verify_report(const scenario& s);
bool verify_all_pass(const nlohmann::ordered_json& report);

// one run per value of `param`, merged in input order; workers > 1 fans out
// to threads (runs share nothing mutable)
nlohmann::ordered_json sweep(const scenario& base, const std::string& param,
                             const std::vector<double>& values, int workers);

}  // namespace qpf
