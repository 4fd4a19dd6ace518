// analysis: post-hoc verification of the closed-loop guarantees on simulated
// trajectories — stability envelope, per-window geometric decay, capture-time
// bound, decay-rate fit, baseline classification, and reconstruction of the
// quantization-error disturbance.
#pragma once

#include <string>
#include <vector>

#include "sim.hpp"

namespace qpf {

struct envelope_violation {
  double t = 0, observed = 0, bound = 0;
};

struct envelope_report {
  double gamma = 0;
  double rate = 0;  // ln(Omega)/T
  std::vector<envelope_violation> violations;
  double max_ratio = 0;
  bool skipped = false;  // hypothesis unavailable (Omega >= 1 or empty margin)
  std::string note;
  bool pass() const { return skipped || violations.empty(); }
};

// |X(t)| + ||u(t)||_inf <= gamma * theta0^(2 - rate/|A|) * e^{rate t}
envelope_report check_stability_envelope(const trajectory& tr,
                                         const sim_config& cfg);

struct window_violation {
  int window = 0;
  double t = 0, observed = 0, bound = 0;
};

struct window_report {
  bool applicable = false;  // capture event was detected
  int windows = 0;
  std::vector<window_violation> violations;
  double worst_ratio = 0;
  bool pass() const { return !applicable || violations.empty(); }
};

// per-window bound |X| + ||w||_inf <= Omega^{i-1} M2 M mu(t0) on window i,
// with w the transformed actuator state; evaluated every `stride` samples
window_report check_window_decay(const trajectory& tr, const sim_config& cfg,
                                 const kernel_table& kt, long stride = 1);

struct t0_report {
  bool applicable = false;
  bool pass = true;
  double observed = std::nan("");
  double bound = std::nan("");
  std::string note;
};

// capture-time bound: t0 <= ln(theta0 / (mu0 (M Mbar - 2 Delta))) / |A| in
// state mode, t0 <= ln(M3 theta0 / (mu0 M Mbar)) / |A| in input mode
t0_report check_t0_bound(const trajectory& tr, const sim_config& cfg);

// least-squares slope of ln(norm + floor) against t over [from_t, end]
double fit_decay_rate(const trajectory& tr, double from_t);

enum class run_class { converged, diverged, limit_cycle_like, indeterminate };
const char* to_string(run_class c);

// converged: final norm < 1e-3 x initial; diverged: guard tripped or peak
// > 10 x initial; limit-cycle-like: bounded by 1e3 x initial with tail
// (last quarter) inside [1e-2 x initial, 1e3 x initial] and tail max/min
// in [1.05, 50]. Convergence is checked first: a converged run may still
// have a large zoom-out transient peak.
run_class classify_baseline(const trajectory& tr);

struct disturbance_report {
  bool applicable = false;
  std::vector<double> t, d;
  double bound_factor = 0;  // bound at sample i is bound_factor * mu_i
  long violations = 0;
  double worst_ratio = 0;
  bool pass() const { return !applicable || violations == 0; }
};

// d(t) = applied control minus the nominal predictor on the true state;
// bounded by M3 Delta mu (state mode) / Delta mu (input mode)
disturbance_report reconstruct_disturbance(const trajectory& tr,
                                           const sim_config& cfg,
                                           const kernel_table& kt);

}  // namespace qpf
