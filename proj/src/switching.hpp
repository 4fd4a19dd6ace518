// switching: the zoom supervisor — exponential zoom-out staircase before the
// capture event, geometric zoom-in windows of length T afterwards — plus the
// event thresholds for both quantization modes.
#pragma once

#include <cmath>

#include "linalg.hpp"

namespace qpf {

struct switching_params {
  double mu0 = 1.0;
  double tau = 1.0;
  double omega = 0.0;
  double t_dwell = 0.0;  // T
  double mbar1 = 0.0;
  double mbar = 0.0;
  double m3 = 0.0;
  double n_a = 0.0;   // |A|
  double range_m = 0.0;
  double delta = 0.0;
};

struct switch_supervisor {
  switching_params p;
  bool detected = false;
  double t0 = std::nan("");
  double mu_t0 = std::nan("");

  // staircase Mbar1 e^{2|A| j tau} mu0 with j = floor(t/tau)+1
  double mu_zoom_out(double t) const {
    double j = std::floor(t / p.tau) + 1.0;
    return p.mbar1 * std::exp(2.0 * p.n_a * j * p.tau) * p.mu0;
  }
  // zoom-in window index: i = 1 on (t0, t0+T], i on (t0+(i-1)T, t0+iT]
  int window_index(double t) const {
    double raw = std::ceil((t - t0) / p.t_dwell - 1e-9);
    return raw < 1.0 ? 1 : static_cast<int>(raw);
  }
  double mu_at(double t) const {
    if (!detected || t <= t0) return mu_zoom_out(t);
    return std::pow(p.omega, window_index(t) - 1) * mu_t0;
  }
  void capture(double t, double mu) {
    detected = true;
    t0 = t;
    mu_t0 = mu;
  }

  // capture event: quantized composite norm within (M Mbar - Delta) mu
  double state_event_threshold(double mu) const {
    return (p.range_m * p.mbar - p.delta) * mu;
  }
  // input-mode event on the unquantized norm: within (M Mbar / M3) mu
  double input_event_threshold(double mu) const {
    return p.range_m * p.mbar / p.m3 * mu;
  }
};

// Pick tau so that the first staircase value mu(0) already covers the initial
// data z0 = |X0| + ||u0||_inf: with a deadzone (mhat > 0) target
// mu(0) >= 1.05 z0 / mhat, otherwise target the capture threshold directly,
// mu(0) >= 2 z0 / (M Mbar - 2 Delta). Returns a small positive floor when the
// initial data is already inside the range.
double auto_tau(double z0, double mhat, const switching_params& p);

}  // namespace qpf
