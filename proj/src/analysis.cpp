#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpf {

namespace {
constexpr double k_log_floor = 1e-300;
constexpr size_t k_max_recorded_violations = 1000;
}  // namespace

envelope_report check_stability_envelope(const trajectory& tr,
                                         const sim_config& cfg) {
  envelope_report r;
  const design_constants& c = cfg.consts;
  r.gamma = cfg.mode == quant_mode::state ? c.gamma_state : c.gamma_input;
  if (!(c.omega > 0.0) || c.omega >= 1.0) {
    r.skipped = true;
    r.note = "zoom-in factor not in (0,1); decay hypothesis unavailable";
    return r;
  }
  if (!std::isfinite(r.gamma)) {
    r.skipped = true;
    r.note = "envelope prefactor undefined (non-positive capture margin)";
    return r;
  }
  r.rate = std::log(c.omega) / c.t_dwell;
  const double theta0 = tr.initial_norm;
  if (theta0 == 0.0) return r;  // both sides identically zero
  const double level = r.gamma * std::pow(theta0, 2.0 - r.rate / c.n_a);
  for (size_t i = 0; i < tr.samples(); ++i) {
    const double bound = level * std::exp(r.rate * tr.t[i]);
    const double ratio = tr.norm[i] / bound;
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (tr.norm[i] > bound && r.violations.size() < k_max_recorded_violations)
      r.violations.push_back({tr.t[i], tr.norm[i], bound});
  }
  return r;
}

window_report check_window_decay(const trajectory& tr, const sim_config& cfg,
                                 const kernel_table& kt, long stride) {
  window_report r;
  if (!tr.t0_detected) return r;
  r.applicable = true;
  const design_constants& c = cfg.consts;
  if (stride < 1) stride = 1;
  for (size_t i = 0; i < tr.samples(); i += stride) {
    const double t = tr.t[i];
    if (t <= tr.t0) continue;
    const double raw = std::ceil((t - tr.t0) / c.t_dwell - 1e-9);
    const int win = raw < 1.0 ? 1 : static_cast<int>(raw);
    r.windows = std::max(r.windows, win);
    const double bound =
        std::pow(c.omega, win - 1) * c.m2 * cfg.range_m * tr.mu_t0;
    const std::vector<double> w = kt.forward(tr.x[i], tr.field[i]);
    const double obs = composite_norm(tr.x[i], w, cfg.nk);
    r.worst_ratio = std::max(r.worst_ratio, obs / bound);
    if (obs > bound && r.violations.size() < k_max_recorded_violations)
      r.violations.push_back({win, t, obs, bound});
  }
  return r;
}

t0_report check_t0_bound(const trajectory& tr, const sim_config& cfg) {
  t0_report r;
  if (!tr.t0_detected) return r;
  r.applicable = true;
  r.observed = tr.t0;
  const design_constants& c = cfg.consts;
  const double theta0 = tr.initial_norm;
  double arg;
  if (cfg.mode == quant_mode::state) {
    const double margin = cfg.range_m * c.mbar - 2.0 * cfg.delta;
    if (margin <= 0.0) {
      r.note = "capture margin M*Mbar - 2*Delta non-positive; bound unavailable";
      return r;
    }
    arg = theta0 / (cfg.mu0 * margin);
  } else {
    arg = c.m3 * theta0 / (cfg.mu0 * cfg.range_m * c.mbar);
  }
  if (arg < 1.0) {
    r.note = "initial data already inside the capture range; bound degenerate";
    r.pass = true;
    return r;
  }
  r.bound = std::log(arg) / c.n_a;
  // detection happens on the sample grid, one step of slack
  r.pass = r.observed <= r.bound + tr.dt + 1e-12;
  return r;
}

double fit_decay_rate(const trajectory& tr, double from_t) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long m = 0;
  for (size_t i = 0; i < tr.samples(); ++i) {
    if (tr.t[i] < from_t) continue;
    const double y = std::log(tr.norm[i] + k_log_floor);
    sx += tr.t[i];
    sy += y;
    sxx += tr.t[i] * tr.t[i];
    sxy += tr.t[i] * y;
    ++m;
  }
  if (m < 2) return 0.0;
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

const char* to_string(run_class c) {
  switch (c) {
    case run_class::converged: return "converged";
    case run_class::diverged: return "diverged";
    case run_class::limit_cycle_like: return "limit-cycle-like";
    default: return "indeterminate";
  }
}

run_class classify_baseline(const trajectory& tr) {
  if (tr.diverged) return run_class::diverged;
  if (tr.samples() == 0) return run_class::indeterminate;
  const double init = tr.initial_norm;
  const double final_norm = tr.norm.back();
  if (final_norm < 1e-3 * init) return run_class::converged;
  double peak = 0.0;
  for (double v : tr.norm) peak = std::max(peak, v);
  if (peak > 10.0 * init) return run_class::diverged;
  const size_t tail_start = tr.samples() - tr.samples() / 4;
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  for (size_t i = tail_start; i < tr.samples(); ++i) {
    tmin = std::min(tmin, tr.norm[i]);
    tmax = std::max(tmax, tr.norm[i]);
  }
  const bool banded = peak <= 1e3 * init && tmin >= 1e-2 * init;
  const double osc = tmin > 0.0 ? tmax / tmin : std::numeric_limits<double>::infinity();
  if (banded && osc >= 1.05 && osc <= 50.0) return run_class::limit_cycle_like;
  return run_class::indeterminate;
}

disturbance_report reconstruct_disturbance(const trajectory& tr,
                                           const sim_config& cfg,
                                           const kernel_table& kt) {
  disturbance_report r;
  r.bound_factor = cfg.mode == quant_mode::state
                       ? cfg.consts.m3 * cfg.delta
                       : cfg.delta;
  for (size_t i = 0; i < tr.samples(); ++i) {
    if (tr.phase[i] != 1) continue;
    r.applicable = true;
    const double d = tr.u_ctrl[i] - kt.nominal_control(tr.x[i], tr.field[i]);
    r.t.push_back(tr.t[i]);
    r.d.push_back(d);
    const double bound = r.bound_factor * tr.mu[i];
    const double ratio = bound > 0.0 ? std::abs(d) / bound
                                     : (d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (ratio > 1.0) ++r.violations;
  }
  return r;
}

}  // namespace qpf
