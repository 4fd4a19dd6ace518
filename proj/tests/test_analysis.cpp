#include <doctest.h>

#include <cmath>
#include <vector>

#include "analysis.hpp"
#include "constants.hpp"
#include "oracles.hpp"
#include "predictor.hpp"
#include "sim.hpp"

using qpf::backend_kind;
using qpf::controller_kind;
using qpf::run_class;
using qpf::sim_config;
using qpf::trajectory;
using qpf::vec;

namespace {

// hand-built trajectory with a prescribed norm profile
trajectory synthetic(const std::vector<double>& norms, double dt) {
  trajectory tr;
  tr.dt = dt;
  tr.dx = dt;
  tr.nx = 1;
  for (size_t i = 0; i < norms.size(); ++i) {
    tr.t.push_back(double(long(i)) * dt);
    tr.norm.push_back(norms[i]);
    tr.u_ctrl.push_back(0.0);
    tr.mu.push_back(1.0);
    tr.envelope.push_back(0.0);
    tr.phase.push_back(0);
    tr.x.push_back(vec::Zero(2));
    tr.field.push_back({0.0, 0.0});
  }
  tr.initial_norm = norms.front();
  return tr;
}

sim_config reference_config() {
  sim_config cfg;
  cfg.a.resize(2, 2);
  cfg.a << -1.0, 1.0, 0.0, 1.0;
  cfg.b.resize(2);
  cfg.b << 0.0, 1.0;
  cfg.k.resize(2);
  cfg.k << 0.0, -3.0;
  cfg.delay = 1.0;
  cfg.dt = 0.01;
  cfg.dx = 0.01;
  cfg.horizon = 40.0;
  cfg.backend = backend_kind::exact;
  cfg.controller = controller_kind::switched;
  cfg.range_m = 2.0;
  cfg.delta = 0.0;
  cfg.mu0 = 1.0;
  cfg.x0.resize(2);
  cfg.x0 << 10.0, 0.0;
  cfg.u0 = [](double) { return 10.0; };

  qpf::constants_input in;
  in.a = cfg.a;
  in.b = cfg.b;
  in.k = cfg.k;
  in.delay = cfg.delay;
  in.range_m = cfg.range_m;
  in.delta = cfg.delta;
  in.sigma = 1.0;
  in.m_sigma = 0.5;
  in.lambda = 12.0;
  in.mu0 = 1.0;
  in.pinned = {{"omega", 0.63}};
  in.tau = 1.0;
  const auto c0 = qpf::compute_constants(in);
  // auto dwell scaling: with delta = 0 capture happens via the zoom-out
  // staircase alone; reuse the computed dwell time
  cfg.tau = 1.0;
  cfg.consts = c0;
  cfg.horizon = std::min(4.0 * c0.t_dwell + 2.0, 60.0);
  return cfg;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("decay-rate fit recovers a synthetic exponential") {
  std::vector<double> norms;
  for (int i = 0; i <= 400; ++i) norms.push_back(3.0 * std::exp(-0.5 * i * 0.01));
  const auto tr = synthetic(norms, 0.01);
  CHECK(qpf::fit_decay_rate(tr, 0.0) == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(qpf::fit_decay_rate(tr, 2.0) == doctest::Approx(-0.5).epsilon(1e-9));

  std::vector<double> flat(100, 2.0);
  CHECK(qpf::fit_decay_rate(synthetic(flat, 0.1), 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("baseline classification") {
  // converged: final three orders below initial
  std::vector<double> conv;
  for (int i = 0; i <= 1000; ++i) conv.push_back(20.0 * std::exp(-0.01 * i));
  CHECK(qpf::classify_baseline(synthetic(conv, 0.05)) == run_class::converged);

  // converged despite a large zoom-out transient peak
  std::vector<double> peaky;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * 0.05;
    const double bump = 400.0 * std::exp(-(t - 10.0) * (t - 10.0));
    peaky.push_back(20.0 * std::exp(-0.3 * t) + bump + 20.0 * 1e-4);
  }
  peaky.back() = 0.001;  // ensure the final sample sits under the threshold
  CHECK(qpf::classify_baseline(synthetic(peaky, 0.05)) == run_class::converged);

  // diverged by peak excursion
  std::vector<double> div;
  for (int i = 0; i <= 200; ++i) div.push_back(10.0 * std::exp(0.03 * i));
  CHECK(qpf::classify_baseline(synthetic(div, 0.05)) == run_class::diverged);

  // diverged by guard trip
  auto tripped = synthetic({10.0, 50.0, 5e12}, 0.1);
  tripped.diverged = true;
  CHECK(qpf::classify_baseline(tripped) == run_class::diverged);

  // bounded oscillation with a clear ripple: limit-cycle-like
  std::vector<double> lc;
  for (int i = 0; i <= 2000; ++i)
    lc.push_back(10.0 + 6.0 * std::sin(0.05 * i));
  CHECK(qpf::classify_baseline(synthetic(lc, 0.05)) ==
        run_class::limit_cycle_like);

  // subsampling by two must not change the call
  std::vector<double> lc2;
  for (int i = 0; i <= 1000; ++i) lc2.push_back(10.0 + 6.0 * std::sin(0.1 * i));
  CHECK(qpf::classify_baseline(synthetic(lc2, 0.1)) ==
        run_class::limit_cycle_like);

  // slow drift without ripple or convergence: indeterminate
  std::vector<double> drift;
  for (int i = 0; i <= 100; ++i) drift.push_back(10.0 - 0.002 * i);
  CHECK(qpf::classify_baseline(synthetic(drift, 0.1)) ==
        run_class::indeterminate);
}

TEST_CASE("window decay and capture bound on a quantization-free reference run") {
  sim_config cfg = reference_config();
  const auto tr = qpf::run_simulation(cfg);
  REQUIRE_FALSE(tr.diverged);
  REQUIRE(tr.t0_detected);

  const auto kt = qpf::kernel_table::build(cfg.a, cfg.b, cfg.k, cfg.delay,
                                           qpf::validate_grid(cfg.delay, cfg.dt,
                                                              cfg.dx,
                                                              cfg.horizon)
                                               .nx);
  const auto wr = qpf::check_window_decay(tr, cfg, kt, 5);
  CHECK(wr.applicable);
  CHECK(wr.violations.empty());
  CHECK(wr.worst_ratio <= 1.0);
  CHECK(wr.windows >= 1);

  const auto t0r = qpf::check_t0_bound(tr, cfg);
  CHECK(t0r.applicable);
  CHECK(t0r.pass);

  const auto er = qpf::check_stability_envelope(tr, cfg);
  CHECK(er.pass());
}

TEST_CASE("capture bound handles the degenerate small-state case") {
  sim_config cfg = reference_config();
  cfg.x0 << 1e-5, 0.0;
  cfg.u0 = [](double) { return 0.0; };
  cfg.horizon = 5.0;
  const auto tr = qpf::run_simulation(cfg);
  REQUIRE(tr.t0_detected);
  const auto t0r = qpf::check_t0_bound(tr, cfg);
  // theta0 below the capture threshold: the log argument drops under one
  // and the bound degenerates; the check documents it and passes
  CHECK(t0r.applicable);
  CHECK(t0r.pass);
  CHECK_FALSE(t0r.note.empty());
}

TEST_CASE("envelope check is skipped when omega is not contracting") {
  sim_config cfg = reference_config();
  cfg.consts.omega = 1.3;
  const auto tr = synthetic({1.0, 1.0, 1.0}, 0.1);
  const auto er = qpf::check_stability_envelope(tr, cfg);
  CHECK(er.skipped);
  CHECK(er.pass());
}

TEST_CASE("envelope check flags violations on a fabricated trajectory") {
  sim_config cfg = reference_config();
  // gamma * theta0^(2-rate/|A|) with a tiny gamma forces violations
  cfg.consts.omega = 0.5;
  cfg.consts.t_dwell = 2.0;
  cfg.consts.gamma_state = 1e-12;
  auto tr = synthetic({5.0, 5.0, 5.0, 5.0}, 0.1);
  tr.initial_norm = 5.0;
  tr.t0_detected = true;
  tr.t0 = 0.0;
  tr.mu_t0 = 1.0;
  const auto er = qpf::check_stability_envelope(tr, cfg);
  CHECK_FALSE(er.skipped);
  CHECK_FALSE(er.violations.empty());
  CHECK(er.max_ratio > 1.0);
}

TEST_CASE("disturbance reconstruction is identically zero without quantization") {
  sim_config cfg = reference_config();
  cfg.horizon = 6.0;
  const auto tr = qpf::run_simulation(cfg);
  const auto kt = qpf::kernel_table::build(cfg.a, cfg.b, cfg.k, cfg.delay,
                                           tr.nx);
  const auto dr = qpf::reconstruct_disturbance(tr, cfg, kt);
  CHECK(dr.applicable);
  for (double d : dr.d) CHECK(d == 0.0);
  CHECK(dr.violations == 0);
}

TEST_CASE("disturbance stays within its bound on a quantized run") {
  sim_config cfg = reference_config();
  cfg.backend = backend_kind::lax_friedrichs;
  cfg.dt = 0.01;
  cfg.dx = 0.02;
  cfg.delta = 0.02;
  cfg.component_step = 0.02;
  cfg.tau = 2.1497;
  cfg.horizon = 12.0;

  qpf::constants_input in;
  in.a = cfg.a;
  in.b = cfg.b;
  in.k = cfg.k;
  in.delay = cfg.delay;
  in.range_m = cfg.range_m;
  in.delta = cfg.delta;
  in.sigma = 1.0;
  in.m_sigma = 0.5;
  in.lambda = 12.0;
  in.mu0 = 1.0;
  in.tau = cfg.tau;
  in.pinned = {{"m1", 4.5},    {"m2", 0.2},     {"mbar", 0.6},
               {"mbar1", 2.0}, {"omega", 0.63}, {"t_dwell", 2.0}};
  cfg.consts = qpf::compute_constants(in);

  const auto tr = qpf::run_simulation(cfg);
  REQUIRE_FALSE(tr.diverged);
  REQUIRE(tr.t0_detected);
  const auto kt = qpf::kernel_table::build(cfg.a, cfg.b, cfg.k, cfg.delay,
                                           tr.nx);
  const auto dr = qpf::reconstruct_disturbance(tr, cfg, kt);
  CHECK(dr.applicable);
  CHECK(dr.violations == 0);
  CHECK(dr.worst_ratio <= 1.0);
  CHECK(dr.bound_factor == doctest::Approx(cfg.consts.m3 * cfg.delta));
}

}  // TEST_SUITE
