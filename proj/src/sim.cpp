#include "sim.hpp"

#include <cmath>
#include <stdexcept>

namespace qpf {

grid_spec validate_grid(double delay, double dt, double dx, double horizon) {
  if (!(delay > 0.0) || !(dt > 0.0) || !(dx > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("grid: delay, dt, dx, horizon must be positive");
  if (dt / dx > 1.0 + 1e-12)
    throw std::invalid_argument("grid: dt/dx exceeds 1 (CFL violation)");
  grid_spec g;
  g.nx = static_cast<int>(std::llround(delay / dx));
  if (g.nx < 1 || std::abs(g.nx * dx - delay) > 1e-9 * std::max(1.0, delay))
    throw std::invalid_argument("grid: dx must divide the delay");
  g.nsteps = std::llround(horizon / dt);
  if (g.nsteps < 1) throw std::invalid_argument("grid: horizon shorter than dt");
  return g;
}

namespace {

void rk4_step(const mat& a, const vec& b, vec& x, double uz, double dt) {
  const vec bu = b * uz;
  const vec k1 = a * x + bu;
  const vec k2 = a * (x + 0.5 * dt * k1) + bu;
  const vec k3 = a * (x + 0.5 * dt * k2) + bu;
  const vec k4 = a * (x + dt * k3) + bu;
  x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

trajectory run_simulation(const sim_config& cfg) {
  const grid_spec g = validate_grid(cfg.delay, cfg.dt, cfg.dx, cfg.horizon);
  const int nx = g.nx;
  const long nsteps = g.nsteps;
  const int n = static_cast<int>(cfg.x0.size());

  const kernel_table kt = kernel_table::build(cfg.a, cfg.b, cfg.k, cfg.delay, nx);

  const double comp_step = cfg.component_step > 0.0
                               ? cfg.component_step
                               : cfg.delta / (1.0 + std::sqrt(double(n)));
  const quantizer q_comp{cfg.range_m, comp_step};  // state components and field nodes
  const quantizer q_input{cfg.range_m, cfg.delta}; // scalar control channel

  switch_supervisor sw;
  sw.p = {cfg.mu0,          cfg.tau,         cfg.consts.omega,
          cfg.consts.t_dwell, cfg.consts.mbar1, cfg.consts.mbar,
          cfg.consts.m3,    cfg.consts.n_a,  cfg.range_m,
          cfg.delta};

  trajectory tr;
  tr.nx = nx;
  tr.dt = cfg.dt;
  tr.dx = cfg.dx;
  tr.t.reserve(nsteps + 1);

  vec x = cfg.x0;
  std::vector<double> u(nx + 1);
  for (int j = 0; j <= nx; ++j) u[j] = cfg.u0(j * cfg.dx);
  tr.initial_norm = composite_norm(x, u, cfg.nk);

  vec qx(n);
  std::vector<double> qu(nx + 1), un(nx + 1);

  for (long step = 0; step <= nsteps; ++step) {
    const double t = step * cfg.dt;

    double mu;
    double u_ctrl = 0.0;
    int phase;
    if (cfg.controller == controller_kind::switched) {
      if (!sw.detected) {
        mu = sw.mu_zoom_out(t);
        double lhs, thr;
        if (cfg.mode == quant_mode::state) {
          for (int i = 0; i < n; ++i) qx[i] = q_comp.quantize_scaled(x[i], mu);
          double sup = 0.0;
          for (int j = 0; j <= nx; ++j)
            sup = std::max(sup, std::abs(q_comp.quantize_scaled(u[j], mu)));
          lhs = vec_norm(qx, cfg.nk) + sup;
          thr = sw.state_event_threshold(mu);
        } else {
          lhs = composite_norm(x, u, cfg.nk);
          thr = sw.input_event_threshold(mu);
        }
        if (lhs <= thr) sw.capture(t, mu);
      } else {
        mu = sw.mu_at(t);
      }
      phase = (sw.detected && t > sw.t0) ? 1 : 0;
      if (phase == 1) {
        if (cfg.mode == quant_mode::state) {
          for (int i = 0; i < n; ++i) qx[i] = q_comp.quantize_scaled(x[i], mu);
          for (int j = 0; j <= nx; ++j) qu[j] = q_comp.quantize_scaled(u[j], mu);
          u_ctrl = kt.nominal_control(qx, qu);
        } else {
          u_ctrl = q_input.quantize_scaled(kt.nominal_control(x, u), mu);
        }
      }
    } else if (cfg.controller == controller_kind::nominal_fixed_mu) {
      mu = cfg.fixed_mu;
      phase = 1;
      if (cfg.mode == quant_mode::state) {
        for (int i = 0; i < n; ++i) qx[i] = q_comp.quantize_scaled(x[i], mu);
        for (int j = 0; j <= nx; ++j) qu[j] = q_comp.quantize_scaled(u[j], mu);
        u_ctrl = kt.nominal_control(qx, qu);
      } else {
        u_ctrl = q_input.quantize_scaled(kt.nominal_control(x, u), mu);
      }
    } else {
      mu = cfg.mu0;
      phase = 0;
    }

    const double nrm = composite_norm(x, u, cfg.nk);
    tr.t.push_back(t);
    tr.u_ctrl.push_back(u_ctrl);
    tr.mu.push_back(mu);
    tr.norm.push_back(nrm);
    tr.envelope.push_back(mu * cfg.range_m * cfg.consts.mbar);
    tr.phase.push_back(phase);
    tr.x.push_back(x);
    tr.field.push_back(u);

    if (!std::isfinite(nrm) || nrm > cfg.divergence_guard) {
      tr.diverged = true;
      break;
    }
    if (step == nsteps) break;

    const double uz = u[0];

    if (cfg.backend == backend_kind::lax_friedrichs) {
      const double lam = cfg.dt / cfg.dx;
      un[0] = u[0] + lam * (u[1] - u[0]);  // outflow: one-sided upwind
      for (int j = 1; j < nx; ++j)
        un[j] = 0.5 * (u[j + 1] + u[j - 1]) + 0.5 * lam * (u[j + 1] - u[j - 1]);
      un[nx] = u_ctrl;
    } else {
      // exact delay line: the control history (zero-order hold over (t_k, t_k+dt])
      // with the initial profile supplying pre-history
      const double tnext = (step + 1) * cfg.dt;
      for (int j = 0; j <= nx; ++j) {
        const double arg = j * cfg.dx + tnext;
        if (arg <= cfg.delay) {
          un[j] = cfg.u0(arg);
        } else {
          const double s = tnext + j * cfg.dx - cfg.delay;
          long kk = static_cast<long>(std::ceil(s / cfg.dt)) - 1;
          if (kk < 0) kk = 0;
          const long last = static_cast<long>(tr.u_ctrl.size()) - 1;
          if (kk > last) kk = last;
          un[j] = tr.u_ctrl[kk];
        }
      }
    }
    u.swap(un);
    rk4_step(cfg.a, cfg.b, x, uz, cfg.dt);
  }

  tr.t0_detected = sw.detected;
  tr.t0 = sw.t0;
  tr.mu_t0 = sw.mu_t0;
  return tr;
}

}  // namespace qpf
