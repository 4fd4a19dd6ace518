// sim: the closed-loop engine. Per step: quantize -> control -> transport PDE
// step -> plant ODE step (RK4 with the outlet value held). Two transport
// backends: Lax-Friedrichs on the grid, and an exact delay-line reconstruction
// from the control history.
#pragma once

#include <functional>
#include <vector>

#include "constants.hpp"
#include "linalg.hpp"
#include "predictor.hpp"
#include "quantizer.hpp"
#include "switching.hpp"

namespace qpf {

enum class backend_kind { lax_friedrichs, exact };
enum class controller_kind { switched, nominal_fixed_mu, open_loop };
enum class quant_mode { state, input };

struct sim_config {
  mat a;
  vec b;
  rowvec k;
  double delay = 1.0;
  double dt = 0.01, dx = 0.01, horizon = 1.0;
  backend_kind backend = backend_kind::exact;
  controller_kind controller = controller_kind::switched;
  quant_mode mode = quant_mode::state;
  double range_m = 1.0;         // M
  double delta = 0.0;           // composite resolution Delta
  double component_step = 0.0;  // per-component / per-node step (0 -> delta/(1+sqrt(n)))
  double fixed_mu = 1.0;        // for nominal_fixed_mu
  double mu0 = 1.0, tau = 1.0;
  norm_kind nk = norm_kind::two;
  vec x0;
  std::function<double(double)> u0;  // initial actuator profile on [0, delay]
  design_constants consts;
  double divergence_guard = 1e12;
};

struct trajectory {
  std::vector<double> t, u_ctrl, mu, norm, envelope;
  std::vector<int> phase;                // 0 zoom-out / idle, 1 control active
  std::vector<vec> x;
  std::vector<std::vector<double>> field;  // actuator grid snapshot per sample
  bool diverged = false;
  bool t0_detected = false;
  double t0 = std::nan("");
  double mu_t0 = std::nan("");
  double initial_norm = 0.0;
  int nx = 0;
  double dt = 0.0, dx = 0.0;
  size_t samples() const { return t.size(); }
};

// Validated grid counts; throws std::invalid_argument on inconsistent grids
// (dx not dividing the delay, dt/dx > 1).
struct grid_spec {
  int nx = 0;
  long nsteps = 0;
};
grid_spec validate_grid(double delay, double dt, double dx, double horizon);

trajectory run_simulation(const sim_config& cfg);

}  // namespace qpf
