// scenario: JSON-backed run description (plant, gains, quantizer, switching,
// grid, backend) with validation and a lossless serialize/parse round trip.
#pragma once

#include <map>
#include <string>

#include "constants.hpp"
#include "sim.hpp"

#include <json.hpp>

namespace qpf {

struct scenario {
  std::string name = "scenario";
  mat a;
  vec b;
  rowvec k;
  double delay = 1.0;    // delay_d_s
  double range_m = 1.0;  // quantizer.range_m
  double delta = 0.0;    // quantizer.delta
  double component_step = 0.0;  // 0 -> delta/(1+sqrt(n))
  quant_mode mode = quant_mode::state;
  controller_kind controller = controller_kind::switched;
  double fixed_mu = 1.0;
  double mu0 = 1.0;
  double tau = std::nan("");     // switching.tau_s; NaN -> derived from initial data
  double lambda = std::nan("");  // NaN -> auto
  double m_sigma = std::nan("");
  double sigma = std::nan("");   // decay.sigma_per_s
  double dt = 0.0, dx = 0.0, horizon = 0.0;
  backend_kind backend = backend_kind::exact;
  norm_kind nk = norm_kind::two;
  vec x0;
  std::string u0_kind = "zero";  // "zero" | "constant"
  double u0_value = 0.0;
  std::map<std::string, double> pinned;
  long seed = 0;
  double divergence_guard = 1e12;

  static scenario from_json(const nlohmann::ordered_json& j);
  static scenario load_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  // throws std::invalid_argument with a reason on any configuration defect
  void validate() const;

  double u0_at(double x) const {
    (void)x;
    return u0_kind == "constant" ? u0_value : 0.0;
  }
  // |X0| + ||u0||_inf
  double initial_size() const;

  constants_input to_constants_input() const;
  // computes constants and resolves auto tau; validated first
  sim_config to_sim_config() const;
  sim_config to_sim_config(const design_constants& c) const;
};

std::string to_string(backend_kind b);
std::string to_string(controller_kind c);
std::string to_string(quant_mode m);

}  // namespace qpf
