// constants: the design-constant calculus for the switched predictor-feedback
// law — norm-equivalence constants, the small-gain feasibility layer, the
// zoom factors (Mbar, Omega, dwell time T), and the closed-loop envelope
// prefactors for both quantization modes.
#pragma once

#include <map>
#include <string>

#include "linalg.hpp"

#include <json.hpp>

namespace qpf {

struct constants_input {
  mat a;
  vec b;
  rowvec k;
  double delay = 0.0;    // D
  double range_m = 0.0;  // quantizer range M
  double delta = 0.0;    // quantizer resolution

  // decay pair for |e^{(A+BK)t}| <= m_sigma e^{-sigma t}; if m_sigma is NaN it
  // is calibrated from a dense scan of the matrix exponential (sigma required)
  double m_sigma = std::nan("");
  double sigma = std::nan("");
  // ISS gain margin; NaN selects the smallest power-of-two-friendly value
  // putting the small-gain left side at 1/2
  double lambda = std::nan("");

  double mu0 = 1.0;
  double tau = 1.0;
  norm_kind nk = norm_kind::two;

  // pinned overrides by field name (m1, m2, m3, mbar, mbar1, omega, t_dwell,
  // m0, m_sigma, sigma, lambda); each replaces the computed value and is
  // reported with "pinned" provenance
  std::map<std::string, double> pinned;
};

struct design_constants {
  double n_a = 0, n_b = 0, n_k = 0, n_acl = 0;  // operator norms
  double m_sigma = 0, sigma = 0, lambda = 0;
  double small_gain_lhs = 0;
  bool small_gain_ok = false;
  double eps = 0, nu = 0, phi = 0, phi1 = 0, m0 = 0;
  double delta_rate = 0;  // the delta in (0, min{sigma, nu}) used by T
  double m1 = 0, m2 = 0, m3 = 0, mbar = 0, mbar1 = 0;
  double omega = 0, t_dwell = 0;
  double gamma_state = 0, gamma_input = 0;  // stability-estimate prefactors
  std::map<std::string, std::string> provenance;

  nlohmann::ordered_json to_json() const;
};

design_constants compute_constants(const constants_input& in);

// feasibility conditions on the ratio delta/M
struct condition_check {
  double bound = 0;  // admissible strict upper bound for delta/M
  double ratio = 0;  // (delta/M) / bound
  bool ok = false;
};
// state-quantization condition: delta/M < M2 / ((1+M0) max{M3(1+lambda)(1+M0), 2 M1})
condition_check check_theorem1(const design_constants& c, double delta,
                               double range_m);
// input-quantization condition: delta/M < M2 / (M3 (1+lambda) (1+M0)^2)
condition_check check_theorem2(const design_constants& c, double delta,
                               double range_m);

}  // namespace qpf
