// predictor: grid kernels for the delay-compensating feedback law, the
// backstepping transform pair, and the nominal predictor control.
//
// The actuator state u lives on a uniform grid x_j = j*dx, j = 0..nx,
// with x = D the inlet (u(D,t) = U(t)) and x = 0 feeding the plant.
// All integrals use the trapezoid rule on that grid.
#pragma once

#include <vector>

#include "linalg.hpp"

namespace qpf {

struct kernel_table {
  int nx = 0;
  double dx = 0.0;
  double delay = 0.0;
  mat a;        // plant matrix
  vec b;        // input column
  rowvec k;     // feedback row
  mat e_ad;     // e^{A D}
  rowvec k_e_ad;
  // node tables, index j corresponds to x = j*dx
  std::vector<double> g;       // K e^{A x_j} B   (direct-transform kernel)
  std::vector<double> h;       // K e^{(A+BK) x_j} B (inverse-transform kernel)
  std::vector<rowvec> k_e_ax;  // K e^{A x_j}
  std::vector<rowvec> k_e_aclx;

  static kernel_table build(const mat& a, const vec& b, const rowvec& k,
                            double delay, int nx);

  // w(x) = u(x) - int_0^x K e^{A(x-y)} B u(y) dy - K e^{A x} X
  std::vector<double> forward(const vec& x_state,
                              const std::vector<double>& u) const;
  // u(x) = w(x) + int_0^x K e^{(A+BK)(x-y)} B w(y) dy + K e^{(A+BK)x} X
  std::vector<double> inverse(const vec& x_state,
                              const std::vector<double>& w) const;
  // U = int_0^D K e^{A(D-y)} B u(y) dy + K e^{A D} X
  double nominal_control(const vec& x_state, const std::vector<double>& u) const;
};

// composite norm |X| + ||u||_inf used throughout
double composite_norm(const vec& x_state, const std::vector<double>& u,
                      norm_kind k);

}  // namespace qpf
