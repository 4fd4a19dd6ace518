#include "predictor.hpp"

#include <cmath>
#include <stdexcept>

namespace qpf {

kernel_table kernel_table::build(const mat& a, const vec& b, const rowvec& k,
                                 double delay, int nx) {
  if (nx < 1) throw std::invalid_argument("kernel_table: nx must be >= 1");
  kernel_table t;
  t.nx = nx;
  t.dx = delay / nx;
  t.delay = delay;
  t.a = a;
  t.b = b;
  t.k = k;
  const mat acl = a + b * k;
  const mat step_a = expm(a * t.dx);
  const mat step_acl = expm(acl * t.dx);
  mat ea = mat::Identity(a.rows(), a.cols());
  mat eacl = ea;
  t.g.resize(nx + 1);
  t.h.resize(nx + 1);
  t.k_e_ax.resize(nx + 1);
  t.k_e_aclx.resize(nx + 1);
  for (int j = 0; j <= nx; ++j) {
    t.k_e_ax[j] = k * ea;
    t.k_e_aclx[j] = k * eacl;
    t.g[j] = t.k_e_ax[j] * b;
    t.h[j] = t.k_e_aclx[j] * b;
    if (j < nx) {
      ea = step_a * ea;       // e^{A (j+1) dx}, accumulated from the single-cell
      eacl = step_acl * eacl; // propagator so node values stay consistent
    }
  }
  t.e_ad = ea;
  t.k_e_ad = k * ea;
  return t;
}

namespace {

// trapezoid convolution sum_{k=0..m} c_k ker[m-k] f[k] with c = dx*(1/2,1,..,1,1/2)
double trapz_conv(const std::vector<double>& ker, const std::vector<double>& f,
                  int m, double dx) {
  if (m == 0) return 0.0;
  double s = 0.5 * (ker[m] * f[0] + ker[0] * f[m]);
  for (int k = 1; k < m; ++k) s += ker[m - k] * f[k];
  return s * dx;
}

}  // namespace

std::vector<double> kernel_table::forward(const vec& x_state,
                                          const std::vector<double>& u) const {
  std::vector<double> w(nx + 1);
  for (int m = 0; m <= nx; ++m)
    w[m] = u[m] - trapz_conv(g, u, m, dx) - k_e_ax[m] * x_state;
  return w;
}

std::vector<double> kernel_table::inverse(const vec& x_state,
                                          const std::vector<double>& w) const {
  std::vector<double> u(nx + 1);
  for (int m = 0; m <= nx; ++m)
    u[m] = w[m] + trapz_conv(h, w, m, dx) + k_e_aclx[m] * x_state;
  return u;
}

double kernel_table::nominal_control(const vec& x_state,
                                     const std::vector<double>& u) const {
  // int_0^D K e^{A(D-y)} B u(y) dy: kernel g reversed onto the grid
  double s = 0.5 * (g[nx] * u[0] + g[0] * u[nx]);
  for (int j = 1; j < nx; ++j) s += g[nx - j] * u[j];
  return s * dx + k_e_ad * x_state;
}

double composite_norm(const vec& x_state, const std::vector<double>& u,
                      norm_kind k) {
  double sup = 0.0;
  for (double v : u) sup = std::max(sup, std::abs(v));
  return vec_norm(x_state, k) + sup;
}

}  // namespace qpf
