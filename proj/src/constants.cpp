#include "constants.hpp"

#include <cmath>
#include <stdexcept>

namespace qpf {

namespace {

// joint feasibility margin for the (eps, nu) pair: h < 1 implies both
// phi < 1 and phi1 < 1
double h_margin(double eps, double nu, double d, double lam, double msig,
                double sig, double nb) {
  double phi = (1.0 + eps) / (1.0 + lam) * std::exp(d * (nu + 1.0));
  return phi * ((1.0 + eps) * (msig / sig) * nb + 1.0);
}

double pinned_or(const std::map<std::string, double>& pinned,
                 const std::string& name, double computed,
                 std::map<std::string, std::string>& prov,
                 const char* computed_tag = "computed") {
  auto it = pinned.find(name);
  if (it != pinned.end()) {
    prov[name] = "pinned";
    return it->second;
  }
  prov[name] = computed_tag;
  return computed;
}

}  // namespace

design_constants compute_constants(const constants_input& in) {
  design_constants c;
  const double d = in.delay;
  c.n_a = mat_norm(in.a, in.nk);
  c.n_b = vec_norm(in.b, in.nk);
  c.n_k = mat_norm(mat(in.k), in.nk);
  const mat acl = in.a + in.b * in.k;
  c.n_acl = mat_norm(acl, in.nk);

  // decay pair for the closed-loop matrix exponential
  double sigma = in.sigma;
  double m_sigma = in.m_sigma;
  if (auto it = in.pinned.find("sigma"); it != in.pinned.end()) sigma = it->second;
  if (std::isnan(sigma))
    throw std::invalid_argument("constants: sigma is required (pin m_sigma/sigma or provide sigma)");
  c.provenance["sigma"] = in.pinned.count("sigma") ? "pinned" : "given";
  if (auto it = in.pinned.find("m_sigma"); it != in.pinned.end()) {
    m_sigma = it->second;
    c.provenance["m_sigma"] = "pinned";
  } else if (std::isnan(m_sigma)) {
    // calibrate: 1.05 * sup_t |e^{(A+BK)t}| e^{sigma t} over a dense scan
    const int n_scan = 4000;
    const double t_max = 40.0;
    double sup = 0.0;
    const mat step = expm(acl * (t_max / n_scan));
    mat e = mat::Identity(acl.rows(), acl.cols());
    for (int i = 0; i <= n_scan; ++i) {
      double t = t_max * static_cast<double>(i) / n_scan;
      sup = std::max(sup, mat_norm(e, in.nk) * std::exp(sigma * t));
      if (i < n_scan) e = step * e;
    }
    m_sigma = 1.05 * sup;
    c.provenance["m_sigma"] = "auto";
  } else {
    c.provenance["m_sigma"] = "given";
  }
  c.m_sigma = m_sigma;
  c.sigma = sigma;

  double lambda = in.lambda;
  if (auto it = in.pinned.find("lambda"); it != in.pinned.end()) {
    lambda = it->second;
    c.provenance["lambda"] = "pinned";
  } else if (std::isnan(lambda)) {
    // place the small-gain left side at 1/2
    lambda = 2.0 * std::exp(d) * ((m_sigma / sigma) * c.n_b + 1.0) - 1.0;
    c.provenance["lambda"] = "auto";
  } else {
    c.provenance["lambda"] = "given";
  }
  c.lambda = lambda;

  c.small_gain_lhs =
      std::exp(d) / (1.0 + lambda) * ((m_sigma / sigma) * c.n_b + 1.0);
  c.small_gain_ok = c.small_gain_lhs < 1.0;

  // halving search for a feasible (eps, nu) pair
  double eps = 1.0, nu = 1.0;
  for (int i = 0;
       i < 60 && h_margin(eps, nu, d, lambda, m_sigma, sigma, c.n_b) >= 1.0;
       ++i) {
    eps /= 2.0;
    nu /= 2.0;
  }
  c.eps = eps;
  c.nu = nu;
  c.phi = (1.0 + eps) / (1.0 + lambda) * std::exp(d * (nu + 1.0));
  c.phi1 = (1.0 + eps) / (1.0 - c.phi) * c.phi * (m_sigma / sigma) * c.n_b;

  double m0 = std::max((1.0 - c.phi) * (1.0 - c.phi1), 1e-300);
  m0 = std::max(std::exp(d), c.phi * m_sigma) / m0 +
       std::max(m_sigma / (1.0 - c.phi1),
                (1.0 + eps) / ((1.0 - c.phi) * (1.0 - c.phi1)) * std::exp(d) *
                    (m_sigma / sigma) * c.n_b);
  c.m0 = pinned_or(in.pinned, "m0", m0, c.provenance);
  c.delta_rate = 0.9 * std::min(sigma, nu);

  const double e_nad = std::exp(c.n_a * d);
  c.m1 = pinned_or(in.pinned, "m1",
                   c.n_k * e_nad * std::max(1.0, d * c.n_b) + 1.0, c.provenance);
  c.m2 = pinned_or(
      in.pinned, "m2",
      1.0 / (c.n_k * std::exp(c.n_acl * d) * std::max(1.0, d * c.n_b) + 1.0),
      c.provenance);
  c.m3 = pinned_or(in.pinned, "m3", c.n_k * e_nad * (1.0 + c.n_b * d),
                   c.provenance);
  c.mbar1 = pinned_or(in.pinned, "mbar1", 1.0 + d * c.n_b, c.provenance);
  c.mbar = pinned_or(in.pinned, "mbar", c.m2 / (c.m1 * (1.0 + c.m0)),
                     c.provenance);
  c.omega = pinned_or(in.pinned, "omega",
                      (1.0 + c.lambda) * (1.0 + c.m0) * (1.0 + c.m0) *
                          in.delta * c.m3 / (c.m2 * in.range_m),
                      c.provenance);
  c.t_dwell = pinned_or(in.pinned, "t_dwell",
                        -std::log(c.omega / (1.0 + c.m0)) / c.delta_rate,
                        c.provenance);

  // stability-estimate prefactors (NaN when the zoom margin is non-positive)
  const double rate_term = 1.0 - std::log(c.omega) / c.t_dwell / c.n_a;
  const double zoom_out_peak = std::exp(2.0 * c.n_a * in.tau) * in.mu0;
  double margin_state = in.mu0 * (in.range_m * c.mbar - 2.0 * in.delta);
  if (margin_state > 0.0) {
    c.gamma_state = c.mbar1 / c.m2 *
                    std::max(c.m2 * in.range_m / c.omega * zoom_out_peak, c.m1) *
                    std::max(1.0 / margin_state, 1.0) *
                    std::pow(1.0 / margin_state, rate_term);
  } else {
    c.gamma_state = std::nan("");
  }
  double margin_input = c.m3 / (in.mu0 * in.range_m * c.mbar);
  c.gamma_input =
      c.mbar1 / c.m2 *
      std::max(c.m2 * in.range_m / (c.omega * c.m3) * zoom_out_peak, c.m1) *
      std::max(margin_input, 1.0) * std::pow(margin_input, rate_term);

  return c;
}

condition_check check_theorem1(const design_constants& c, double delta,
                               double range_m) {
  condition_check r;
  r.bound = c.m2 / ((1.0 + c.m0) *
                    std::max(c.m3 * (1.0 + c.lambda) * (1.0 + c.m0), 2.0 * c.m1));
  r.ratio = delta / range_m / r.bound;
  r.ok = delta / range_m < r.bound;
  return r;
}

condition_check check_theorem2(const design_constants& c, double delta,
                               double range_m) {
  condition_check r;
  r.bound = c.m2 / (c.m3 * (1.0 + c.lambda) * (1.0 + c.m0) * (1.0 + c.m0));
  r.ratio = delta / range_m / r.bound;
  r.ok = delta / range_m < r.bound;
  return r;
}

nlohmann::ordered_json design_constants::to_json() const {
  nlohmann::ordered_json j;
  j["norm_a"] = n_a;
  j["norm_b"] = n_b;
  j["norm_k"] = n_k;
  j["norm_a_cl"] = n_acl;
  j["m_sigma"] = m_sigma;
  j["sigma"] = sigma;
  j["lambda"] = lambda;
  j["small_gain_lhs"] = small_gain_lhs;
  j["small_gain_ok"] = small_gain_ok;
  j["eps"] = eps;
  j["nu"] = nu;
  j["phi"] = phi;
  j["phi1"] = phi1;
  j["m0"] = m0;
  j["delta_rate"] = delta_rate;
  j["m1"] = m1;
  j["m2"] = m2;
  j["m3"] = m3;
  j["mbar"] = mbar;
  j["mbar1"] = mbar1;
  j["omega"] = omega;
  j["t_dwell"] = t_dwell;
  j["gamma_state"] = gamma_state;
  j["gamma_input"] = gamma_input;
  nlohmann::ordered_json prov;
  for (const auto& [k, v] : provenance) prov[k] = v;
  j["provenance"] = prov;
  return j;
}

}  // namespace qpf
