#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace qpf {

namespace {

using njson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("scenario: " + msg);
}

double get_num(const njson& j, const std::string& key, bool required,
               double fallback = std::nan("")) {
  if (!j.contains(key)) {
    if (required) fail("missing field '" + key + "'");
    return fallback;
  }
  if (!j.at(key).is_number()) fail("field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

void check_keys(const njson& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail("unknown field '" + it.key() + "' in " + where);
}

}  // namespace

std::string to_string(backend_kind b) {
  return b == backend_kind::exact ? "exact" : "laxfriedrichs";
}
std::string to_string(controller_kind c) {
  switch (c) {
    case controller_kind::switched: return "switched";
    case controller_kind::nominal_fixed_mu: return "nominal_fixed_mu";
    default: return "open_loop";
  }
}
std::string to_string(quant_mode m) {
  return m == quant_mode::state ? "state" : "input";
}

scenario scenario::from_json(const njson& j) {
  scenario s;
  check_keys(j, {"name", "system", "delay_d_s", "quantizer", "mode",
                 "controller", "fixed_mu", "switching", "decay", "grid",
                 "horizon_s", "backend", "norm", "initial", "pinned_constants",
                 "seed", "divergence_guard"},
             "scenario");
  if (!j.contains("name") || !j.at("name").is_string()) fail("missing 'name'");
  s.name = j.at("name").get<std::string>();
  if (s.name.empty() ||
      s.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                               "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
          std::string::npos)
    fail("'name' must be non-empty and use [A-Za-z0-9_-]");

  if (!j.contains("system")) fail("missing 'system'");
  const njson& sys = j.at("system");
  check_keys(sys, {"a", "b", "k"}, "system");
  if (!sys.contains("a") || !sys.at("a").is_array() || sys.at("a").empty())
    fail("system.a must be a non-empty matrix");
  const size_t n = sys.at("a").size();
  s.a = mat(n, n);
  for (size_t i = 0; i < n; ++i) {
    const njson& row = sys.at("a").at(i);
    if (!row.is_array() || row.size() != n) fail("system.a must be square");
    for (size_t c = 0; c < n; ++c) s.a(i, c) = row.at(c).get<double>();
  }
  if (!sys.contains("b") || sys.at("b").size() != n)
    fail("system.b must have the same dimension as a");
  s.b = vec(n);
  for (size_t i = 0; i < n; ++i) s.b(i) = sys.at("b").at(i).get<double>();
  if (!sys.contains("k") || sys.at("k").size() != n)
    fail("system.k must have the same dimension as a");
  s.k = rowvec(n);
  for (size_t i = 0; i < n; ++i) s.k(i) = sys.at("k").at(i).get<double>();

  s.delay = get_num(j, "delay_d_s", true);

  if (!j.contains("quantizer")) fail("missing 'quantizer'");
  const njson& q = j.at("quantizer");
  check_keys(q, {"range_m", "delta", "component_step"}, "quantizer");
  s.range_m = get_num(q, "range_m", true);
  s.delta = get_num(q, "delta", true);
  s.component_step = get_num(q, "component_step", false, 0.0);

  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "state") s.mode = quant_mode::state;
    else if (m == "input") s.mode = quant_mode::input;
    else fail("mode must be 'state' or 'input'");
  }
  if (j.contains("controller")) {
    const std::string c = j.at("controller").get<std::string>();
    if (c == "switched") s.controller = controller_kind::switched;
    else if (c == "nominal_fixed_mu") s.controller = controller_kind::nominal_fixed_mu;
    else if (c == "open_loop") s.controller = controller_kind::open_loop;
    else fail("controller must be switched|nominal_fixed_mu|open_loop");
  }
  s.fixed_mu = get_num(j, "fixed_mu", false, 1.0);

  if (j.contains("switching")) {
    const njson& sw = j.at("switching");
    check_keys(sw, {"mu0_init", "tau_s", "lambda"}, "switching");
    s.mu0 = get_num(sw, "mu0_init", false, 1.0);
    s.tau = get_num(sw, "tau_s", false);
    s.lambda = get_num(sw, "lambda", false);
  }
  if (j.contains("decay")) {
    const njson& dec = j.at("decay");
    check_keys(dec, {"m_sigma", "sigma_per_s"}, "decay");
    s.m_sigma = get_num(dec, "m_sigma", false);
    s.sigma = get_num(dec, "sigma_per_s", false);
  }

  if (!j.contains("grid")) fail("missing 'grid'");
  const njson& gr = j.at("grid");
  check_keys(gr, {"dt_s", "dx_s"}, "grid");
  s.dt = get_num(gr, "dt_s", true);
  s.dx = get_num(gr, "dx_s", true);
  s.horizon = get_num(j, "horizon_s", true);

  if (j.contains("backend")) {
    const std::string b = j.at("backend").get<std::string>();
    if (b == "exact") s.backend = backend_kind::exact;
    else if (b == "laxfriedrichs") s.backend = backend_kind::lax_friedrichs;
    else fail("backend must be 'exact' or 'laxfriedrichs'");
  }
  if (j.contains("norm")) s.nk = norm_kind_from_string(j.at("norm").get<std::string>());

  if (!j.contains("initial")) fail("missing 'initial'");
  const njson& init = j.at("initial");
  check_keys(init, {"x0", "u0"}, "initial");
  if (!init.contains("x0") || init.at("x0").size() != n)
    fail("initial.x0 must have the plant dimension");
  s.x0 = vec(n);
  for (size_t i = 0; i < n; ++i) s.x0(i) = init.at("x0").at(i).get<double>();
  if (!init.contains("u0")) fail("missing initial.u0");
  const njson& u0 = init.at("u0");
  check_keys(u0, {"kind", "value"}, "initial.u0");
  s.u0_kind = u0.contains("kind") ? u0.at("kind").get<std::string>() : "zero";
  if (s.u0_kind != "zero" && s.u0_kind != "constant")
    fail("initial.u0.kind must be 'zero' or 'constant'");
  s.u0_value = get_num(u0, "value", s.u0_kind == "constant", 0.0);

  if (j.contains("pinned_constants")) {
    static const std::set<std::string> allowed = {
        "m1", "m2", "m3", "mbar", "mbar1", "omega",
        "t_dwell", "m0", "m_sigma", "sigma", "lambda"};
    for (auto it = j.at("pinned_constants").begin();
         it != j.at("pinned_constants").end(); ++it) {
      if (!allowed.count(it.key()))
        fail("unknown pinned constant '" + it.key() + "'");
      s.pinned[it.key()] = it.value().get<double>();
    }
  }
  if (j.contains("seed")) s.seed = j.at("seed").get<long>();
  s.divergence_guard = get_num(j, "divergence_guard", false, 1e12);

  s.validate();
  return s;
}

scenario scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path);
  njson j;
  try {
    j = njson::parse(in);
  } catch (const std::exception& e) {
    fail("JSON parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json scenario::to_json() const {
  njson j;
  j["name"] = name;
  njson sys;
  sys["a"] = njson::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    njson row = njson::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(i, c));
    sys["a"].push_back(row);
  }
  sys["b"] = njson::array();
  for (Eigen::Index i = 0; i < b.size(); ++i) sys["b"].push_back(b(i));
  sys["k"] = njson::array();
  for (Eigen::Index i = 0; i < k.size(); ++i) sys["k"].push_back(k(i));
  j["system"] = sys;
  j["delay_d_s"] = delay;
  njson q;
  q["range_m"] = range_m;
  q["delta"] = delta;
  if (component_step > 0.0) q["component_step"] = component_step;
  j["quantizer"] = q;
  j["mode"] = to_string(mode);
  j["controller"] = to_string(controller);
  if (controller == controller_kind::nominal_fixed_mu) j["fixed_mu"] = fixed_mu;
  njson sw;
  sw["mu0_init"] = mu0;
  if (!std::isnan(tau)) sw["tau_s"] = tau;
  if (!std::isnan(lambda)) sw["lambda"] = lambda;
  j["switching"] = sw;
  if (!std::isnan(m_sigma) || !std::isnan(sigma)) {
    njson dec;
    if (!std::isnan(m_sigma)) dec["m_sigma"] = m_sigma;
    if (!std::isnan(sigma)) dec["sigma_per_s"] = sigma;
    j["decay"] = dec;
  }
  njson gr;
  gr["dt_s"] = dt;
  gr["dx_s"] = dx;
  j["grid"] = gr;
  j["horizon_s"] = horizon;
  j["backend"] = to_string(backend);
  j["norm"] = qpf::to_string(nk);
  njson init;
  init["x0"] = njson::array();
  for (Eigen::Index i = 0; i < x0.size(); ++i) init["x0"].push_back(x0(i));
  njson u0;
  u0["kind"] = u0_kind;
  if (u0_kind == "constant") u0["value"] = u0_value;
  init["u0"] = u0;
  j["initial"] = init;
  if (!pinned.empty()) {
    njson p;
    for (const auto& [key, val] : pinned) p[key] = val;
    j["pinned_constants"] = p;
  }
  j["seed"] = seed;
  if (divergence_guard != 1e12) j["divergence_guard"] = divergence_guard;
  return j;
}

void scenario::validate() const {
  if (!(delay > 0.0)) fail("delay_d_s must be positive");
  if (!(range_m > 0.0)) fail("quantizer.range_m must be positive");
  if (delta < 0.0) fail("quantizer.delta must be non-negative");
  if (component_step < 0.0) fail("quantizer.component_step must be non-negative");
  if (!(mu0 > 0.0)) fail("switching.mu0_init must be positive");
  if (!std::isnan(tau) && !(tau > 0.0)) fail("switching.tau_s must be positive");
  if (!std::isnan(lambda) && !(lambda > 0.0)) fail("switching.lambda must be positive");
  if (!std::isnan(sigma) && !(sigma > 0.0)) fail("decay.sigma_per_s must be positive");
  if (std::isnan(sigma) && !pinned.count("sigma"))
    fail("decay.sigma_per_s is required (or pin 'sigma')");
  if (controller == controller_kind::nominal_fixed_mu && !(fixed_mu > 0.0))
    fail("fixed_mu must be positive");
  validate_grid(delay, dt, dx, horizon);  // positivity, CFL, divisibility
  if (!is_hurwitz(a + b * k))
    fail("system.k must make a + b*k Hurwitz");
}

double scenario::initial_size() const {
  double sup = u0_kind == "constant" ? std::abs(u0_value) : 0.0;
  return vec_norm(x0, nk) + sup;
}

constants_input scenario::to_constants_input() const {
  constants_input in;
  in.a = a;
  in.b = b;
  in.k = k;
  in.delay = delay;
  in.range_m = range_m;
  in.delta = delta;
  in.m_sigma = m_sigma;
  in.sigma = sigma;
  in.lambda = lambda;
  in.mu0 = mu0;
  in.tau = std::isnan(tau) ? 1.0 : tau;  // envelope prefactor needs some tau
  in.nk = nk;
  in.pinned = pinned;
  return in;
}

sim_config scenario::to_sim_config() const {
  return to_sim_config(compute_constants(to_constants_input()));
}

sim_config scenario::to_sim_config(const design_constants& c) const {
  sim_config cfg;
  cfg.a = a;
  cfg.b = b;
  cfg.k = k;
  cfg.delay = delay;
  cfg.dt = dt;
  cfg.dx = dx;
  cfg.horizon = horizon;
  cfg.backend = backend;
  cfg.controller = controller;
  cfg.mode = mode;
  cfg.range_m = range_m;
  cfg.delta = delta;
  cfg.component_step = component_step;
  cfg.fixed_mu = fixed_mu;
  cfg.mu0 = mu0;
  cfg.nk = nk;
  cfg.x0 = x0;
  const double v = u0_kind == "constant" ? u0_value : 0.0;
  cfg.u0 = [v](double) { return v; };
  cfg.consts = c;
  cfg.divergence_guard = divergence_guard;
  if (std::isnan(tau)) {
    switching_params p{mu0,     1.0,   c.omega, c.t_dwell, c.mbar1,
                       c.mbar,  c.m3,  c.n_a,   range_m,   delta};
    const int n = static_cast<int>(x0.size());
    const double cs = component_step > 0.0
                          ? component_step
                          : delta / (1.0 + std::sqrt(double(n)));
    cfg.tau = auto_tau(initial_size(), quantizer{range_m, cs}.mhat(), p);
    // the envelope prefactor depends on tau: recompute with the resolved value
    constants_input in2 = to_constants_input();
    in2.tau = cfg.tau;
    cfg.consts = compute_constants(in2);
  } else {
    cfg.tau = tau;
  }
  return cfg;
}

}  // namespace qpf
