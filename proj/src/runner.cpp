#include "runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "quantizer.hpp"

namespace qpf {

namespace {

using njson = nlohmann::ordered_json;

njson check_to_json(const condition_check& c) {
  njson j;
  j["bound"] = c.bound;
  j["ratio"] = c.ratio;
  j["ok"] = c.ok;
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

run_result run_scenario(const scenario& s) {
  s.validate();
  run_result r;
  r.scn = s;
  const sim_config cfg = s.to_sim_config();
  r.consts = cfg.consts;
  r.tau_used = cfg.tau;
  r.traj = run_simulation(cfg);
  r.cls = classify_baseline(r.traj);
  const kernel_table kt =
      kernel_table::build(cfg.a, cfg.b, cfg.k, cfg.delay,
                          validate_grid(cfg.delay, cfg.dt, cfg.dx, cfg.horizon).nx);
  r.env = check_stability_envelope(r.traj, cfg);
  r.windows = check_window_decay(r.traj, cfg, kt);
  r.t0 = check_t0_bound(r.traj, cfg);
  r.dist = reconstruct_disturbance(r.traj, cfg, kt);
  r.fit_from = 0.5 * cfg.horizon;
  r.tail_rate = fit_decay_rate(r.traj, r.fit_from);
  r.th1 = check_theorem1(cfg.consts, s.delta, s.range_m);
  r.th2 = check_theorem2(cfg.consts, s.delta, s.range_m);
  return r;
}

njson run_result::manifest() const {
  njson j;
  j["scenario"] = scn.to_json();
  j["constants"] = consts.to_json();
  j["tau_used_s"] = tau_used;
  njson checks;
  checks["small_gain"] = njson{{"lhs", consts.small_gain_lhs},
                               {"ok", consts.small_gain_ok}};
  checks["condition_state"] = check_to_json(th1);
  checks["condition_input"] = check_to_json(th2);
  j["checks"] = checks;

  njson run;
  run["backend"] = to_string(scn.backend);
  run["samples"] = traj.samples();
  run["diverged"] = traj.diverged;
  run["t0_detected"] = traj.t0_detected;
  if (traj.t0_detected) {
    run["t0_s"] = traj.t0;
    run["mu_t0"] = traj.mu_t0;
  }
  run["initial_norm"] = traj.initial_norm;
  run["final_norm"] = traj.norm.empty() ? 0.0 : traj.norm.back();
  double peak = 0.0;
  for (double v : traj.norm) peak = std::max(peak, v);
  run["peak_norm"] = peak;
  run["classification"] = to_string(cls);
  run["tail_rate"] = tail_rate;
  run["fit_from_s"] = fit_from;
  j["run"] = run;

  njson an;
  njson env_j;
  env_j["skipped"] = env.skipped;
  if (!env.note.empty()) env_j["note"] = env.note;
  env_j["gamma"] = env.gamma;
  env_j["rate"] = env.rate;
  env_j["max_ratio"] = env.max_ratio;
  env_j["violations"] = env.violations.size();
  env_j["pass"] = env.pass();
  an["envelope"] = env_j;
  njson win_j;
  win_j["applicable"] = windows.applicable;
  win_j["windows"] = windows.windows;
  win_j["worst_ratio"] = windows.worst_ratio;
  win_j["violations"] = windows.violations.size();
  win_j["pass"] = windows.pass();
  an["window_decay"] = win_j;
  njson t0_j;
  t0_j["applicable"] = t0.applicable;
  if (t0.applicable) {
    t0_j["observed_s"] = t0.observed;
    if (std::isfinite(t0.bound)) t0_j["bound_s"] = t0.bound;
    if (!t0.note.empty()) t0_j["note"] = t0.note;
    t0_j["pass"] = t0.pass;
  }
  an["t0_bound"] = t0_j;
  njson d_j;
  d_j["applicable"] = dist.applicable;
  d_j["bound_factor"] = dist.bound_factor;
  d_j["worst_ratio"] = dist.worst_ratio;
  d_j["violations"] = dist.violations;
  d_j["pass"] = dist.pass();
  an["disturbance"] = d_j;
  j["analysis"] = an;
  return j;
}

void write_trace_csv(const run_result& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  const int n = static_cast<int>(r.scn.x0.size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  out << ",U,mu,phase,norm,envelope\n";
  for (size_t i = 0; i < r.traj.samples(); ++i) {
    out << fmt17(r.traj.t[i]);
    for (int c = 0; c < n; ++c) out << ',' << fmt17(r.traj.x[i](c));
    out << ',' << fmt17(r.traj.u_ctrl[i]) << ',' << fmt17(r.traj.mu[i]) << ','
        << r.traj.phase[i] << ',' << fmt17(r.traj.norm[i]) << ','
        << fmt17(r.traj.envelope[i]) << '\n';
  }
}

void write_plot_csv(const run_result& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "t,norm,envelope\n";
  for (size_t i = 0; i < r.traj.samples(); ++i)
    out << fmt17(r.traj.t[i]) << ',' << fmt17(r.traj.norm[i]) << ','
        << fmt17(r.traj.envelope[i]) << '\n';
}

njson verify_report(const scenario& s) {
  s.validate();
  const design_constants c = compute_constants(s.to_constants_input());
  const condition_check th1 = check_theorem1(c, s.delta, s.range_m);
  const condition_check th2 = check_theorem2(c, s.delta, s.range_m);
  const int n = static_cast<int>(s.x0.size());
  const double cs = s.component_step > 0.0
                        ? s.component_step
                        : s.delta / (1.0 + std::sqrt(double(n)));
  const quantizer q_comp{s.range_m, cs};
  const quantizer q_input{s.range_m, s.delta};
  const quantizer_property_report qp_comp =
      validate_properties(q_comp, 100000, -1.25 * s.range_m, 1.25 * s.range_m);
  const quantizer_property_report qp_input =
      validate_properties(q_input, 100000, -1.25 * s.range_m, 1.25 * s.range_m);

  njson j;
  j["scenario"] = s.name;
  j["mode"] = to_string(s.mode);
  j["constants"] = c.to_json();
  njson sg;
  sg["lhs"] = c.small_gain_lhs;
  sg["ok"] = c.small_gain_ok;
  j["small_gain"] = sg;
  j["condition_state"] = check_to_json(th1);
  j["condition_input"] = check_to_json(th2);
  auto qrep = [](const quantizer_property_report& r) {
    njson q;
    q["p1"] = r.p1;
    q["p2"] = r.p2;
    q["p3"] = r.p3;
    q["max_in_range_error"] = r.max_in_range_error;
    q["points"] = r.points;
    q["pass"] = r.pass();
    return q;
  };
  j["quantizer_component"] = qrep(qp_comp);
  j["quantizer_scalar"] = qrep(qp_input);
  const bool mode_condition_ok =
      s.mode == quant_mode::state ? th1.ok : th2.ok;
  j["all_pass"] =
      c.small_gain_ok && mode_condition_ok && qp_comp.pass() && qp_input.pass();
  return j;
}

bool verify_all_pass(const njson& report) {
  return report.contains("all_pass") && report.at("all_pass").get<bool>();
}

njson sweep(const scenario& base, const std::string& param,
            const std::vector<double>& values, int workers) {
  auto apply = [&](scenario s, double v) {
    if (param == "delta") s.delta = v;
    else if (param == "range_m") s.range_m = v;
    else if (param == "delay_d_s") s.delay = v;
    else if (param == "lambda") s.lambda = v;
    else if (param == "tau_s") s.tau = v;
    else if (param == "mu0_init") s.mu0 = v;
    else if (param == "fixed_mu") s.fixed_mu = v;
    else if (param == "horizon_s") s.horizon = v;
    else if (param == "component_step") s.component_step = v;
    else throw std::invalid_argument("sweep: unknown parameter '" + param + "'");
    return s;
  };
  if (!values.empty()) apply(base, values.front());  // surface bad names early

  std::vector<njson> rows(values.size());
  auto work = [&](size_t i) {
    njson row;
    row["value"] = values[i];
    try {
      const run_result r = run_scenario(apply(base, values[i]));
      row["classification"] = to_string(r.cls);
      row["diverged"] = r.traj.diverged;
      row["t0_detected"] = r.traj.t0_detected;
      if (r.traj.t0_detected) row["t0_s"] = r.traj.t0;
      row["final_norm"] = r.traj.norm.empty() ? 0.0 : r.traj.norm.back();
      double peak = 0.0;
      for (double v : r.traj.norm) peak = std::max(peak, v);
      row["peak_norm"] = peak;
      row["lambda"] = r.consts.lambda;
      row["condition_ok"] = r.scn.mode == quant_mode::state ? r.th1.ok : r.th2.ok;
    } catch (const std::exception& e) {
      row["error"] = e.what();
    }
    rows[i] = std::move(row);
  };

  if (workers <= 1 || values.size() <= 1) {
    for (size_t i = 0; i < values.size(); ++i) work(i);
  } else {
    const size_t nthreads = std::min(static_cast<size_t>(workers), values.size());
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t w = 0; w < nthreads; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < values.size();
             i = next.fetch_add(1))
          work(i);
      });
    for (auto& th : pool) th.join();
  }

  njson j;
  j["param"] = param;
  j["count"] = values.size();
  j["runs"] = njson::array();
  for (auto& row : rows) j["runs"].push_back(std::move(row));
  return j;
}

}  // namespace qpf
