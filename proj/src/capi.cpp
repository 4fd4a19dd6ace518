#include "qpf/qpf.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "runner.hpp"

struct qpf_scenario {
  qpf::scenario s;
};

struct qpf_run {
  qpf::run_result r;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(QPF_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(QPF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QPF_ERR_INTERNAL, "unknown error");
  }
}

int emit_json(const nlohmann::ordered_json& j, char** out_json) {
  *out_json = dup_string(j.dump(2));
  return *out_json ? QPF_OK : fail(QPF_ERR_INTERNAL, "out of memory");
}

}  // namespace

extern "C" {

const char* qpf_version(void) { return "1.0.0"; }

const char* qpf_last_error(void) { return g_last_error.c_str(); }

void qpf_string_free(char* s) { std::free(s); }

int qpf_scenario_from_json(const char* json_text, qpf_scenario** out) {
  if (!json_text || !out) return fail(QPF_ERR_CONFIG, "null argument");
  *out = nullptr;
  return guarded([&] {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(json_text);
    } catch (const std::exception& e) {
      return fail(QPF_ERR_CONFIG, std::string("JSON parse error: ") + e.what());
    }
    auto* h = new qpf_scenario{qpf::scenario::from_json(j)};
    *out = h;
    return QPF_OK;
  });
}

int qpf_scenario_from_file(const char* path, qpf_scenario** out) {
  if (!path || !out) return fail(QPF_ERR_CONFIG, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* h = new qpf_scenario{qpf::scenario::load_file(path)};
    *out = h;
    return QPF_OK;
  });
}

void qpf_scenario_free(qpf_scenario* s) { delete s; }

int qpf_scenario_to_json(const qpf_scenario* s, char** out_json) {
  if (!s || !out_json) return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] { return emit_json(s->s.to_json(), out_json); });
}

int qpf_scenario_constants_json(const qpf_scenario* s, char** out_json) {
  if (!s || !out_json) return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] {
    const qpf::design_constants c =
        qpf::compute_constants(s->s.to_constants_input());
    nlohmann::ordered_json j = c.to_json();
    j["condition_state"] =
        nlohmann::ordered_json{{"bound", qpf::check_theorem1(c, s->s.delta, s->s.range_m).bound},
                               {"ok", qpf::check_theorem1(c, s->s.delta, s->s.range_m).ok}};
    j["condition_input"] =
        nlohmann::ordered_json{{"bound", qpf::check_theorem2(c, s->s.delta, s->s.range_m).bound},
                               {"ok", qpf::check_theorem2(c, s->s.delta, s->s.range_m).ok}};
    return emit_json(j, out_json);
  });
}

int qpf_verify_json(const qpf_scenario* s, int strict, char** out_json) {
  if (!s || !out_json) return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] {
    const nlohmann::ordered_json rep = qpf::verify_report(s->s);
    const int code = emit_json(rep, out_json);
    if (code != QPF_OK) return code;
    if (strict && !qpf::verify_all_pass(rep))
      return fail(QPF_ERR_CONDITION, "verification failed in strict mode");
    return QPF_OK;
  });
}

int qpf_run_simulate(const qpf_scenario* s, qpf_run** out) {
  return qpf_run_simulate_backend(s, nullptr, out);
}

int qpf_run_simulate_backend(const qpf_scenario* s, const char* backend,
                             qpf_run** out) {
  if (!s || !out) return fail(QPF_ERR_CONFIG, "null argument");
  *out = nullptr;
  return guarded([&] {
    qpf::scenario scn = s->s;
    if (backend) {
      const std::string b = backend;
      if (b == "exact") scn.backend = qpf::backend_kind::exact;
      else if (b == "laxfriedrichs") scn.backend = qpf::backend_kind::lax_friedrichs;
      else return fail(QPF_ERR_CONFIG, "backend must be 'exact' or 'laxfriedrichs'");
    }
    auto* h = new qpf_run{qpf::run_scenario(scn)};
    *out = h;
    if (h->r.traj.diverged)
      return fail(QPF_ERR_DIVERGED, "divergence guard tripped at t = " +
                                        std::to_string(h->r.traj.t.back()));
    return QPF_OK;
  });
}

void qpf_run_free(qpf_run* r) { delete r; }

int qpf_run_summary_json(const qpf_run* r, char** out_json) {
  if (!r || !out_json) return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] { return emit_json(r->r.manifest(), out_json); });
}

int qpf_run_write_csv(const qpf_run* r, const char* path) {
  if (!r || !path) return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] {
    qpf::write_trace_csv(r->r, path);
    return QPF_OK;
  });
}

int qpf_run_write_plot_csv(const qpf_run* r, const char* path) {
  if (!r || !path) return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] {
    qpf::write_plot_csv(r->r, path);
    return QPF_OK;
  });
}

int qpf_sweep_json(const qpf_scenario* s, const char* param,
                   const double* values, size_t n_values, int workers,
                   char** out_json) {
  if (!s || !param || !out_json || (n_values > 0 && !values))
    return fail(QPF_ERR_CONFIG, "null argument");
  return guarded([&] {
    const std::vector<double> vals(values, values + n_values);
    return emit_json(qpf::sweep(s->s, param, vals, workers), out_json);
  });
}

}  // extern "C"
