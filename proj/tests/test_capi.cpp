#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <qpf/qpf.h>

#include <json.hpp>

using njson = nlohmann::json;

namespace {

const std::string dir = QPF_SCENARIO_DIR;

struct scenario_deleter {
  void operator()(qpf_scenario* s) const { qpf_scenario_free(s); }
};
struct run_deleter {
  void operator()(qpf_run* r) const { qpf_run_free(r); }
};
using scenario_ptr = std::unique_ptr<qpf_scenario, scenario_deleter>;
using run_ptr = std::unique_ptr<qpf_run, run_deleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  qpf_string_free(s);
  return out;
}

scenario_ptr load(const std::string& file) {
  qpf_scenario* s = nullptr;
  REQUIRE(qpf_scenario_from_file((dir + "/" + file).c_str(), &s) == QPF_OK);
  return scenario_ptr(s);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version string") {
  const char* v = qpf_version();
  REQUIRE(v != nullptr);
  CHECK(std::string(v).find('.') != std::string::npos);
}

TEST_CASE("config errors set the thread-local message") {
  qpf_scenario* s = nullptr;
  CHECK(qpf_scenario_from_json("{\"name\": 42}", &s) == QPF_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(qpf_last_error()).size() > 0);

  CHECK(qpf_scenario_from_file("/nonexistent/file.json", &s) == QPF_ERR_CONFIG);
  CHECK(s == nullptr);
}

TEST_CASE("scenario json round trip through the interface") {
  auto s = load("fig2.json");
  char* j1 = nullptr;
  REQUIRE(qpf_scenario_to_json(s.get(), &j1) == QPF_OK);
  const std::string text1 = take(j1);

  qpf_scenario* s2 = nullptr;
  REQUIRE(qpf_scenario_from_json(text1.c_str(), &s2) == QPF_OK);
  scenario_ptr s2p(s2);
  char* j2 = nullptr;
  REQUIRE(qpf_scenario_to_json(s2p.get(), &j2) == QPF_OK);
  CHECK(take(j2) == text1);
}

TEST_CASE("constants endpoint reports pins and checks") {
  auto s = load("fig2.json");
  char* out = nullptr;
  REQUIRE(qpf_scenario_constants_json(s.get(), &out) == QPF_OK);
  const auto j = njson::parse(take(out));
  CHECK(j["m1"] == 4.5);
  CHECK(j["provenance"]["m1"] == "pinned");
  CHECK(j["small_gain_ok"] == true);
  CHECK(j.contains("condition_state"));
  CHECK(j.contains("condition_input"));
}

TEST_CASE("simulating the fixed-zoom baseline classifies as diverged") {
  auto s = load("fig3.json");
  qpf_run* r = nullptr;
  // the run grows past 10x the initial size but never trips the guard,
  // so the call itself succeeds
  REQUIRE(qpf_run_simulate(s.get(), &r) == QPF_OK);
  run_ptr rp(r);
  char* out = nullptr;
  REQUIRE(qpf_run_summary_json(rp.get(), &out) == QPF_OK);
  const auto j = njson::parse(take(out));
  CHECK(j["run"]["classification"] == "diverged");
  CHECK(j["run"]["diverged"] == false);
  CHECK(double(j["run"]["peak_norm"]) > 10.0 * double(j["run"]["initial_norm"]));
}

TEST_CASE("guard trip returns the diverged status with a partial run") {
  // open-loop unstable plant with a tight guard
  auto base = njson::parse(slurp(dir + "/fig2.json"));
  base["name"] = "guard_trip";
  base["controller"] = "open_loop";
  base["horizon_s"] = 30.0;
  base["divergence_guard"] = 1e6;
  qpf_scenario* s = nullptr;
  REQUIRE(qpf_scenario_from_json(base.dump().c_str(), &s) == QPF_OK);
  scenario_ptr sp(s);

  qpf_run* r = nullptr;
  CHECK(qpf_run_simulate(sp.get(), &r) == QPF_ERR_DIVERGED);
  REQUIRE(r != nullptr);
  run_ptr rp(r);
  char* out = nullptr;
  REQUIRE(qpf_run_summary_json(rp.get(), &out) == QPF_OK);
  const auto j = njson::parse(take(out));
  CHECK(j["run"]["diverged"] == true);
  CHECK(j["run"]["classification"] == "diverged");
}

TEST_CASE("backend override") {
  auto s = load("fig2.json");
  qpf_run* r = nullptr;
  REQUIRE(qpf_run_simulate_backend(s.get(), "laxfriedrichs", &r) == QPF_OK);
  run_ptr rp(r);
  char* out = nullptr;
  REQUIRE(qpf_run_summary_json(rp.get(), &out) == QPF_OK);
  CHECK(njson::parse(take(out))["run"]["backend"] == "laxfriedrichs");

  qpf_run* r2 = nullptr;
  CHECK(qpf_run_simulate_backend(s.get(), "spectral", &r2) == QPF_ERR_CONFIG);
  CHECK(r2 == nullptr);
}

TEST_CASE("verification report and strict mode") {
  auto s = load("input_quant.json");
  char* out = nullptr;
  REQUIRE(qpf_verify_json(s.get(), 0, &out) == QPF_OK);
  const auto j = njson::parse(take(out));
  CHECK(j["all_pass"] == true);
  CHECK(j["small_gain"]["ok"] == true);
  CHECK(j["condition_input"]["ok"] == true);
  CHECK(j["quantizer_component"]["pass"] == true);

  // strict mode on a feasible scenario still succeeds
  char* out_strict = nullptr;
  CHECK(qpf_verify_json(s.get(), 1, &out_strict) == QPF_OK);
  qpf_string_free(out_strict);

  // inflate the resolution far past the feasibility condition
  auto bad = njson::parse(slurp(dir + "/input_quant.json"));
  bad["quantizer"]["delta"] = double(bad["quantizer"]["delta"]) * 100.0;
  qpf_scenario* sb = nullptr;
  REQUIRE(qpf_scenario_from_json(bad.dump().c_str(), &sb) == QPF_OK);
  scenario_ptr sbp(sb);

  char* rep = nullptr;
  CHECK(qpf_verify_json(sbp.get(), 0, &rep) == QPF_OK);  // non-strict: report only
  const auto jb = njson::parse(take(rep));
  CHECK(jb["all_pass"] == false);
  CHECK(jb["condition_input"]["ok"] == false);

  char* rep2 = nullptr;
  CHECK(qpf_verify_json(sbp.get(), 1, &rep2) == QPF_ERR_CONDITION);
  REQUIRE(rep2 != nullptr);  // report still produced
  CHECK(njson::parse(take(rep2))["all_pass"] == false);
}

TEST_CASE("csv writers produce deterministic files") {
  auto base = njson::parse(slurp(dir + "/fig2.json"));
  base["name"] = "csv_case";
  base["horizon_s"] = 2.0;
  qpf_scenario* s = nullptr;
  REQUIRE(qpf_scenario_from_json(base.dump().c_str(), &s) == QPF_OK);
  scenario_ptr sp(s);

  auto render = [&](const char* trace, const char* plot) {
    qpf_run* r = nullptr;
    REQUIRE(qpf_run_simulate(sp.get(), &r) == QPF_OK);
    run_ptr rp(r);
    REQUIRE(qpf_run_write_csv(rp.get(), trace) == QPF_OK);
    REQUIRE(qpf_run_write_plot_csv(rp.get(), plot) == QPF_OK);
  };
  render("capi_trace_a.csv", "capi_plot_a.csv");
  render("capi_trace_b.csv", "capi_plot_b.csv");

  const std::string ta = slurp("capi_trace_a.csv");
  CHECK(ta.substr(0, 2) == "t,");
  CHECK(ta.find("norm") != std::string::npos);
  CHECK(ta == slurp("capi_trace_b.csv"));
  CHECK(slurp("capi_plot_a.csv") == slurp("capi_plot_b.csv"));
  CHECK(slurp("capi_plot_a.csv").rfind("t,norm,envelope", 0) == 0);
  std::remove("capi_trace_a.csv");
  std::remove("capi_trace_b.csv");
  std::remove("capi_plot_a.csv");
  std::remove("capi_plot_b.csv");
}

TEST_CASE("sweep merges in input order and is worker-count invariant") {
  auto base = njson::parse(slurp(dir + "/fig2.json"));
  base["name"] = "sweep_case";
  base["horizon_s"] = 2.0;
  qpf_scenario* s = nullptr;
  REQUIRE(qpf_scenario_from_json(base.dump().c_str(), &s) == QPF_OK);
  scenario_ptr sp(s);

  const double values[] = {0.01, 0.02, 0.04};
  char* out1 = nullptr;
  REQUIRE(qpf_sweep_json(sp.get(), "delta", values, 3, 1, &out1) == QPF_OK);
  const std::string text1 = take(out1);
  char* out3 = nullptr;
  REQUIRE(qpf_sweep_json(sp.get(), "delta", values, 3, 3, &out3) == QPF_OK);
  CHECK(take(out3) == text1);

  const auto j = njson::parse(text1);
  REQUIRE(j["runs"].size() == 3);
  CHECK(j["param"] == "delta");
  CHECK(j["runs"][0]["value"] == 0.01);
  CHECK(j["runs"][2]["value"] == 0.04);

  // empty sweep is a success with no rows
  char* oute = nullptr;
  REQUIRE(qpf_sweep_json(sp.get(), "delta", nullptr, 0, 1, &oute) == QPF_OK);
  CHECK(njson::parse(take(oute))["runs"].empty());

  // unknown parameter is a config error
  char* outb = nullptr;
  CHECK(qpf_sweep_json(sp.get(), "warp", values, 3, 1, &outb) == QPF_ERR_CONFIG);
}

}  // TEST_SUITE
