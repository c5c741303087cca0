#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "struct_dae.h"

using json = nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  sdae_string_free(s);
  return out;
}

const sdae_grid model_interval{0.0, 0.0, 101};

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(sdae_status_name(SDAE_OK)) == "ok");
  CHECK(std::string(sdae_status_name(SDAE_ERR_STRUCTURE)) == "structure");
  sdae_model* m = nullptr;
  CHECK(sdae_model_demo("nope", nullptr, &m) == SDAE_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(std::string(sdae_last_error()).find("nope") != std::string::npos);
  CHECK(sdae_model_demo("circuit", nullptr, nullptr) == SDAE_ERR_INVALID_ARGUMENT);
  CHECK(sdae_model_demo("circuit", "{\"RL\": \"x\"}", &m) == SDAE_ERR_PARSE);
  CHECK(sdae_model_parse("{", &m) == SDAE_ERR_PARSE);
  CHECK(sdae_model_load("/nonexistent.json", &m) == SDAE_ERR_INVALID_ARGUMENT);
  CHECK(sdae_check(nullptr, "skew", model_interval, 0, nullptr, nullptr) == SDAE_ERR_INVALID_ARGUMENT);
  sdae_model_free(nullptr);
  sdae_reduced_free(nullptr);
  sdae_trajectory_free(nullptr);
}

TEST_CASE("model handles") {
  sdae_model* m = nullptr;
  REQUIRE(sdae_model_demo("circuit", "{\"L\": 2, \"C1\": 3, \"C2\": 5}", &m) == SDAE_OK);
  size_t n = 0, k = 0;
  double t0 = -1, tf = -1;
  CHECK(sdae_model_info(m, &n, &k, &t0, &tf) == SDAE_OK);
  CHECK(n == 5);
  CHECK(k == 1);
  CHECK(t0 == 0.0);
  CHECK(tf == 10.0);
  const char* name = nullptr;
  CHECK(sdae_model_state_name(m, 0, &name) == SDAE_OK);
  CHECK(std::string(name) == "I");
  CHECK(sdae_model_state_name(m, 5, &name) == SDAE_ERR_INVALID_ARGUMENT);
  std::vector<double> e(25), a(25);
  CHECK(sdae_model_eval(m, 0.5, e.data(), a.data()) == SDAE_OK);
  CHECK(e[0] == 2.0);
  CHECK(e[6] == 3.0);
  CHECK(e[12] == 5.0);
  CHECK(a[1] == -1.0);  // row-major (1,2)

  char* text = nullptr;
  REQUIRE(sdae_model_to_json(m, &text) == SDAE_OK);
  const std::string js = take(text);
  sdae_model* back = nullptr;
  REQUIRE(sdae_model_parse(js.c_str(), &back) == SDAE_OK);
  REQUIRE(sdae_model_to_json(back, &text) == SDAE_OK);
  CHECK(take(text) == js);
  sdae_model_free(back);
  sdae_model_free(m);
}

TEST_CASE("check, factor, canonical") {
  sdae_model* m = nullptr;
  REQUIRE(sdae_model_demo("multibody-skew", nullptr, &m) == SDAE_OK);
  char* r = nullptr;
  int passes = -1;
  REQUIRE(sdae_check(m, "skew", model_interval, 0, &r, &passes) == SDAE_OK);
  json j = json::parse(take(r));
  CHECK(passes == 1);
  CHECK(j["max_residual"] == 0.0);
  REQUIRE(sdae_check(m, "self", model_interval, 1e-10, &r, &passes) == SDAE_OK);
  take(r);
  CHECK(passes == 0);
  REQUIRE(sdae_check(m, "auto", model_interval, 0, &r, &passes) == SDAE_OK);
  CHECK(json::parse(take(r))["classification"] == "skew-adjoint");
  CHECK(sdae_check(m, "sideways", model_interval, 0, &r, &passes) == SDAE_ERR_INVALID_ARGUMENT);
  CHECK(sdae_check(m, "skew", sdae_grid{0, 0, 1}, 0, &r, &passes) == SDAE_ERR_INVALID_ARGUMENT);

  REQUIRE(sdae_factor(m, "sym", "E", model_interval, &r) == SDAE_OK);
  j = json::parse(take(r));
  CHECK(j["rank"] == 4);
  CHECK(j["max_reconstruction_residual"].get<double>() <= 1e-10);

  REQUIRE(sdae_canonical(m, "skew", model_interval, 1e-8, 1, &r, &passes) == SDAE_OK);
  j = json::parse(take(r));
  CHECK(passes == 1);
  CHECK(j["p"].get<int>() + j["q"].get<int>() == j["d"].get<int>());
  CHECK(j["q"] == 0);
  CHECK(j.contains("transform"));
  sdae_model_free(m);
}

TEST_CASE("reduce and simulate the lossless circuit") {
  sdae_model* m = nullptr;
  REQUIRE(sdae_model_demo("circuit", nullptr, &m) == SDAE_OK);
  sdae_reduced* sys = nullptr;
  REQUIRE(sdae_reduce(m, "auto", sdae_grid{0, 0, 11}, &sys) == SDAE_OK);
  size_t dyn = 0, st = 0, in = 0;
  double lie = -1;
  CHECK(sdae_reduced_info(sys, &dyn, &st, &in, &lie) == SDAE_OK);
  CHECK(dyn == 1);
  CHECK(st == 5);
  CHECK(in == 1);
  CHECK(lie == 0.0);
  double x[5] = {1, 0, 0, 0, 0}, z = 0, back[5];
  CHECK(sdae_reduced_project(sys, 0, x, &z) == SDAE_OK);
  double u = 0.5, ud = 2.0;
  CHECK(sdae_reduced_reconstruct(sys, 0, &z, &u, &ud, back) == SDAE_OK);
  CHECK(back[0] == doctest::Approx(1.0));
  CHECK(back[1] == doctest::Approx(-0.5));
  char* r = nullptr;
  REQUIRE(sdae_reduced_to_json(sys, &r) == SDAE_OK);
  CHECK(json::parse(take(r))["certificate"] == "orthogonal");
  sdae_reduced_free(sys);

  sdae_trajectory* tr = nullptr;
  REQUIRE(sdae_simulate(m, "reduced", x, sdae_input{SDAE_INPUT_ZERO, 0}, sdae_grid{0, 10, 2001}, 1, &tr) == SDAE_OK);
  size_t pts = 0, n = 0;
  int has_flow = 0;
  CHECK(sdae_trajectory_info(tr, &pts, &n, &has_flow) == SDAE_OK);
  CHECK(pts == 2001);
  CHECK(has_flow == 1);
  double dev = 0;
  for (size_t k = 0; k < pts; ++k) {
    double t, xs[5], h, fd;
    sdae_trajectory_point(tr, k, &t, xs, &h, &fd);
    dev = std::max(dev, std::abs(xs[0] - 1.0));
  }
  CHECK(dev <= 1e-10);
  REQUIRE(sdae_trajectory_to_csv(tr, &r) == SDAE_OK);
  CHECK(take(r).rfind("t,x_1,x_2,x_3,x_4,x_5,H,flow_defect\n", 0) == 0);
  CHECK(sdae_trajectory_point(tr, pts, nullptr, nullptr, nullptr, nullptr) == SDAE_ERR_INVALID_ARGUMENT);
  CHECK(sdae_dissipation(m, tr, &r, nullptr) == SDAE_OK);
  take(r);
  sdae_trajectory_free(tr);

  CHECK(sdae_simulate(m, "direct", x, sdae_input{SDAE_INPUT_ZERO, 0}, model_interval, 1, &tr) ==
        SDAE_ERR_INVALID_ARGUMENT);
  REQUIRE(sdae_simulate(m, "auto", x, sdae_input{SDAE_INPUT_SINE, 1}, model_interval, 0, &tr) == SDAE_OK);
  CHECK(sdae_dissipation(m, tr, &r, nullptr) == SDAE_ERR_INVALID_ARGUMENT);
  sdae_trajectory_free(tr);
  sdae_model_free(m);
}

TEST_CASE("flow diagnostics") {
  for (const char* name : {"multibody-self", "multibody-skew", "stokes"}) {
    CAPTURE(name);
    sdae_model* m = nullptr;
    REQUIRE(sdae_model_demo(name, nullptr, &m) == SDAE_OK);
    char* r = nullptr;
    double d = -1;
    REQUIRE(sdae_flow(m, "auto", sdae_grid{0, 0, 201}, &r, &d) == SDAE_OK);
    json j = json::parse(take(r));
    CHECK(d <= 1e-10);
    CHECK(j["fundamental"].size() == 201);
    sdae_model_free(m);
  }
}

TEST_CASE("structural failures map to status codes") {
  const char* pair = R"({"type": "pair", "interval": [0, 1],
    "E": {"rows": 2, "cols": 2, "kind": "constant", "data": [[1, 2], [3, 4]]},
    "A": {"rows": 2, "cols": 2, "kind": "constant", "data": [[1, 0], [5, 1]]}})";
  sdae_model* m = nullptr;
  REQUIRE(sdae_model_parse(pair, &m) == SDAE_OK);
  sdae_reduced* sys = nullptr;
  CHECK(sdae_reduce(m, "auto", model_interval, &sys) == SDAE_ERR_STRUCTURE);
  CHECK(sdae_reduce(m, "semidefinite", model_interval, &sys) == SDAE_ERR_STRUCTURE);
  CHECK(sdae_reduce(m, "stokes", model_interval, &sys) == SDAE_ERR_INVALID_ARGUMENT);
  sdae_model_free(m);
}
