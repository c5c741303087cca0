// struct-dae: command-line front end over the C API.
//
// Exit codes: 0 success, 1 structure check or numerical failure, 2 bad input
// or usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "struct_dae.h"

namespace {

struct Failure {
  sdae_status status;
  std::string message;
};

int exit_code(sdae_status s) {
  switch (s) {
    case SDAE_OK: return 0;
    case SDAE_ERR_INVALID_ARGUMENT:
    case SDAE_ERR_DOMAIN:
    case SDAE_ERR_DIMENSION:
    case SDAE_ERR_PARSE: return 2;
    default: return 1;
  }
}

void check(sdae_status s) {
  if (s != SDAE_OK) throw Failure{s, sdae_last_error()};
}

// Owns a char* returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { sdae_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ModelHandle {
  sdae_model* p = nullptr;
  ~ModelHandle() { sdae_model_free(p); }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Failure{SDAE_ERR_INVALID_ARGUMENT, "cannot write '" + out + "'"};
  f << text;
}

struct Common {
  std::string model, out;
  std::size_t grid = 201;
  double t0 = 0.0, tf = 0.0;
};

void add_common(CLI::App* sub, Common& c, std::size_t default_grid) {
  c.grid = default_grid;
  sub->add_option("--model", c.model, "model JSON file")->required();
  sub->add_option("--grid", c.grid, "number of grid points")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  sub->add_option("--t0", c.t0, "grid start (default: model interval)");
  sub->add_option("--tf", c.tf, "grid end (default: model interval)");
  sub->add_option("--out", c.out, "output file (default: stdout)");
}

sdae_grid grid_of(const Common& c) { return {c.t0, c.tf, c.grid}; }

void load(ModelHandle& m, const std::string& path) { check(sdae_model_load(path.c_str(), &m.p)); }

std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{SDAE_ERR_INVALID_ARGUMENT, "--x0: '" + item + "' is not a number"};
    }
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured DAE toolkit: structure checks, canonical forms, reduction and simulation"};
  app.require_subcommand(1);

  Common ck, fc, cn, rd, fl, sm;
  std::string structure = "auto", kind = "rank", of = "E", pipeline = "auto", mode = "auto", input = "zero";
  double tol = 0.0, amplitude = 1.0;
  bool transform = false, flow_defect = false;
  std::string x0s, dissipation_out;

  auto* c_check = app.add_subcommand("check", "adjointness residuals of a pair");
  add_common(c_check, ck, 401);
  c_check->add_option("--structure", structure, "self, skew or auto")->check(CLI::IsMember({"self", "skew", "auto"}));
  c_check->add_option("--tol", tol, "residual tolerance (default relative 1e-10)")->check(CLI::PositiveNumber);

  auto* c_factor = app.add_subcommand("factor", "smooth factorizations of E, A or the input map");
  add_common(c_factor, fc, 201);
  c_factor->add_option("--kind", kind, "rank, sym, inertia or rownorm")
      ->check(CLI::IsMember({"rank", "sym", "inertia", "rownorm"}));
  c_factor->add_option("--of", of, "E, A or input")->check(CLI::IsMember({"E", "A", "input"}));

  auto* c_canon = app.add_subcommand("canonical", "global canonical form of a constant pair");
  add_common(c_canon, cn, 201);
  c_canon->add_option("--structure", structure, "self, skew or auto")->check(CLI::IsMember({"self", "skew", "auto"}));
  c_canon->add_option("--tol", tol, "verifier tolerance (default 1e-8)")->check(CLI::PositiveNumber);
  c_canon->add_flag("--transform", transform, "include the congruence transform");

  auto* c_reduce = app.add_subcommand("reduce", "dynamic core and recovery maps");
  add_common(c_reduce, rd, 201);
  c_reduce->add_option("--pipeline", pipeline, "semidefinite, stokes, self or auto")
      ->check(CLI::IsMember({"semidefinite", "stokes", "self", "auto"}));

  auto* c_flow = app.add_subcommand("flow", "fundamental solution and group defect of the dynamic part");
  add_common(c_flow, fl, 2001);
  c_flow->add_option("--structure", structure, "self, skew or auto")->check(CLI::IsMember({"self", "skew", "auto"}));

  auto* c_sim = app.add_subcommand("simulate", "implicit-midpoint simulation to CSV");
  std::size_t steps = 2000;
  c_sim->add_option("--model", sm.model, "model JSON file")->required();
  c_sim->add_option("--t0", sm.t0, "start time (default: model interval)");
  c_sim->add_option("--tf", sm.tf, "end time (default: model interval)");
  c_sim->add_option("--steps", steps, "number of steps")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  c_sim->add_option("--out", sm.out, "CSV output file (default: stdout)");
  c_sim->add_option("--x0", x0s, "initial state, comma separated (default: zero)");
  c_sim->add_option("--mode", mode, "reduced, direct or auto")->check(CLI::IsMember({"reduced", "direct", "auto"}));
  c_sim->add_option("--input", input, "zero, const, sin or cos")->check(CLI::IsMember({"zero", "const", "sin", "cos"}));
  c_sim->add_option("--amplitude", amplitude, "input amplitude");
  c_sim->add_flag("--flow-defect", flow_defect, "add the flow defect column");
  c_sim->add_option("--dissipation", dissipation_out, "write the dissipation report (JSON) here");

  auto* c_demo = app.add_subcommand("demo", "write a demo model");
  std::string demo_name, demo_out, params_json;
  std::map<std::string, double> demo_params;
  c_demo->add_option("name", demo_name, "circuit, circuit-canonical, stokes, multibody, multibody-self, "
                                        "multibody-skew or ocp")
      ->required();
  c_demo->add_option("--out", demo_out, "output file (default: stdout)");
  c_demo->add_option("--params", params_json, "parameters as a JSON object");
  std::map<std::string, std::optional<double>> named;
  for (const char* k : {"L", "C1", "C2", "RL", "RG", "RR", "nv", "np", "seed", "damped", "n", "form", "t0", "tf"})
    c_demo->add_option(std::string("--") + k, named[k], std::string("parameter ") + k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_demo) {
      nlohmann::json params = nlohmann::json::object();
      if (!params_json.empty()) {
        try {
          params = nlohmann::json::parse(params_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw Failure{SDAE_ERR_PARSE, std::string("--params: ") + e.what()};
        }
        if (!params.is_object()) throw Failure{SDAE_ERR_PARSE, "--params must be a JSON object"};
      }
      for (const auto& [k, v] : named)
        if (v) params[k] = *v;  // named flags win
      ModelHandle m;
      check(sdae_model_demo(demo_name.c_str(), params.dump().c_str(), &m.p));
      Text t;
      check(sdae_model_to_json(m.p, &t.p));
      emit(t.str(), demo_out);
      return 0;
    }
    if (*c_check) {
      ModelHandle m;
      load(m, ck.model);
      Text r;
      int passes = 0;
      check(sdae_check(m.p, structure.c_str(), grid_of(ck), tol, &r.p, &passes));
      emit(r.str(), ck.out);
      return passes ? 0 : 1;
    }
    if (*c_factor) {
      ModelHandle m;
      load(m, fc.model);
      Text r;
      check(sdae_factor(m.p, kind.c_str(), of.c_str(), grid_of(fc), &r.p));
      emit(r.str(), fc.out);
      return 0;
    }
    if (*c_canon) {
      ModelHandle m;
      load(m, cn.model);
      Text r;
      int passes = 0;
      check(sdae_canonical(m.p, structure.c_str(), grid_of(cn), tol, transform ? 1 : 0, &r.p, &passes));
      emit(r.str(), cn.out);
      return passes ? 0 : 1;
    }
    if (*c_reduce) {
      ModelHandle m;
      load(m, rd.model);
      sdae_reduced* sys = nullptr;
      check(sdae_reduce(m.p, pipeline.c_str(), grid_of(rd), &sys));
      Text r;
      const sdae_status s = sdae_reduced_to_json(sys, &r.p);
      sdae_reduced_free(sys);
      check(s);
      emit(r.str(), rd.out);
      return 0;
    }
    if (*c_flow) {
      ModelHandle m;
      load(m, fl.model);
      Text r;
      check(sdae_flow(m.p, structure.c_str(), grid_of(fl), &r.p, nullptr));
      emit(r.str(), fl.out);
      return 0;
    }
    if (*c_sim) {
      ModelHandle m;
      load(m, sm.model);
      std::size_t n = 0;
      check(sdae_model_info(m.p, &n, nullptr, nullptr, nullptr));
      std::vector<double> x0 = x0s.empty() ? std::vector<double>(n, 0.0) : parse_vector(x0s);
      if (x0.size() != n)
        throw Failure{SDAE_ERR_DIMENSION, "--x0 has " + std::to_string(x0.size()) + " entries, the model has " +
                                              std::to_string(n)};
      sdae_input in{SDAE_INPUT_ZERO, amplitude};
      if (input == "const") in.kind = SDAE_INPUT_CONSTANT;
      if (input == "sin") in.kind = SDAE_INPUT_SINE;
      if (input == "cos") in.kind = SDAE_INPUT_COSINE;
      sdae_trajectory* tr = nullptr;
      check(sdae_simulate(m.p, mode.c_str(), x0.data(), in, {sm.t0, sm.tf, steps + 1}, flow_defect ? 1 : 0, &tr));
      Text csv, diss;
      sdae_status s = sdae_trajectory_to_csv(tr, &csv.p);
      int ok = 1;
      if (s == SDAE_OK && !dissipation_out.empty()) s = sdae_dissipation(m.p, tr, &diss.p, &ok);
      sdae_trajectory_free(tr);
      check(s);
      emit(csv.str(), sm.out);
      if (!dissipation_out.empty()) emit(diss.str(), dissipation_out);
      return ok ? 0 : 1;
    }
  } catch (const Failure& f) {
    std::cerr << "struct-dae: " << sdae_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  }
  return 2;
}
