#include "struct_dae.h"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "structdae/canonical.hpp"
#include "structdae/factor.hpp"
#include "structdae/flow.hpp"
#include "structdae/io.hpp"
#include "structdae/linalg.hpp"
#include "structdae/models.hpp"
#include "structdae/reduce.hpp"
#include "structdae/structure.hpp"

using namespace structdae;
using json = nlohmann::ordered_json;
using Index = Eigen::Index;

struct sdae_model {
  Model model;
};

struct sdae_reduced {
  ReducedSystem sys;
  std::string pipeline;
  bool canonical_coordinates = false;  // state map returns canonical, not original, coordinates
};

struct sdae_trajectory {
  Trajectory tr;
  std::vector<double> flow;
  std::string mode;
  bool forced = false;
};

namespace {

thread_local std::string last_error;

sdae_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return SDAE_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return SDAE_ERR_DOMAIN;
    case ErrorCode::Dimension: return SDAE_ERR_DIMENSION;
    case ErrorCode::Parse: return SDAE_ERR_PARSE;
    case ErrorCode::Singular: return SDAE_ERR_SINGULAR;
    case ErrorCode::Rank: return SDAE_ERR_RANK;
    case ErrorCode::Structure: return SDAE_ERR_STRUCTURE;
    case ErrorCode::Regularity: return SDAE_ERR_REGULARITY;
    case ErrorCode::Unsupported: return SDAE_ERR_UNSUPPORTED;
    case ErrorCode::Internal: return SDAE_ERR_INTERNAL;
  }
  return SDAE_ERR_INTERNAL;
}

template <class F>
sdae_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return SDAE_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SDAE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SDAE_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string str_or(const char* s, const char* fallback) { return s ? std::string(s) : std::string(fallback); }

TimeGrid to_grid(const Model& m, sdae_grid g) {
  if (g.points < 2) fail(ErrorCode::InvalidArgument, "a grid needs at least 2 points");
  double t0 = g.t0, tf = g.tf;
  if (!(t0 < tf)) t0 = m.pair.interval.t0(), tf = m.pair.interval.tf();
  if (!std::isfinite(t0) || !std::isfinite(tf)) fail(ErrorCode::InvalidArgument, "grid bounds must be finite");
  return TimeGrid::uniform(t0, tf, g.points);
}

json grid_json(const TimeGrid& g) { return {{"t0", g.t0()}, {"tf", g.tf()}, {"points", g.size()}}; }

json rows(const Matrix& m) {
  json r = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    r.push_back(std::move(row));
  }
  return r;
}

json record_json(const ResidualRecord& rec) {
  json out = json::array();
  for (const auto& e : rec.entries)
    out.push_back({{"name", e.name}, {"value", e.value}, {"ok", e.ok}, {"kind", e.defect ? "defect" : "measure"}});
  return out;
}

json structure_json(const StructureReport& r, double tol) {
  return {{"structure", to_string(r.kind_tested)},
          {"e_residual", r.e_residual},
          {"a_residual", r.a_residual},
          {"max_residual", r.max_residual()},
          {"tolerance", tol},
          {"passes", r.passes(tol)}};
}

Adjointness pick_structure(const Model& m, const std::string& s, const TimeGrid& grid) {
  if (s == "self") return Adjointness::SelfAdjoint;
  if (s == "skew") return Adjointness::SkewAdjoint;
  if (s != "auto") fail(ErrorCode::InvalidArgument, "structure must be self, skew or auto");
  auto c = classify(m.pair, grid, default_structure_tolerance(m.pair, grid));
  if (c.value == StructureTag::SelfAdjoint) return Adjointness::SelfAdjoint;
  if (c.value == StructureTag::None) fail(ErrorCode::Structure, "pair is neither self- nor skew-adjoint");
  return Adjointness::SkewAdjoint;
}

bool psd_E(const Model& m, const TimeGrid& grid) {
  const double scale = 1.0 + m.pair.E.eval(grid.t0()).norm();
  for (double t : grid.points()) {
    Matrix e = m.pair.E.eval(t);
    if (e.rows() > 0 && linalg::sym_eig(linalg::sym_part(e)).values(0) < -1e-12 * scale) return false;
  }
  return true;
}

bool damped(const Model& m) {
  auto it = m.params.find("damped");
  return it != m.params.end() && it->second != 0.0;
}

sdae_reduced reduce_model(const Model& m, std::string pipeline, const TimeGrid& grid) {
  if (pipeline == "auto") {
    if (m.stokes && !damped(m))
      pipeline = "stokes";
    else
      pipeline = pick_structure(m, "auto", grid) == Adjointness::SelfAdjoint ? "self" : "semidefinite";
  }
  sdae_reduced out;
  out.pipeline = pipeline;
  if (pipeline == "stokes") {
    if (!m.stokes) fail(ErrorCode::InvalidArgument, "the stokes pipeline needs a Stokes model");
    if (damped(m)) fail(ErrorCode::Structure, "damped Stokes model is not skew-adjoint");
    const auto& s = *m.stokes;
    out.sys = stokes_reduce(s.M, s.B, s.AS, MatrixFunction::identity(s.nv()), grid);
  } else if (pipeline == "semidefinite") {
    out.sys = semidefinite_skew_reduce(m.pair, MatrixFunction::constant(m.input), grid);
  } else if (pipeline == "self") {
    auto basis = solution_basis_constant(m.pair, grid);
    auto form = global_canonical_self(m.pair, basis, grid);
    out.sys = self_adjoint_dynamic_extract(form, grid);
    out.canonical_coordinates = true;
  } else {
    fail(ErrorCode::InvalidArgument, "pipeline must be semidefinite, stokes, self or auto");
  }
  return out;
}

json reduced_json(const sdae_reduced& r) {
  const auto& s = r.sys;
  json rec = json::array();
  for (const auto& a : s.recovery)
    rec.push_back({{"name", a.name}, {"rows", a.X.rows()}, {"derivative_order", a.derivative_order}});
  return {{"pipeline", r.pipeline},
          {"dynamic_dim", s.dynamic_dim},
          {"state_dim", s.state_dim},
          {"inputs", s.inputs},
          {"certificate", to_string(s.certificate.kind)},
          {"certificate_matrix", rows(s.certificate.B)},
          {"lie_defect", s.lie_defect},
          {"max_derivative_order", s.max_derivative_order()},
          {"coordinates", r.canonical_coordinates ? "canonical" : "original"},
          {"recovery", std::move(rec)}};
}

std::optional<MatrixFunction> input_function(sdae_input in, Index m, const TimeGrid& grid) {
  if (in.kind == SDAE_INPUT_ZERO || m == 0) return std::nullopt;
  const Vector ones = Vector::Ones(m);
  if (in.kind == SDAE_INPUT_CONSTANT) return MatrixFunction::constant(Matrix(in.amplitude * ones));
  if (in.kind != SDAE_INPUT_SINE && in.kind != SDAE_INPUT_COSINE) fail(ErrorCode::InvalidArgument, "unknown input kind");
  const bool cosine = in.kind == SDAE_INPUT_COSINE;
  // Hermite tabulation with spacing <= 0.002: interpolation error below 1e-13.
  const auto n = static_cast<std::size_t>(std::ceil((grid.tf() - grid.t0()) / 0.002)) + 1;
  const double a = in.amplitude;
  return tabulate(TimeGrid::uniform(grid.t0(), grid.tf(), std::max<std::size_t>(n, 2)), [&](double t) {
    const double v = cosine ? std::cos(t) : std::sin(t), d = cosine ? -std::sin(t) : std::cos(t);
    return std::pair{Matrix(a * v * ones), Matrix(a * d * ones)};
  });
}

double entry_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

json factor_report(const MatrixFunction& f, const std::string& kind, const TimeGrid& grid) {
  json out{{"kind", kind}, {"grid", grid_json(grid)}};
  std::vector<double> res, jump;
  Matrix prev;
  auto track = [&](const Matrix& basis) {
    if (prev.size() > 0) jump.push_back((basis - prev).norm());
    prev = basis;
  };
  if (kind == "rank") {
    auto s = rank_split(f, grid);
    for (double t : grid.points()) {
      Matrix target = Matrix::Zero(f.rows(), f.cols());
      target.topLeftCorner(s.r, s.r) = s.Sigma.eval(t);
      res.push_back((s.U.eval(t).transpose() * f.eval(t) * s.V.eval(t) - target).norm());
      track(s.U.eval(t));
    }
    out["rank"] = s.r;
  } else if (kind == "sym") {
    auto s = sym_rank_split(f, grid);
    for (double t : grid.points()) {
      Matrix target = Matrix::Zero(f.rows(), f.cols());
      target.topLeftCorner(s.r, s.r) = s.Sigma.eval(t);
      res.push_back((s.Q.eval(t).transpose() * f.eval(t) * s.Q.eval(t) - target).norm());
      track(s.Q.eval(t));
    }
    out["rank"] = s.r;
  } else if (kind == "inertia") {
    auto s = smooth_inertia(f, grid);
    Vector sig(s.p + s.q);
    sig.head(s.p).setOnes();
    sig.tail(s.q).setConstant(-1.0);
    for (double t : grid.points()) {
      res.push_back((s.W.eval(t).transpose() * f.eval(t) * s.W.eval(t) - Matrix(sig.asDiagonal())).norm());
      track(s.W.eval(t));
    }
    out["p"] = s.p;
    out["q"] = s.q;
  } else if (kind == "rownorm") {
    auto s = row_rank_normalize(f, grid);
    for (double t : grid.points()) {
      Matrix target = Matrix::Zero(f.rows(), f.cols());
      target.topRows(f.cols()) = s.B1.eval(t);
      res.push_back((s.U.eval(t).transpose() * f.eval(t) - target).norm());
      track(s.U.eval(t));
    }
  } else {
    fail(ErrorCode::InvalidArgument, "factor kind must be rank, sym, inertia or rownorm");
  }
  out["max_reconstruction_residual"] = entry_max(res);
  out["max_continuity_jump"] = entry_max(jump);
  return out;
}

}  // namespace

extern "C" {

const char* sdae_version(void) { return "1.0.0"; }

const char* sdae_status_name(sdae_status s) {
  switch (s) {
    case SDAE_OK: return "ok";
    case SDAE_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SDAE_ERR_DOMAIN: return "domain";
    case SDAE_ERR_DIMENSION: return "dimension";
    case SDAE_ERR_PARSE: return "parse";
    case SDAE_ERR_SINGULAR: return "singular";
    case SDAE_ERR_RANK: return "rank";
    case SDAE_ERR_STRUCTURE: return "structure";
    case SDAE_ERR_REGULARITY: return "regularity";
    case SDAE_ERR_UNSUPPORTED: return "unsupported";
    case SDAE_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* sdae_last_error(void) { return last_error.c_str(); }

void sdae_string_free(char* s) { std::free(s); }

sdae_status sdae_model_demo(const char* name, const char* params_json, sdae_model** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    std::map<std::string, double> params;
    if (params_json) {
      json j;
      try {
        j = json::parse(params_json);
      } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, std::string("malformed parameter JSON: ") + e.what());
      }
      if (!j.is_object()) fail(ErrorCode::Parse, "parameters must be a JSON object");
      for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) fail(ErrorCode::Parse, "field 'params." + k + "': expected a number");
        params[k] = v.get<double>();
      }
    }
    *out = new sdae_model{demo_model(name, params)};
  });
}

sdae_status sdae_model_parse(const char* text, sdae_model** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = new sdae_model{model_from_json(text)};
  });
}

sdae_status sdae_model_load(const char* path, sdae_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sdae_model{load_model(path)};
  });
}

sdae_status sdae_model_save(const sdae_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    save_model(model->model, path);
  });
}

sdae_status sdae_model_to_json(const sdae_model* model, char** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = dup(model_to_json(model->model));
  });
}

sdae_status sdae_model_info(const sdae_model* model, size_t* n, size_t* inputs, double* t0, double* tf) {
  return guarded([&] {
    need(model, "model");
    const Model& m = model->model;
    if (n) *n = static_cast<size_t>(m.pair.dim());
    if (inputs) *inputs = static_cast<size_t>(m.input.cols());
    if (t0) *t0 = m.pair.interval.t0();
    if (tf) *tf = m.pair.interval.tf();
  });
}

sdae_status sdae_model_state_name(const sdae_model* model, size_t i, const char** name) {
  return guarded([&] {
    need(model, "model");
    need(name, "name");
    if (i >= model->model.state_names.size()) fail(ErrorCode::InvalidArgument, "state index out of range");
    *name = model->model.state_names[i].c_str();
  });
}

sdae_status sdae_model_eval(const sdae_model* model, double t, double* e, double* a) {
  return guarded([&] {
    need(model, "model");
    using RowMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    const Index n = model->model.pair.dim();
    if (e) RowMap(e, n, n) = model->model.pair.E.eval(t);
    if (a) RowMap(a, n, n) = model->model.pair.A.eval(t);
  });
}

void sdae_model_free(sdae_model* model) { delete model; }

sdae_status sdae_check(const sdae_model* model, const char* structure, sdae_grid grid, double tol, char** report,
                       int* passes) {
  return guarded([&] {
    need(model, "model");
    need(report, "report");
    const Model& m = model->model;
    const TimeGrid g = to_grid(m, grid);
    const double t = tol > 0 ? tol : default_structure_tolerance(m.pair, g);
    const std::string s = str_or(structure, "auto");
    json out;
    bool ok = false;
    if (s == "auto") {
      auto c = classify(m.pair, g, t);
      ok = c.value != StructureTag::None;
      out = {{"structure", "auto"},
             {"classification", to_string(c.value)},
             {"tolerance", t},
             {"passes", ok},
             {"self", structure_json(c.self_report, t)},
             {"skew", structure_json(c.skew_report, t)}};
    } else {
      auto kind = pick_structure(m, s, g);
      auto r = adjoint_residual(m.pair, g, kind);
      ok = r.passes(t);
      out = structure_json(r, t);
    }
    out["model"] = m.name;
    out["grid"] = grid_json(g);
    if (passes) *passes = ok ? 1 : 0;
    *report = dup(out.dump(2) + "\n");
  });
}

sdae_status sdae_factor(const sdae_model* model, const char* kind, const char* of, sdae_grid grid, char** report) {
  return guarded([&] {
    need(model, "model");
    need(report, "report");
    const Model& m = model->model;
    const TimeGrid g = to_grid(m, grid);
    const std::string which = str_or(of, "E");
    MatrixFunction f;
    if (which == "E")
      f = m.pair.E;
    else if (which == "A")
      f = m.pair.A;
    else if (which == "input")
      f = MatrixFunction::constant(m.input);
    else
      fail(ErrorCode::InvalidArgument, "factor target must be E, A or input");
    json out = factor_report(f, str_or(kind, "rank"), g);
    out["of"] = which;
    out["model"] = m.name;
    *report = dup(out.dump(2) + "\n");
  });
}

sdae_status sdae_canonical(const sdae_model* model, const char* structure, sdae_grid grid, double tol,
                           int with_transform, char** report, int* passes) {
  return guarded([&] {
    need(model, "model");
    need(report, "report");
    const Model& m = model->model;
    const TimeGrid g = to_grid(m, grid);
    const double t = tol > 0 ? tol : 1e-8;
    const auto kind = pick_structure(m, str_or(structure, "auto"), g);
    auto basis = solution_basis_constant(m.pair, g);
    json out{{"model", m.name}, {"structure", to_string(kind)}, {"grid", grid_json(g)}, {"d", basis.d}};
    ResidualRecord rec;
    const CongruenceTransform* q = nullptr;
    SelfAdjointGlobalForm sf;
    SkewAdjointGlobalForm kf;
    if (kind == Adjointness::SelfAdjoint) {
      sf = global_canonical_self(m.pair, basis, g);
      rec = verify_self_global_form(sf, g, t);
      out["p"] = sf.p;
      out["algebraic"] = sf.algebraic;
      out["stages"] = record_json(sf.stages);
      q = &sf.Q;
    } else {
      kf = global_canonical_skew(m.pair, basis, g);
      rec = verify_skew_global_form(kf, g, t);
      out["p"] = kf.p;
      out["q"] = kf.q;
      out["algebraic"] = kf.algebraic;
      out["stages"] = record_json(kf.stages);
      q = &kf.Q;
    }
    out["tolerance"] = t;
    out["max_defect"] = rec.max_defect();
    out["passes"] = rec.passes();
    out["residuals"] = record_json(rec);
    if (with_transform) out["transform"] = json::parse(matfun_to_json(q->Q));
    if (passes) *passes = rec.passes() ? 1 : 0;
    *report = dup(out.dump(2) + "\n");
  });
}

sdae_status sdae_reduce(const sdae_model* model, const char* pipeline, sdae_grid grid, sdae_reduced** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    const TimeGrid g = to_grid(model->model, grid);
    *out = new sdae_reduced(reduce_model(model->model, str_or(pipeline, "auto"), g));
  });
}

sdae_status sdae_reduced_to_json(const sdae_reduced* sys, char** out) {
  return guarded([&] {
    need(sys, "system");
    need(out, "out");
    *out = dup(reduced_json(*sys).dump(2) + "\n");
  });
}

sdae_status sdae_reduced_info(const sdae_reduced* sys, size_t* dynamic_dim, size_t* state_dim, size_t* inputs,
                              double* lie) {
  return guarded([&] {
    need(sys, "system");
    if (dynamic_dim) *dynamic_dim = static_cast<size_t>(sys->sys.dynamic_dim);
    if (state_dim) *state_dim = static_cast<size_t>(sys->sys.state_dim);
    if (inputs) *inputs = static_cast<size_t>(sys->sys.inputs);
    if (lie) *lie = sys->sys.lie_defect;
  });
}

sdae_status sdae_reduced_project(const sdae_reduced* sys, double t, const double* x, double* z) {
  return guarded([&] {
    need(sys, "system");
    need(x, "x");
    need(z, "z");
    const auto& s = sys->sys;
    Vector::Map(z, s.dynamic_dim) = s.projection.eval(t) * Vector::Map(x, s.state_dim);
  });
}

sdae_status sdae_reduced_reconstruct(const sdae_reduced* sys, double t, const double* z, const double* u,
                                     const double* udot, double* x) {
  return guarded([&] {
    need(sys, "system");
    need(z, "z");
    need(x, "x");
    const auto& s = sys->sys;
    Vector uu = u ? Vector(Vector::Map(u, s.inputs)) : Vector::Zero(s.inputs);
    Vector ud = udot ? Vector(Vector::Map(udot, s.inputs)) : Vector::Zero(s.inputs);
    Vector::Map(x, s.state_dim) = s.reconstruct(t, Vector::Map(z, s.dynamic_dim), uu, ud);
  });
}

void sdae_reduced_free(sdae_reduced* sys) { delete sys; }

sdae_status sdae_flow(const sdae_model* model, const char* structure, sdae_grid grid, char** report,
                      double* max_defect) {
  return guarded([&] {
    need(model, "model");
    need(report, "report");
    const Model& m = model->model;
    const TimeGrid g = to_grid(m, grid);
    const auto kind = pick_structure(m, str_or(structure, "auto"), g);
    MatrixFunction dyn;
    Certificate cert;
    std::string pipeline;
    if (kind == Adjointness::SelfAdjoint) {
      auto r = reduce_model(m, "self", g);
      dyn = r.sys.M, cert = r.sys.certificate, pipeline = r.pipeline;
    } else if (psd_E(m, g)) {
      auto r = reduce_model(m, m.stokes && !damped(m) ? "stokes" : "semidefinite", g);
      dyn = r.sys.M, cert = r.sys.certificate, pipeline = r.pipeline;
    } else {
      // Indefinite E: the dynamic block of the global form is x' = 0 with signature S.
      auto basis = solution_basis_constant(m.pair, g);
      auto form = global_canonical_skew(m.pair, basis, g);
      const Index k = form.p + form.q;
      Vector sig(k);
      sig.head(form.p).setOnes();
      sig.tail(form.q).setConstant(-1.0);
      dyn = MatrixFunction::zero(k, k);
      cert = form.q == 0 ? Certificate::orthogonal(k) : Certificate::indefinite_orthogonal(Matrix(sig.asDiagonal()));
      pipeline = "skew-global";
    }
    auto diag = flow_diagnostics(dyn, cert, g);
    json phi = json::array();
    for (const Matrix& p : diag.fundamental) phi.push_back(rows(p));
    json out{{"model", m.name},
             {"structure", to_string(kind)},
             {"pipeline", pipeline},
             {"certificate", to_string(cert.kind)},
             {"certificate_matrix", rows(cert.B)},
             {"dynamic_dim", dyn.rows()},
             {"grid", grid_json(g)},
             {"max_defect", diag.max_defect},
             {"fundamental", std::move(phi)}};
    if (max_defect) *max_defect = diag.max_defect;
    *report = dup(out.dump(2) + "\n");
  });
}

sdae_status sdae_simulate(const sdae_model* model, const char* mode, const double* x0, sdae_input input,
                          sdae_grid grid, int with_flow, sdae_trajectory** out) {
  return guarded([&] {
    need(model, "model");
    need(x0, "x0");
    need(out, "out");
    const Model& m = model->model;
    const TimeGrid g = to_grid(m, grid);
    const Index n = m.pair.dim();
    const Vector x = Vector::Map(x0, n);
    std::string md = str_or(mode, "auto");
    if (md == "auto") {
      const bool skew = skew_adjoint_residual(m.pair, g).max_residual() <= default_structure_tolerance(m.pair, g);
      md = skew && psd_E(m, g) ? "reduced" : "direct";
    }
    auto res = std::make_unique<sdae_trajectory>();
    res->mode = md;
    res->forced = input.kind != SDAE_INPUT_ZERO && input.amplitude != 0.0;
    if (md == "reduced") {
      sdae_reduced r = reduce_model(m, m.stokes && !damped(m) ? "stokes" : "semidefinite", g);
      const auto u = input_function(input, r.sys.inputs, g);
      Vector z0 = r.sys.projection.eval(g.t0()) * x;
      res->tr = integrate_reduced(r.sys, z0, g, u);
      if (with_flow) {
        for (const Matrix& p : fundamental_solution(r.sys.M, g))
          res->flow.push_back((p.transpose() * r.sys.certificate.B * p - r.sys.certificate.B).norm());
      }
    } else if (md == "direct") {
      if (with_flow) fail(ErrorCode::InvalidArgument, "flow defects need the reduced mode");
      const auto u = input_function(input, m.input.cols(), g);
      res->tr = integrate_dae(m.pair, x, MatrixFunction::constant(m.input), g, u);
    } else {
      fail(ErrorCode::InvalidArgument, "mode must be reduced, direct or auto");
    }
    *out = res.release();
  });
}

sdae_status sdae_trajectory_info(const sdae_trajectory* tr, size_t* points, size_t* n, int* has_flow) {
  return guarded([&] {
    need(tr, "trajectory");
    if (points) *points = tr->tr.states.size();
    if (n) *n = tr->tr.states.empty() ? 0 : static_cast<size_t>(tr->tr.states.front().size());
    if (has_flow) *has_flow = tr->flow.empty() ? 0 : 1;
  });
}

sdae_status sdae_trajectory_point(const sdae_trajectory* tr, size_t k, double* t, double* x, double* h,
                                  double* flow_defect) {
  return guarded([&] {
    need(tr, "trajectory");
    if (k >= tr->tr.states.size()) fail(ErrorCode::InvalidArgument, "point index out of range");
    if (t) *t = tr->tr.grid[k];
    if (x) Vector::Map(x, tr->tr.states[k].size()) = tr->tr.states[k];
    if (h) *h = tr->tr.hamiltonian[k];
    if (flow_defect) *flow_defect = tr->flow.empty() ? 0.0 : tr->flow[k];
  });
}

sdae_status sdae_trajectory_to_csv(const sdae_trajectory* tr, char** out) {
  return guarded([&] {
    need(tr, "trajectory");
    need(out, "out");
    const auto& t = tr->tr;
    const Index n = t.states.empty() ? 0 : t.states.front().size();
    std::string csv = "t";
    for (Index i = 0; i < n; ++i) csv += ",x_" + std::to_string(i + 1);
    csv += ",H";
    if (!tr->flow.empty()) csv += ",flow_defect";
    csv += "\n";
    char buf[32];
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      csv += buf;
    };
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      put(t.grid[k]);
      for (Index i = 0; i < n; ++i) csv += ',', put(t.states[k](i));
      csv += ',', put(t.hamiltonian[k]);
      if (!tr->flow.empty()) csv += ',', put(tr->flow[k]);
      csv += "\n";
    }
    *out = dup(csv);
  });
}

sdae_status sdae_dissipation(const sdae_model* model, const sdae_trajectory* tr, char** report, int* ok) {
  return guarded([&] {
    need(model, "model");
    need(tr, "trajectory");
    need(report, "report");
    if (!model->model.phdae) fail(ErrorCode::InvalidArgument, "dissipation needs a port-Hamiltonian model");
    if (tr->forced) fail(ErrorCode::InvalidArgument, "dissipation is monitored for u = 0 only");
    auto r = dissipation_monitor(*model->model.phdae, tr->tr);
    json out{{"model", model->model.name},
             {"ok", r.ok},
             {"max_violation", r.max_violation},
             {"strictly_decreasing", r.strictly_decreasing},
             {"H_initial", r.hamiltonian.front()},
             {"H_final", r.hamiltonian.back()},
             {"hamiltonian", r.hamiltonian}};
    if (ok) *ok = r.ok ? 1 : 0;
    *report = dup(out.dump(2) + "\n");
  });
}

void sdae_trajectory_free(sdae_trajectory* tr) { delete tr; }

}  // extern "C"
