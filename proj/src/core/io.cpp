#include "structdae/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace structdae {

namespace {

using json = nlohmann::ordered_json;
using Index = Eigen::Index;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::Parse, "field '" + path + "': " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

Index count(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) bad(path, "expected a nonnegative integer");
  const auto v = j.get<long long>();
  if (v < 0) bad(path, "expected a nonnegative integer");
  return static_cast<Index>(v);
}

const json& array(const json& j, const std::string& path, std::size_t size) {
  if (!j.is_array()) bad(path, "expected an array");
  if (j.size() != size) bad(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(std::move(r));
  }
  return rows;
}

json flat(const Matrix& m) {
  json r = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
  return r;
}

Matrix matrix_from_rows(const json& j, Index rows, Index cols, const std::string& path) {
  array(j, path, static_cast<std::size_t>(rows));
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const std::string p = join(path, static_cast<std::size_t>(i));
    const json& r = array(j[i], p, static_cast<std::size_t>(cols));
    for (Index k = 0; k < cols; ++k) m(i, k) = number(r[k], join(p, static_cast<std::size_t>(k)));
  }
  return m;
}

Matrix matrix_from_flat(const json& j, Index rows, Index cols, const std::string& path) {
  array(j, path, static_cast<std::size_t>(rows * cols));
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k)
      m(i, k) = number(j[i * cols + k], join(path, static_cast<std::size_t>(i * cols + k)));
  return m;
}

// Plain matrix as {"rows", "cols", "data": nested rows}.
json plain_to(const Matrix& m) { return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", matrix_rows(m)}}; }

Matrix plain_from(const json& j, const std::string& path) {
  const Index r = count(field(j, "rows", path), join(path, "rows"));
  const Index c = count(field(j, "cols", path), join(path, "cols"));
  return matrix_from_rows(field(j, "data", path), r, c, join(path, "data"));
}

json matfun_to(const MatrixFunction& f) {
  json j{{"rows", f.rows()}, {"cols", f.cols()}};
  switch (f.kind()) {
    case MatrixFunction::Kind::Constant:
      j["kind"] = "constant";
      j["data"] = matrix_rows(f.constant_value());
      break;
    case MatrixFunction::Kind::Polynomial: {
      j["kind"] = "poly";
      json rows = json::array();
      const auto& c = f.coefficients();
      for (Index i = 0; i < f.rows(); ++i) {
        json r = json::array();
        for (Index k = 0; k < f.cols(); ++k) r.push_back(c[i * f.cols() + k]);
        rows.push_back(std::move(r));
      }
      j["data"] = std::move(rows);
      break;
    }
    case MatrixFunction::Kind::Sampled: {
      j["kind"] = "samples";
      json d{{"grid", json::array()}, {"values", json::array()}, {"order", f.order()}};
      for (double t : f.grid()->points()) d["grid"].push_back(t);
      for (const Matrix& v : f.node_values()) d["values"].push_back(flat(v));
      if (f.has_explicit_derivatives()) {
        d["derivatives"] = json::array();
        for (const Matrix& v : f.node_derivatives()) d["derivatives"].push_back(flat(v));
      }
      j["data"] = std::move(d);
      break;
    }
  }
  return j;
}

MatrixFunction matfun_from(const json& j, const std::string& path) {
  const Index r = count(field(j, "rows", path), join(path, "rows"));
  const Index c = count(field(j, "cols", path), join(path, "cols"));
  const json& kind = field(j, "kind", path);
  const json& data = field(j, "data", path);
  const std::string dp = join(path, "data");
  if (!kind.is_string()) bad(join(path, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "constant") return MatrixFunction::constant(matrix_from_rows(data, r, c, dp));
  if (k == "poly") {
    array(data, dp, static_cast<std::size_t>(r));
    std::vector<std::vector<double>> coeffs;
    for (Index i = 0; i < r; ++i) {
      const std::string rp = join(dp, static_cast<std::size_t>(i));
      array(data[i], rp, static_cast<std::size_t>(c));
      for (Index q = 0; q < c; ++q) {
        const std::string ep = join(rp, static_cast<std::size_t>(q));
        const json& e = data[i][q];
        if (!e.is_array()) bad(ep, "expected a coefficient array");
        std::vector<double> v;
        for (std::size_t d = 0; d < e.size(); ++d) v.push_back(number(e[d], join(ep, d)));
        coeffs.push_back(std::move(v));
      }
    }
    return MatrixFunction::polynomial(r, c, std::move(coeffs));
  }
  if (k == "samples") {
    const json& g = field(data, "grid", dp);
    if (!g.is_array()) bad(join(dp, "grid"), "expected an array");
    std::vector<double> pts;
    for (std::size_t i = 0; i < g.size(); ++i) pts.push_back(number(g[i], join(join(dp, "grid"), i)));
    const json& vals = array(field(data, "values", dp), join(dp, "values"), pts.size());
    std::vector<Matrix> values;
    for (std::size_t i = 0; i < pts.size(); ++i) values.push_back(matrix_from_flat(vals[i], r, c, join(join(dp, "values"), i)));
    int order = 3;
    if (auto it = data.find("order"); it != data.end()) {
      order = static_cast<int>(count(*it, join(dp, "order")));
      if (order != 1 && order != 3) bad(join(dp, "order"), "expected 1 or 3");
    }
    TimeGrid grid(std::move(pts));
    if (auto it = data.find("derivatives"); it != data.end()) {
      const std::string vp = join(dp, "derivatives");
      array(*it, vp, grid.size());
      std::vector<Matrix> ders;
      for (std::size_t i = 0; i < grid.size(); ++i) ders.push_back(matrix_from_flat((*it)[i], r, c, join(vp, i)));
      return MatrixFunction::hermite(std::move(grid), std::move(values), std::move(ders));
    }
    return MatrixFunction::sampled(std::move(grid), std::move(values), order);
  }
  bad(join(path, "kind"), "expected \"constant\", \"poly\" or \"samples\", found \"" + k + "\"");
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail(ErrorCode::Parse, "malformed JSON at line " + std::to_string(line) + ": " + e.what());
  }
}

// Re-raise library errors hit while rebuilding objects as parse errors of the record.
template <class F>
auto rebuild(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(ErrorCode::Parse, "field '" + path + "': " + e.what());
  }
}

}  // namespace

std::string matfun_to_json(const MatrixFunction& f) { return matfun_to(f).dump(); }

MatrixFunction matfun_from_json(const std::string& text) {
  json j = parse(text);
  return rebuild("", [&] { return matfun_from(j, ""); });
}

std::string model_to_json(const Model& m) {
  json j;
  j["type"] = m.type;
  j["name"] = m.name;
  j["interval"] = {m.pair.interval.t0(), m.pair.interval.tf()};
  j["E"] = matfun_to(m.pair.E);
  j["A"] = matfun_to(m.pair.A);
  j["input"] = plain_to(m.input);
  j["state_names"] = m.state_names;
  j["params"] = json::object();
  for (const auto& [k, v] : m.params) j["params"][k] = v;
  if (m.seed) j["seed"] = *m.seed;
  if (m.phdae) {
    const auto& p = *m.phdae;
    j["phdae"] = {{"E", matfun_to(p.E)}, {"J", matfun_to(p.J)}, {"R", matfun_to(p.R)}, {"K", matfun_to(p.K)},
                  {"G", matfun_to(p.G)}, {"P", matfun_to(p.P)}, {"S", matfun_to(p.S)}, {"N", matfun_to(p.N)}};
  }
  if (m.stokes) {
    const auto& s = *m.stokes;
    j["stokes"] = {{"M", plain_to(s.M)},   {"B", plain_to(s.B)},   {"AH", plain_to(s.AH)}, {"C", plain_to(s.C)},
                   {"S0", plain_to(s.S0)}, {"AS", matfun_to(s.AS)}, {"seed", s.seed}};
  }
  return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) bad("", "model must be a JSON object");
  auto str = [&](const char* key) {
    const json& v = field(j, key, "");
    if (!v.is_string()) bad(key, "expected a string");
    return v.get<std::string>();
  };
  const std::string type = str("type");
  const std::string name = j.contains("name") ? str("name") : type;
  const json& iv = array(field(j, "interval", ""), "interval", 2);
  const double t0 = number(iv[0], "interval[0]"), tf = number(iv[1], "interval[1]");
  if (!(t0 < tf)) bad("interval", "expected t0 < tf");
  TimeGrid interval({t0, tf});
  MatrixFunction e = rebuild("E", [&] { return matfun_from(field(j, "E", ""), "E"); });
  MatrixFunction a = rebuild("A", [&] { return matfun_from(field(j, "A", ""), "A"); });
  if (e.rows() != e.cols() || a.rows() != a.cols() || e.rows() != a.rows())
    fail(ErrorCode::Dimension, "E and A must be square of equal size");
  MatrixPair pair = rebuild("E", [&] { return MatrixPair(e, a, interval); });
  const Index n = pair.dim();

  Matrix input = Matrix::Zero(n, 0);
  if (j.contains("input")) input = plain_from(j["input"], "input");
  if (input.rows() != n) fail(ErrorCode::Dimension, "input must have as many rows as the pair");

  std::vector<std::string> names;
  if (j.contains("state_names")) {
    const json& s = array(j["state_names"], "state_names", static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) bad(join("state_names", i), "expected a string");
      names.push_back(s[i].get<std::string>());
    }
  } else {
    for (Index i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  }

  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("params", "expected an object");
    for (const auto& [k, v] : j["params"].items()) params[k] = number(v, "params." + k);
  }
  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) seed = static_cast<std::uint64_t>(count(j["seed"], "seed"));

  std::optional<PHDAEModel> phdae;
  if (j.contains("phdae")) {
    const json& p = j["phdae"];
    auto f = [&](const char* key) {
      return rebuild(std::string("phdae.") + key, [&] { return matfun_from(field(p, key, "phdae"), join("phdae", key)); });
    };
    phdae = PHDAEModel{f("E"), f("J"), f("R"), f("K"), f("G"), f("P"), f("S"), f("N")};
    if (phdae->dim() != n) fail(ErrorCode::Dimension, "phdae blocks do not match the pair");
  }
  std::optional<StokesModel> stokes;
  if (j.contains("stokes")) {
    const json& s = j["stokes"];
    auto m = [&](const char* key) { return plain_from(field(s, key, "stokes"), join("stokes", key)); };
    StokesModel sm;
    sm.M = m("M");
    sm.B = m("B");
    sm.AH = m("AH");
    sm.C = m("C");
    sm.S0 = m("S0");
    sm.AS = rebuild("stokes.AS", [&] { return matfun_from(field(s, "AS", "stokes"), "stokes.AS"); });
    sm.seed = static_cast<std::uint64_t>(count(field(s, "seed", "stokes"), "stokes.seed"));
    if (sm.nv() + sm.np() != n || sm.B.rows() != sm.nv() || sm.AS.rows() != sm.nv())
      fail(ErrorCode::Dimension, "stokes blocks do not match the pair");
    stokes = std::move(sm);
  }
  return {type, name, std::move(pair), std::move(input), std::move(phdae), std::move(stokes), std::move(params), seed,
          std::move(names)};
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << model_to_json(m);
}

}  // namespace structdae
