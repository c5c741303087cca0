#include <doctest.h>

#include <cmath>
#include <string>

#include "structdae/io.hpp"

using namespace structdae;

namespace {

void check_same(const MatrixFunction& a, const MatrixFunction& b, double t0, double tf) {
  REQUIRE(a.kind() == b.kind());
  for (int k = 0; k <= 7; ++k) {
    const double t = t0 + (tf - t0) * k / 7.0;
    CHECK((a.eval(t) - b.eval(t)).norm() == 0.0);
    CHECK((a.derivative(t) - b.derivative(t)).norm() == 0.0);
  }
}

ErrorCode code_of(const std::string& text) {
  try {
    model_from_json(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

std::string message_of(const std::string& text) {
  try {
    model_from_json(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("matrix function formats") {
    Matrix c(2, 2);
    c << 1, 2, 3, 4;
    auto f = MatrixFunction::constant(c);
    check_same(f, matfun_from_json(matfun_to_json(f)), 0, 1);

    auto p = MatrixFunction::polynomial(1, 2, {{1.0, 0.5}, {0.0, 0.0, 3.0}});
    check_same(p, matfun_from_json(matfun_to_json(p)), 0, 1);
    auto pj = matfun_from_json(R"({"rows": 1, "cols": 1, "kind": "poly", "data": [[[1, 2, 3]]]})");
    CHECK(pj.eval(2.0)(0, 0) == 17.0);

    auto s = matfun_from_json(
        R"({"rows": 1, "cols": 1, "kind": "samples", "data": {"grid": [0, 1, 2], "values": [[0], [1], [4]], "order": 1}})");
    CHECK(s.eval(1.5)(0, 0) == doctest::Approx(2.5));
    check_same(s, matfun_from_json(matfun_to_json(s)), 0, 2);

    std::vector<Matrix> vals{Matrix::Zero(1, 1), Matrix::Ones(1, 1)}, ders{Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
    auto h = MatrixFunction::hermite(TimeGrid({0.0, 1.0}), vals, ders);
    check_same(h, matfun_from_json(matfun_to_json(h)), 0, 1);
  }

  TEST_CASE("demo models round-trip exactly") {
    for (const char* name : {"circuit", "circuit-canonical", "stokes", "multibody-self", "multibody-skew", "ocp"}) {
      CAPTURE(name);
      std::map<std::string, double> params;
      if (std::string(name) == "stokes") params = {{"tf", 10.0}};  // sampled sine factor
      Model m = demo_model(name, params);
      Model r = model_from_json(model_to_json(m));
      CHECK(r.type == m.type);
      CHECK(r.state_names == m.state_names);
      CHECK(r.params == m.params);
      CHECK(r.seed == m.seed);
      CHECK((r.input - m.input).norm() == 0.0);
      check_same(m.pair.E, r.pair.E, m.pair.interval.t0(), m.pair.interval.tf());
      check_same(m.pair.A, r.pair.A, m.pair.interval.t0(), m.pair.interval.tf());
      CHECK(r.phdae.has_value() == m.phdae.has_value());
      if (m.phdae) check_same(m.phdae->R, r.phdae->R, 0, 1);
      CHECK(r.stokes.has_value() == m.stokes.has_value());
      if (m.stokes) {
        CHECK((r.stokes->M - m.stokes->M).norm() == 0.0);
        CHECK((r.stokes->B - m.stokes->B).norm() == 0.0);
        check_same(m.stokes->AS, r.stokes->AS, 0, 10);
      }
      CHECK(model_to_json(r) == model_to_json(m));
    }
  }

  TEST_CASE("parse diagnostics") {
    const std::string good = model_to_json(demo_model("ocp", {}));
    CHECK(code_of("{\n  \"type\": \"pair\",\n  oops\n}") == ErrorCode::Parse);
    CHECK(message_of("{\n  \"type\": \"pair\",\n  oops\n}").find("line 3") != std::string::npos);
    CHECK(code_of(R"({"type": "pair", "interval": [0, 1]})") == ErrorCode::Parse);
    CHECK(message_of(R"({"type": "pair", "interval": [0, 1]})").find("'E'") != std::string::npos);
    const std::string bad_kind =
        R"({"type": "pair", "interval": [0, 1], "E": {"rows": 1, "cols": 1, "kind": "spline", "data": []},
            "A": {"rows": 1, "cols": 1, "kind": "constant", "data": [[0]]}})";
    CHECK(message_of(bad_kind).find("E.kind") != std::string::npos);
    const std::string bad_entry =
        R"({"type": "pair", "interval": [0, 1], "E": {"rows": 1, "cols": 2, "kind": "constant", "data": [[0, "x"]]},
            "A": {"rows": 1, "cols": 1, "kind": "constant", "data": [[0]]}})";
    CHECK(message_of(bad_entry).find("E.data[0][1]") != std::string::npos);
    const std::string mismatch =
        R"({"type": "pair", "interval": [0, 1], "E": {"rows": 1, "cols": 1, "kind": "constant", "data": [[1]]},
            "A": {"rows": 2, "cols": 2, "kind": "constant", "data": [[0, 0], [0, 0]]}})";
    CHECK(code_of(mismatch) == ErrorCode::Dimension);
    const std::string backwards =
        R"({"type": "pair", "interval": [1, 0], "E": {"rows": 1, "cols": 1, "kind": "constant", "data": [[1]]},
            "A": {"rows": 1, "cols": 1, "kind": "constant", "data": [[0]]}})";
    CHECK(code_of(backwards) == ErrorCode::Parse);
    const std::string minimal =
        R"({"type": "pair", "interval": [0, 1], "E": {"rows": 1, "cols": 1, "kind": "constant", "data": [[1]]},
            "A": {"rows": 1, "cols": 1, "kind": "constant", "data": [[0]]}})";
    Model m = model_from_json(minimal);
    CHECK(m.input.cols() == 0);
    CHECK(m.state_names == std::vector<std::string>{"x1"});
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
  }
}
