#include <doctest.h>

#include <cmath>

#include "oracle/dae.hpp"
#include "oracle/dense.hpp"
#include "structdae/flow.hpp"
#include "structdae/models.hpp"
#include "support/generators.hpp"

using namespace structdae;

namespace {

Matrix j2() {
  Matrix j(2, 2);
  j << 0, 1, -1, 0;
  return j;
}

MatrixFunction cm(const Matrix& m) { return MatrixFunction::constant(m); }

double rotation_error(int steps) {
  TimeGrid g = TimeGrid::uniform(0, M_PI / 2, steps + 1);
  auto phi = fundamental_solution(cm(j2()), g);
  return (phi.back() - oracle::expm_taylor(M_PI / 2 * j2())).norm();
}

// Differential states (I, V1, V2) given; algebraic ones from the last two rows.
Vector consistent_circuit_state(const PHDAEModel& m, const Vector& diff) {
  Matrix a = (m.J - m.R).eval(0);
  Vector x = Vector::Zero(5);
  x.head(3) = diff;
  x.tail(2) = a.bottomRightCorner(2, 2).fullPivLu().solve(-a.bottomLeftCorner(2, 3) * diff);
  return x;
}

}  // namespace

TEST_SUITE("flow") {
  TEST_CASE("fundamental solution of M = 0") {
    TimeGrid g = TimeGrid::uniform(0, 1, 11);
    for (const Matrix& p : fundamental_solution(MatrixFunction::zero(3, 3), g))
      CHECK((p - Matrix::Identity(3, 3)).norm() == 0.0);
  }

  TEST_CASE("rotation against the matrix exponential") {
    CHECK(rotation_error(2000) <= 1e-6);
    TimeGrid g = TimeGrid::uniform(0, 1, 1001);
    auto phi = fundamental_solution(MatrixFunction::polynomial(std::vector<Matrix>{Matrix::Zero(2, 2), j2()}), g);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      err = std::max(err, (phi[k] - oracle::expm_taylor(0.5 * g[k] * g[k] * j2())).norm());
    CHECK(err <= 1e-6);
  }

  TEST_CASE("second-order convergence") {
    for (int n : {50, 100, 200, 400}) {
      CAPTURE(n);
      const double ratio = rotation_error(n) / rotation_error(2 * n);
      CHECK(ratio >= 3.6);
      CHECK(ratio <= 4.4);
    }
  }

  TEST_CASE("flow defect") {
    CHECK(flow_defect({Matrix::Identity(2, 2)}, Certificate::symplectic(j2())) == 0.0);
    CHECK(flow_defect({Matrix::Identity(2, 2), Matrix(2 * Matrix::Identity(2, 2))}, Certificate::symplectic(j2())) ==
          doctest::Approx(3 * std::sqrt(2.0)));
  }

  TEST_CASE("symplectic and generalized orthogonal flows (property)") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      testsupport::Rng rng(seed);
      const Matrix j = symplectic_unit(2);
      // bounded flows: C(t) positive definite, J coupling only within the signature blocks
      Matrix c0 = rng.matrix(4, 4);
      c0 = c0 * c0.transpose() + Matrix::Identity(4, 4);
      auto c = MatrixFunction::polynomial(std::vector<Matrix>{c0, Matrix(0.05 * rng.sym(4))});
      auto m = cm(Matrix(-j)) * c;
      Matrix s = Matrix::Identity(3, 3);
      s(2, 2) = -1;
      Matrix ks0 = rng.skew(3), ks1 = 0.2 * rng.skew(3);
      ks0.row(2).setZero(), ks0.col(2).setZero(), ks1.row(2).setZero(), ks1.col(2).setZero();
      auto ms = cm(s) * MatrixFunction::polynomial(std::vector<Matrix>{ks0, ks1});
      auto k = MatrixFunction::polynomial(std::vector<Matrix>{rng.skew(3), Matrix(0.2 * rng.skew(3))});
      for (int steps : {200, 2000}) {
        TimeGrid g = TimeGrid::uniform(0, 10, steps + 1);
        CHECK(flow_diagnostics(m, Certificate::symplectic(j), g).max_defect <= 1e-10);
        CHECK(flow_diagnostics(ms, Certificate::indefinite_orthogonal(s), g).max_defect <= 1e-10);
        CHECK(flow_diagnostics(k, Certificate::orthogonal(3), g).max_defect <= 1e-10);
      }
    }
  }

  TEST_CASE("singular midpoint step") {
    TimeGrid g = TimeGrid::uniform(0, 1, 3);
    try {
      fundamental_solution(cm(Matrix(4.0 * Matrix::Identity(2, 2))), g);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Singular);
      CHECK(std::string(e.what()).find("refine") != std::string::npos);
    }
  }

  TEST_CASE("reduced integration") {
    TimeGrid g = TimeGrid::uniform(0, 1, 11);
    ReducedSystem zero;
    zero.dynamic_dim = zero.state_dim = 2;
    zero.M = MatrixFunction::zero(2, 2);
    zero.Gu = zero.Gud = MatrixFunction::zero(2, 0);
    zero.state = {"state", MatrixFunction::identity(2), MatrixFunction::zero(2, 0), MatrixFunction::zero(2, 0), 0};
    zero.E = MatrixFunction::identity(2);
    Vector e1 = Vector::Unit(2, 0);
    auto tr = integrate_reduced(zero, e1, g);
    for (const Vector& x : tr.states) CHECK((x - e1).norm() == 0.0);
    CHECK_THROWS_AS(integrate_reduced(zero, Vector::Zero(3), g), Error);

    // lossless circuit, u = 0, I(0) = 1
    auto model = build_circuit({});
    TimeGrid gc = TimeGrid::uniform(0, 10, 2001);
    auto sys = semidefinite_skew_reduce(model.lossless_pair(gc), model.input_map(), gc);
    Vector z0 = sys.projection.eval(0) * Vector::Unit(5, 0);
    auto trc = integrate_reduced(sys, z0, gc);
    double dev = 0.0;
    for (const Vector& x : trc.states) dev = std::max(dev, std::abs(x(0) - 1.0));
    CHECK(dev <= 1e-10);
  }

  TEST_CASE("energy conservation of homogeneous skew-adjoint reductions (property)") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      testsupport::Rng rng(seed);
      TimeGrid g = TimeGrid::uniform(0, 1, 101);
      Matrix b = rng.near_identity(4, 0.4), b1 = 0.3 * rng.matrix(4, 4);
      Matrix e0 = Matrix::Zero(6, 6), e1 = Matrix::Zero(6, 6), e2 = Matrix::Zero(6, 6);
      e0.topLeftCorner(4, 4) = b * b.transpose();
      e1.topLeftCorner(4, 4) = b * b1.transpose() + b1 * b.transpose();
      e2.topLeftCorner(4, 4) = b1 * b1.transpose();
      Matrix k0 = rng.skew(6);
      auto e = MatrixFunction::polynomial(std::vector<Matrix>{e0, e1, e2});
      auto a = MatrixFunction::polynomial(std::vector<Matrix>{Matrix(k0 - 0.5 * e1), Matrix(-e2)});
      auto sys = semidefinite_skew_reduce(MatrixPair(e, a, g), MatrixFunction::zero(6, 1), g);
      auto tr = integrate_reduced(sys, rng.matrix(sys.dynamic_dim, 1), g);
      const double h0 = tr.hamiltonian.front();
      for (double h : tr.hamiltonian) CHECK(std::abs(h - h0) <= 1e-10 * (1 + std::abs(h0)));
    }
  }

  TEST_CASE("stokes reduced trajectory against the dense solve") {
    TimeGrid g = TimeGrid::uniform(0, 1, 101);
    auto s = build_stokes(5, 2, 3, g);
    Matrix f = Matrix::Zero(5, 1);
    f(1, 0) = 1;
    auto sys = stokes_reduce(s.M, s.B, s.AS, cm(f), g);
    TimeGrid fine = TimeGrid::uniform(0, 1, 4001);
    auto u = sine_times(Matrix::Ones(1, 1), fine);
    Vector z0(3);
    z0 << 0.5, -0.3, 0.8;
    auto tr = integrate_reduced(sys, z0, fine, u);

    Matrix e = Matrix::Zero(7, 7), bin = Matrix::Zero(7, 1);
    e.topLeftCorner(5, 5) = s.M;
    bin(1, 0) = 1;
    auto ajet = [&](double t) {
      Matrix a = Matrix::Zero(7, 7), a1 = Matrix::Zero(7, 7), a2 = Matrix::Zero(7, 7);
      a.topLeftCorner(5, 5) = std::sin(t) * s.S0;
      a1.topLeftCorner(5, 5) = std::cos(t) * s.S0;
      a2.topLeftCorner(5, 5) = -std::sin(t) * s.S0;
      a.topRightCorner(5, 2) = -s.B;
      a.bottomLeftCorner(2, 5) = s.B.transpose();
      return oracle::Jet{a, a1, a2};
    };
    oracle::Dae d{[&](double) { return oracle::constant_jet(e); }, ajet,
                  [&](double t) { return oracle::Jet{bin * std::sin(t), bin * std::cos(t), -bin * std::sin(t)}; }};
    Vector x = tr.states.front();
    double dev = 0.0;
    for (int k = 0; k < 10; ++k) {
      x = oracle::integrate_dae(d, x, 0.1 * k, 0.1 * (k + 1), 100);
      dev = std::max(dev, (x - tr.states[400 * (k + 1)]).norm());
    }
    CHECK(dev <= 1e-6);
  }

  TEST_CASE("hamiltonian series") {
    auto model = build_circuit({});
    Trajectory tr;
    tr.grid = TimeGrid::uniform(0, 1, 3);
    tr.states = {Vector::Zero(5), Vector::Zero(5), Vector::Zero(5)};
    for (double h : hamiltonian_series(model.E, tr)) CHECK(h == 0.0);
    tr.states[1] << 1, 1, 1, 0, 0;
    CHECK(hamiltonian_series(model.E, tr)[1] == doctest::Approx(1.5));
  }

  TEST_CASE("dissipation monitor") {
    auto lossy = build_circuit({1, 1, 1, 1, 1, 1});
    TimeGrid g = TimeGrid::uniform(0, 50, 5001);
    Vector diff(3);
    diff << 1, 1, 0;  // H(0) = 1
    Vector x0 = consistent_circuit_state(lossy, diff);
    auto tr = integrate_dae(lossy.pair(g), x0, lossy.input_map(), g);
    auto rep = dissipation_monitor(lossy, tr);
    CHECK(rep.hamiltonian.front() == doctest::Approx(1.0));
    CHECK(rep.ok);
    CHECK(rep.strictly_decreasing);
    CHECK(rep.hamiltonian.back() <= 0.01 * rep.hamiltonian.front());

    // against the derivative-array oracle on [0, 1]
    Matrix e = lossy.E.eval(0), a = (lossy.J - lossy.R).eval(0);
    oracle::Dae d{[&](double) { return oracle::constant_jet(e); }, [&](double) { return oracle::constant_jet(a); },
                  [](double) { return oracle::constant_jet(Matrix::Zero(5, 1)); }};
    Vector ref = oracle::integrate_dae(d, x0, 0, 1, 1000);
    CHECK((ref - tr.states[100]).norm() <= 1e-3);

    auto lossless = build_circuit({});
    auto tl = integrate_dae(lossless.pair(g), consistent_circuit_state(lossless, diff), lossless.input_map(), g);
    auto rl = dissipation_monitor(lossless, tl);
    CHECK(rl.ok);
    for (double h : rl.hamiltonian) CHECK(std::abs(h - rl.hamiltonian.front()) <= 1e-10);

    auto tz = integrate_dae(lossy.pair(g), Vector::Zero(5), lossy.input_map(), g);
    for (double h : dissipation_monitor(lossy, tz).hamiltonian) CHECK(h == 0.0);
    CHECK_THROWS_AS(dissipation_monitor(lossy, tz, MatrixFunction::identity(1)), Error);
  }
}
