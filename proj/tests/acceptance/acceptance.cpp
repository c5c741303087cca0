// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/dae.hpp"
#include "oracle/dense.hpp"
#include "structdae/canonical.hpp"
#include "structdae/factor.hpp"
#include "structdae/flow.hpp"
#include "structdae/models.hpp"
#include "structdae/reduce.hpp"
#include "structdae/structure.hpp"
#include "support/generators.hpp"

using namespace structdae;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records `value <= limit` under `label`.
  void bound(const std::string& label, double value, double limit) {
    const bool ok = value <= limit;
    pass = pass && ok;
    detail << label << '=' << value << (ok ? "" : " (limit " + num(limit) + ")") << "; ";
  }
  void require(const std::string& label, bool ok) {
    pass = pass && ok;
    detail << label << (ok ? " ok" : " FAILED") << "; ";
  }
  static std::string num(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }
};

MatrixFunction cm(const Matrix& m) { return MatrixFunction::constant(m); }

double max_diff(const MatrixFunction& a, const MatrixFunction& b, const TimeGrid& g) {
  double d = 0.0;
  for (double t : g.points()) d = std::max(d, (a.eval(t) - b.eval(t)).norm());
  return d;
}

double pair_diff(const MatrixPair& a, const MatrixPair& b, const TimeGrid& g) {
  return std::max(max_diff(a.E, b.E, g), max_diff(a.A, b.A, g));
}

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

// R(t) diag(a, b) R(t)^T with analytic node derivatives.
MatrixFunction rotated_diag(double a, double b, const TimeGrid& g) {
  return tabulate(g, [&](double t) {
    Matrix r = oracle::rotation(t), rd = oracle::rotation(t + M_PI / 2);
    Matrix d = diag({a, b});
    return std::pair{Matrix(r * d * r.transpose()), Matrix(rd * d * r.transpose() + r * d * rd.transpose())};
  });
}

double max_jump(const MatrixFunction& f, const TimeGrid& g) {
  double j = 0.0;
  for (std::size_t k = 1; k < g.size(); ++k) j = std::max(j, (f.eval(g[k]) - f.eval(g[k - 1])).norm());
  return j;
}

Matrix pad(const Matrix& s, Eigen::Index n) {
  Matrix z = Matrix::Zero(n, n);
  z.topLeftCorner(s.rows(), s.cols()) = s;
  return z;
}

oracle::JetFn sine_input(const Matrix& b) {
  return [b](double t) { return oracle::Jet{b * std::sin(t), b * std::cos(t), -b * std::sin(t)}; };
}

// Differential circuit states given; algebraic ones from the last two rows.
Vector consistent_circuit_state(const PHDAEModel& m, const Vector& diff) {
  Matrix a = (m.J - m.R).eval(0);
  Vector x = Vector::Zero(5);
  x.head(3) = diff;
  x.tail(2) = a.bottomRightCorner(2, 2).fullPivLu().solve(-a.bottomLeftCorner(2, 3) * diff);
  return x;
}

// Seeded skew-adjoint pair with E = diag(B(t) B(t)^T, 0) of size 6; even
// seeds have index two, seeds above 3 vary in time.
struct SeededSkew {
  MatrixPair pair;
  oracle::Dae dae;
  Matrix input;
  bool varying;
};

SeededSkew seeded_skew(std::uint64_t seed) {
  testsupport::Rng rng(seed);
  const bool index2 = seed % 2 == 0, varying = seed > 3;
  Matrix b0 = rng.near_identity(4, 0.4), b1 = varying ? Matrix(0.3 * rng.matrix(4, 4)) : Matrix::Zero(4, 4);
  Matrix k0 = rng.skew(6), k1 = varying ? Matrix(0.5 * rng.skew(6)) : Matrix::Zero(6, 6);
  if (index2) k0.bottomRightCorner(2, 2).setZero(), k1.bottomRightCorner(2, 2).setZero();
  Matrix bin = rng.matrix(6, 1);
  auto ejet = [=](double t) {
    Matrix bt = b0 + t * b1;
    return oracle::Jet{pad(bt * bt.transpose(), 6), pad(b1 * bt.transpose() + bt * b1.transpose(), 6),
                       pad(2 * b1 * b1.transpose(), 6)};
  };
  auto ajet = [=](double t) {
    oracle::Jet e = ejet(t);
    return oracle::Jet{k0 + t * k1 - 0.5 * e.d1, k1 - 0.5 * e.d2, Matrix::Zero(6, 6)};
  };
  Matrix e0 = pad(b0 * b0.transpose(), 6), e1 = pad(b0 * b1.transpose() + b1 * b0.transpose(), 6),
         e2 = pad(b1 * b1.transpose(), 6);
  auto e = MatrixFunction::polynomial(std::vector<Matrix>{e0, e1, e2});
  auto a = MatrixFunction::polynomial(std::vector<Matrix>{Matrix(k0 - 0.5 * e1), Matrix(k1 - e2)});
  return {MatrixPair(e, a, TimeGrid::uniform(0, 1, 2)), oracle::Dae{ejet, ajet, sine_input(bin)}, bin, varying};
}

// Max deviation of a reduced trajectory on a uniform grid over [0, 1] from the
// oracle, restarted from the trajectory's own state every 0.1.
double oracle_deviation(const Trajectory& tr, const oracle::Dae& d) {
  const std::size_t stride = (tr.grid.size() - 1) / 10;
  Vector x = tr.states.front();
  double dev = 0.0;
  for (int k = 0; k < 10; ++k) {
    x = oracle::integrate_dae(d, x, 0.1 * k, 0.1 * (k + 1), 100);
    dev = std::max(dev, (x - tr.states[stride * (k + 1)]).norm());
  }
  return dev;
}

// ---------------------------------------------------------------------------

void structure_checks(Outcome& o) {
  const TimeGrid g = TimeGrid::uniform(0, 1, 41);
  o.bound("circuit(R=0) skew", skew_adjoint_residual(build_circuit({}).lossless_pair(g), g).max_residual(), 1e-10);
  double stokes = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto s = build_stokes(6, 2, seed, g);
    stokes = std::max(stokes, skew_adjoint_residual(s.pair(g, false), g).max_residual());
  }
  o.bound("stokes skew", stokes, 1e-10);
  testsupport::Rng rng(4);
  Matrix m = rng.near_identity(3, 0.2);
  m = m * m.transpose();
  Matrix w = rng.near_identity(3, 0.2);
  w = w * w.transpose();
  auto mb = build_multibody(m, w, rng.matrix(1, 3), g);
  o.bound("multibody self", self_adjoint_residual(mb.self_form, g).max_residual(), 1e-10);
  o.bound("multibody skew", skew_adjoint_residual(mb.skew_form, g).max_residual(), 1e-10);
  auto et = MatrixFunction::polynomial(2, 2, {{1, 0.5}, {0}, {0, 0.2}, {1}});
  auto ocp = build_optimal_control(et, cm(rng.matrix(2, 2)), cm(rng.matrix(2, 1)), MatrixFunction::identity(2),
                                   MatrixFunction::zero(2, 1), MatrixFunction::identity(1), Matrix::Identity(2, 2), g);
  o.bound("optimal control self", self_adjoint_residual(ocp.pair, g).max_residual(), 1e-10);
}

void congruence_suite(Outcome& o) {
  const TimeGrid g = TimeGrid::uniform(0, 1, 41);
  double structure = 0.0, ident = 0.0, comp = 0.0, inv = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    testsupport::Rng rng(seed);
    auto [se, sa] = testsupport::self_adjoint_poly_pair(rng, 4, 2);
    auto [ke, ka] = testsupport::skew_adjoint_poly_pair(rng, 4, 2);
    MatrixPair sp(se, sa, g), kp(ke, ka, g);
    auto ta = testsupport::random_poly_transform(rng, 4, 2);
    auto tb = testsupport::random_poly_transform(rng, 4, 1);
    auto s2 = apply_congruence(sp, ta), k2 = apply_congruence(kp, ta);
    structure = std::max({structure, self_adjoint_residual(s2, g).max_residual(),
                          skew_adjoint_residual(k2, g).max_residual()});
    ident = std::max({ident, pair_diff(apply_congruence(sp, CongruenceTransform::identity(4)), sp, g),
                      pair_diff(apply_congruence(kp, CongruenceTransform::identity(4)), kp, g)});
    comp = std::max(comp, pair_diff(apply_congruence(s2, tb), apply_congruence(sp, compose(ta, tb)), g));
    inv = std::max({inv, pair_diff(apply_congruence(s2, invert(ta, g)), sp, g),
                    pair_diff(apply_congruence(k2, invert(ta, g)), kp, g)});
  }
  o.bound("max structure residual", structure, 1e-8);
  o.bound("identity", ident, 1e-10);
  o.bound("compose", comp, 1e-10);
  o.bound("invert", inv, 1e-10);
}

void factor_suite(Outcome& o) {
  const TimeGrid g = TimeGrid::uniform(0, 1, 51);
  double rec = 0.0;
  auto rank1 = rotated_diag(1, 0, g);
  auto rs = rank_split(rank1, g);
  for (double t : g.points())
    rec = std::max(rec, (rs.U.eval(t).transpose() * rank1.eval(t) * rs.V.eval(t) - pad(rs.Sigma.eval(t), 2)).norm());
  auto ss = sym_rank_split(rank1, g);
  for (double t : g.points())
    rec = std::max(rec, (ss.Q.eval(t).transpose() * rank1.eval(t) * ss.Q.eval(t) - pad(ss.Sigma.eval(t), 2)).norm());
  auto indef = rotated_diag(2, -1, g);
  auto in = smooth_inertia(indef, g);
  for (double t : g.points())
    rec = std::max(rec, (in.W.eval(t).transpose() * indef.eval(t) * in.W.eval(t) - diag({1, -1})).norm());
  for (const MatrixFunction& e : {build_circuit({2, 3, 5}).E, demo_model("multibody-skew", {}).pair.E}) {
    auto s = sym_rank_split(e, g);
    Matrix q = s.Q.eval(0.5);
    rec = std::max(rec, (q.transpose() * e.eval(0.5) * q - pad(s.Sigma.eval(0.5), e.rows())).norm());
  }
  o.bound("max reconstruction residual", rec, 1e-10);

  const TimeGrid fine = g.refined();
  const double r1 = max_jump(rs.U, g) / max_jump(rank_split(rotated_diag(1, 0, fine), fine).U, fine);
  const double r2 = max_jump(in.W, g) / max_jump(smooth_inertia(rotated_diag(2, -1, fine), fine).W, fine);
  o.detail << "jump ratio rank-1=" << r1 << " inertia=" << r2 << "; ";
  o.require("jumps halve", r1 >= 2 / 1.5 && r1 <= 2 * 1.5 && r2 >= 2 / 1.5 && r2 <= 2 * 1.5);
}

void canonical_forms(Outcome& o) {
  const TimeGrid iv = TimeGrid::uniform(0, 1, 2), g = TimeGrid::uniform(0, 1, 51);
  for (int n : {2, 3}) {
    Matrix gm = Matrix::Zero(1, n);
    gm(0, 0) = 1;
    const Matrix id = Matrix::Identity(n, n);
    auto mb = build_multibody(id, id, gm, iv);
    auto sf = global_canonical_self(mb.self_form, solution_basis_constant(mb.self_form, g), g);
    auto kf = global_canonical_skew(mb.skew_form, solution_basis_constant(mb.skew_form, g), g);
    const std::string tag = "n=" + std::to_string(n) + " ";
    o.bound(tag + "self residual", verify_self_global_form(sf, g, 1e-8).max_defect(), 1e-8);
    o.bound(tag + "skew residual", verify_skew_global_form(kf, g, 1e-8).max_defect(), 1e-8);
    const int ds = oracle::finite_eigenvalue_count(mb.self_form.E.constant_value(), mb.self_form.A.constant_value());
    const int dk = oracle::finite_eigenvalue_count(mb.skew_form.E.constant_value(), mb.skew_form.A.constant_value());
    o.detail << tag << "d_self=" << ds << " p=" << sf.p << " d_skew=" << dk << " p=" << kf.p << " q=" << kf.q << "; ";
    o.require(tag + "d = 2p", ds == 2 * sf.p);
    o.require(tag + "d = p + q", dk == kf.p + kf.q);
    o.require(tag + "q = 0", kf.q == 0);
  }
}

void flow_certification(Outcome& o) {
  const TimeGrid g = TimeGrid::uniform(0, 10, 2001);
  double symp = 0.0, indef = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    testsupport::Rng rng(seed);
    const Matrix j = symplectic_unit(2);
    Matrix c0 = rng.matrix(4, 4);
    c0 = c0 * c0.transpose() + Matrix::Identity(4, 4);
    auto c = MatrixFunction::polynomial(std::vector<Matrix>{c0, Matrix(0.05 * rng.sym(4))});
    auto m = cm(Matrix(j.inverse())) * c;
    symp = std::max(symp, flow_diagnostics(m, Certificate::symplectic(j), g).max_defect);
    Matrix s = diag({1, 1, -1});
    Matrix k0 = rng.skew(3), k1 = 0.2 * rng.skew(3);
    k0.row(2).setZero(), k0.col(2).setZero(), k1.row(2).setZero(), k1.col(2).setZero();
    auto ms = cm(Matrix(s.inverse())) * MatrixFunction::polynomial(std::vector<Matrix>{k0, k1});
    indef = std::max(indef, flow_diagnostics(ms, Certificate::indefinite_orthogonal(s), g).max_defect);
  }
  o.bound("symplectic defect", symp, 1e-10);
  o.bound("O(p,q) defect", indef, 1e-10);

  Matrix j2 = symplectic_unit(1);
  auto err = [&](int steps) {
    auto phi = fundamental_solution(cm(j2), TimeGrid::uniform(0, M_PI / 2, steps + 1));
    return (phi.back() - oracle::expm_taylor(M_PI / 2 * j2)).norm();
  };
  double lo = 1e300, hi = 0.0;
  for (int n : {50, 100, 200, 400}) {
    const double r = err(n) / err(2 * n);
    lo = std::min(lo, r), hi = std::max(hi, r);
  }
  o.detail << "convergence factors in [" << lo << ", " << hi << "]; ";
  o.require("second order", lo >= 3.6 && hi <= 4.4);
}

void circuit_end_to_end(Outcome& o) {
  // Unit parameters and I(0) = 0 make the targets as reachable as possible.
  const CircuitParams p{1.0, 1.0, 1.0};
  auto model = build_circuit(p);
  const TimeGrid g = TimeGrid::uniform(0, 10, 4001);
  auto sys = semidefinite_skew_reduce(model.lossless_pair(g), model.input_map(), g);
  o.require("dynamic_dim 1", sys.dynamic_dim == 1);

  auto u = sine_times(Matrix::Ones(1, 1), g);
  Vector x0 = sys.reconstruct(0, Vector::Zero(1), Vector::Zero(1), Vector::Ones(1));
  auto tr = integrate_reduced(sys, sys.projection.eval(0) * x0, g, u);
  double v2 = 0.0, v1 = 0.0, ir = 0.0, ig = 0.0, ir_kcl = 0.0, ig_kcl = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g[k];
    const Vector& x = tr.states[k];  // (I, V1, V2, I_G, I_R)
    v2 = std::max(v2, std::abs(x(2)));
    v1 = std::max(v1, std::abs(x(1) + std::sin(t)));
    ir = std::max(ir, std::abs(x(4)));
    ig = std::max(ig, std::abs(x(3) - std::cos(t)));
    ir_kcl = std::max(ir_kcl, std::abs(x(4) + x(0)));
    ig_kcl = std::max(ig_kcl, std::abs(x(3) - x(0) - p.C1 * std::cos(t)));
  }
  o.bound("|V2|", v2, 1e-6);
  o.bound("|V1 + sin t|", v1, 1e-6);
  o.bound("|I_R|", ir, 1e-6);
  o.bound("|I_G - cos t|", ig, 1e-6);
  // what the model's current balances give instead (informational)
  o.detail << "max |I_R + I|=" << ir_kcl << " max |I_G - I - C1 u'|=" << ig_kcl << "; ";

  Vector x1(5);
  x1 << 1, 0, 0, 1, -1;
  auto tz = integrate_reduced(sys, sys.projection.eval(0) * x1, g);
  double drift = 0.0;
  for (const Vector& x : tz.states) drift = std::max(drift, std::abs(x(0) - tz.states.front()(0)));
  o.bound("u=0 |I(t) - I(0)|", drift, 1e-10);
}

void energy_laws(Outcome& o) {
  double rel = 0.0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto s = seeded_skew(seed);
    const TimeGrid g = TimeGrid::uniform(0, 1, s.varying ? 801 : 101);
    auto sys = semidefinite_skew_reduce(MatrixPair(s.pair.E, s.pair.A, g), MatrixFunction::zero(6, 1), g);
    testsupport::Rng rng(seed + 100);
    auto tr = integrate_reduced(sys, rng.matrix(sys.dynamic_dim, 1), g);
    const double h0 = tr.hamiltonian.front();
    for (double h : tr.hamiltonian) rel = std::max(rel, std::abs(h - h0) / std::abs(h0));
  }
  auto lossless = build_circuit({2, 3, 5});
  const TimeGrid gc = TimeGrid::uniform(0, 50, 5001);
  Vector d0(3);
  d0 << 0.3, -0.7, 0.4;
  auto tl = integrate_dae(lossless.pair(gc), consistent_circuit_state(lossless, d0), lossless.input_map(), gc);
  auto hl = hamiltonian_series(lossless.E, tl);
  for (double h : hl) rel = std::max(rel, std::abs(h - hl.front()) / hl.front());
  o.bound("homogeneous relative H drift", rel, 1e-10);

  auto lossy = build_circuit({1, 1, 1, 1, 1, 1});
  Vector diff(3);
  diff << 1, 1, 0;  // H(0) = 1
  auto tr = integrate_dae(lossy.pair(gc), consistent_circuit_state(lossy, diff), lossy.input_map(), gc);
  auto rep = dissipation_monitor(lossy, tr);
  std::size_t increases = 0;
  for (std::size_t k = 1; k < rep.hamiltonian.size(); ++k) increases += rep.hamiltonian[k] > rep.hamiltonian[k - 1];
  o.detail << "lossy H(0)=" << rep.hamiltonian.front() << " increases=" << increases << "; ";
  o.require("lossy non-increasing", increases == 0 && rep.ok);
  o.bound("lossy H(50)/H(0)", rep.hamiltonian.back() / rep.hamiltonian.front(), 0.01);
}

void index_bound(Outcome& o) {
  int worst = 0, failures = 0, index2 = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    testsupport::Rng rng(seed * 7919);
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(seed % 5);
    const bool zero_block = seed % 4 == 0;
    // a vanishing kernel block needs at least as many differential rows
    const Eigen::Index k = std::min<Eigen::Index>(1 + static_cast<Eigen::Index>(seed % 3), zero_block ? n / 2 : n);
    const bool varying = seed % 10 == 0;
    Matrix b0 = rng.near_identity(n - k, 0.3), b1 = varying ? Matrix(0.2 * rng.matrix(n - k, n - k)) : Matrix(Matrix::Zero(n - k, n - k));
    Matrix e0 = pad(b0 * b0.transpose(), n), e1 = pad(b0 * b1.transpose() + b1 * b0.transpose(), n),
           e2 = pad(b1 * b1.transpose(), n);
    Matrix k0 = rng.skew(n);
    if (zero_block) k0.bottomRightCorner(k, k).setZero();
    auto e = MatrixFunction::polynomial(std::vector<Matrix>{e0, e1, e2});
    auto a = MatrixFunction::polynomial(std::vector<Matrix>{Matrix(k0 - 0.5 * e1), Matrix(-e2)});
    const TimeGrid g = TimeGrid::uniform(0, 1, varying ? 51 : 3);
    try {
      auto sys = semidefinite_skew_reduce(MatrixPair(e, a, g), cm(rng.matrix(n, 2)), g);
      int order = sys.state.derivative_order;
      for (const auto& r : sys.recovery) order = std::max(order, r.derivative_order);
      order = std::max(order, sys.max_derivative_order());
      worst = std::max(worst, order);
      index2 += order == 1;
    } catch (const Error& err) {
      ++failures;
      o.detail << "seed " << seed << ": " << err.what() << "; ";
    }
  }
  o.detail << "instances with an index-two part=" << index2 << "; ";
  o.require("all 100 reduced", failures == 0);
  o.bound("max input derivative order", worst, 1);
}

void oracle_equivalence(Outcome& o) {
  // the index-one seeds have fast eliminated cores; the midpoint error is
  // second order, so the grid is fine enough to sit well below the bound
  const TimeGrid fine = TimeGrid::uniform(0, 1, 32001);
  auto u = sine_times(Matrix::Ones(1, 1), fine);
  double skew = 0.0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto s = seeded_skew(seed);
    const TimeGrid g = TimeGrid::uniform(0, 1, s.varying ? 801 : 11);
    auto sys = semidefinite_skew_reduce(MatrixPair(s.pair.E, s.pair.A, g), cm(s.input), g);
    testsupport::Rng rng(seed + 200);
    const double dev = oracle_deviation(integrate_reduced(sys, rng.matrix(sys.dynamic_dim, 1), fine, u), s.dae);
    skew = std::max(skew, dev);
  }
  o.bound("6x6 skew deviation", skew, 1e-6);

  double stokes = 0.0;
  for (std::uint64_t seed : {3u, 11u, 17u}) {
    const TimeGrid g = TimeGrid::uniform(0, 1, 101);
    auto s = build_stokes(5, 2, seed, g);
    Matrix f = Matrix::Zero(5, 1);
    f(seed % 5, 0) = 1;
    auto sys = stokes_reduce(s.M, s.B, s.AS, cm(f), g);
    Matrix e = pad(s.M, 7), bin = Matrix::Zero(7, 1);
    bin(seed % 5, 0) = 1;
    auto ajet = [&](double t) {
      Matrix a = Matrix::Zero(7, 7);
      a.topRightCorner(5, 2) = -s.B;
      a.bottomLeftCorner(2, 5) = s.B.transpose();
      return oracle::Jet{a + pad(std::sin(t) * s.S0, 7), pad(std::cos(t) * s.S0, 7), pad(-std::sin(t) * s.S0, 7)};
    };
    oracle::Dae d{[&](double) { return oracle::constant_jet(e); }, ajet, sine_input(bin)};
    testsupport::Rng rng(seed);
    stokes = std::max(stokes, oracle_deviation(integrate_reduced(sys, rng.matrix(sys.dynamic_dim, 1), fine, u), d));
  }
  o.bound("stokes deviation", stokes, 1e-6);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"structure checks of the model builders", structure_checks},
      {"congruence preserves structure; compose/invert/identity", congruence_suite},
      {"factorization residuals and continuity", factor_suite},
      {"global canonical forms of the multibody pairs", canonical_forms},
      {"flow certification and midpoint convergence", flow_certification},
      {"lossless circuit end to end", circuit_end_to_end},
      {"energy conservation and dissipation", energy_laws},
      {"input derivative order of the skew reduction", index_bound},
      {"reduced trajectories against the dense oracle", oracle_equivalence},
  };
  int failed = 0, index = 0;
  for (const auto& [title, fn] : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %d %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", index, title, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
