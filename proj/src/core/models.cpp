#include "structdae/models.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

#include "structdae/linalg.hpp"
#include "structdae/structure.hpp"

namespace structdae {

namespace {

using Index = Eigen::Index;

void require_spd(const Matrix& m, const std::string& name) {
  if (m.rows() != m.cols()) fail(ErrorCode::Dimension, name + " must be square");
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) fail(ErrorCode::InvalidArgument, name + " must be symmetric");
  auto e = linalg::sym_eig(m);
  if (e.values.size() == 0 || e.values(0) <= 0) fail(ErrorCode::InvalidArgument, name + " must be positive definite");
}

double max_symmetry_defect(const MatrixFunction& f, const TimeGrid& grid, double sign) {
  double d = 0.0;
  for (double t : grid.points()) {
    Matrix x = f.eval(t);
    d = std::max(d, (x - sign * x.transpose()).norm());
  }
  return d;
}

// Deterministic uniform numbers in [-1, 1) that do not depend on the
// standard library's distribution implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return -1.0 + 2.0 * static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  Matrix matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = (*this)();
    return m;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

MatrixPair PHDAEModel::lossless_pair(const TimeGrid& interval) const { return MatrixPair(E, J - E * K, interval); }

MatrixPair PHDAEModel::pair(const TimeGrid& interval) const { return MatrixPair(E, J - R - E * K, interval); }

PHDAECheck check_phdae(const PHDAEModel& m, const TimeGrid& grid) {
  PHDAECheck c;
  c.skew_residual = skew_adjoint_residual(m.lossless_pair(grid), grid).max_residual();
  c.dissipation_min_eig = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (double t : grid.points()) {
    const Index n = m.dim(), k = m.inputs();
    Matrix w(n + k, n + k);
    Matrix p = m.P.eval(t);
    w << m.R.eval(t), p, p.transpose(), m.S.eval(t);
    scale = std::max(scale, w.norm());
    auto e = linalg::sym_eig(w);
    c.dissipation_min_eig = std::min(c.dissipation_min_eig, e.values.size() ? e.values(0) : 0.0);
  }
  c.s_symmetry = max_symmetry_defect(m.S, grid, 1.0);
  c.n_skewness = max_symmetry_defect(m.N, grid, -1.0);
  c.ok = c.skew_residual <= 1e-10 && c.dissipation_min_eig >= -1e-10 * (1.0 + scale) && c.s_symmetry <= 1e-10 &&
         c.n_skewness <= 1e-10;
  return c;
}

PHDAEModel build_circuit(const CircuitParams& p) {
  if (!(p.L > 0) || !(p.C1 > 0) || !(p.C2 > 0)) fail(ErrorCode::InvalidArgument, "L, C1, C2 must be positive");
  if (!(p.RL >= 0) || !(p.RG >= 0) || !(p.RR >= 0)) fail(ErrorCode::InvalidArgument, "resistances must be nonnegative");
  Matrix e = Matrix::Zero(5, 5);
  e.diagonal() << p.L, p.C1, p.C2, 0, 0;
  Matrix j(5, 5);
  j << 0, -1, 1, 0, 0,
       1, 0, 0, -1, 0,
       -1, 0, 0, 0, -1,
       0, 1, 0, 0, 0,
       0, 0, 1, 0, 0;
  Matrix r = Matrix::Zero(5, 5);
  r.diagonal() << p.RL, 0, 0, p.RG, p.RR;
  Matrix g = Matrix::Zero(5, 1);
  g(3, 0) = 1;
  return {MatrixFunction::constant(e), MatrixFunction::constant(j), MatrixFunction::constant(r), MatrixFunction::zero(5, 5),
          MatrixFunction::constant(g), MatrixFunction::zero(5, 1), MatrixFunction::zero(1, 1), MatrixFunction::zero(1, 1)};
}

CircuitCanonical build_circuit_canonical(const CircuitParams& p, const TimeGrid& interval) {
  auto model = build_circuit(p);
  Matrix perm = Matrix::Zero(5, 5);
  const int order[5] = {1, 2, 0, 3, 4};
  for (int k = 0; k < 5; ++k) perm(order[k], k) = 1.0;
  auto tr = CongruenceTransform::from(MatrixFunction::constant(perm));
  MatrixPair reordered = apply_congruence(model.pair(interval), tr);
  Matrix input = perm.transpose() * model.input_map().constant_value();
  return {std::move(reordered), std::move(input), std::move(perm)};
}

MatrixFunction sine_times(const Matrix& s0, const TimeGrid& interval) {
  const double reach = std::max(std::abs(interval.t0()), std::abs(interval.tf()));
  if (reach <= 2.0) {
    // Taylor series about 0; degree 31 leaves a remainder below 1e-22 for |t| <= 2.
    std::vector<Matrix> c;
    double fact = 1.0;
    for (int k = 0; k <= 31; ++k) {
      if (k > 0) fact *= k;
      double coef = (k % 2 == 0) ? 0.0 : ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact;
      c.push_back(coef * s0);
    }
    return MatrixFunction::polynomial(c);
  }
  const auto count = static_cast<std::size_t>(std::ceil((interval.tf() - interval.t0()) / 0.002)) + 1;
  auto grid = TimeGrid::uniform(interval.t0(), interval.tf(), std::max<std::size_t>(count, 2));
  return tabulate(grid, [&](double t) { return std::pair{Matrix(std::sin(t) * s0), Matrix(std::cos(t) * s0)}; });
}

MatrixPair StokesModel::pair(const TimeGrid& interval, bool damped) const {
  const Index n = nv(), k = np();
  Matrix e = Matrix::Zero(n + k, n + k);
  e.topLeftCorner(n, n) = M;
  Matrix a0 = Matrix::Zero(n + k, n + k);
  a0.topRightCorner(n, k) = -B;
  a0.bottomLeftCorner(k, n) = B.transpose();
  if (damped) {
    a0.topLeftCorner(n, n) = -AH;
    a0.bottomRightCorner(k, k) = -C;
  }
  Matrix lift = Matrix::Zero(n + k, n);
  lift.topRows(n) = Matrix::Identity(n, n);
  auto as = MatrixFunction::constant(lift) * AS * MatrixFunction::constant(lift.transpose());
  return MatrixPair(MatrixFunction::constant(e), MatrixFunction::constant(a0) + as, interval);
}

Matrix StokesModel::input_map() const {
  Matrix m = Matrix::Zero(nv() + np(), nv());
  m.topRows(nv()) = Matrix::Identity(nv(), nv());
  return m;
}

StokesModel build_stokes(Index nv, Index np, std::uint64_t seed, const TimeGrid& interval) {
  if (np < 1 || nv <= np) fail(ErrorCode::Dimension, "Stokes blocks need nv > np >= 1");
  Uniform rnd(seed);
  StokesModel s;
  s.seed = seed;
  Matrix x = rnd.matrix(nv, nv);
  s.M = x * x.transpose() / static_cast<double>(nv) + Matrix::Identity(nv, nv);
  s.B = rnd.matrix(nv, np);
  for (Index j = 0; j < np; ++j) s.B(j, j) += 2.0;  // keeps B well away from rank deficiency
  Matrix y = rnd.matrix(nv, nv);
  s.S0 = y - y.transpose();
  Matrix h = rnd.matrix(nv, nv);
  s.AH = 0.1 * h * h.transpose() / static_cast<double>(nv);
  Matrix c = rnd.matrix(np, np);
  s.C = 1e-3 * (c * c.transpose() + Matrix::Identity(np, np)) / (1.0 + (c * c.transpose()).norm());
  s.AS = sine_times(s.S0, interval);
  return s;
}

MatrixPair build_multibody_self(const Matrix& M, const Matrix& W, const Matrix& G, const TimeGrid& interval) {
  require_spd(M, "M");
  const Index n = M.rows(), m = G.rows();
  if (W.rows() != n || W.cols() != n || G.cols() != n) fail(ErrorCode::Dimension, "M, W, G do not conform");
  if ((W - W.transpose()).norm() > 1e-12 * std::max(1.0, W.norm())) fail(ErrorCode::InvalidArgument, "W must be symmetric");
  Matrix e = Matrix::Zero(2 * n + m, 2 * n + m), a = Matrix::Zero(2 * n + m, 2 * n + m);
  e.block(0, n, n, n) = M;
  e.block(n, 0, n, n) = -M;
  a.block(0, 0, n, n) = -W;
  a.block(0, 2 * n, n, m) = -G.transpose();
  a.block(n, n, n, n) = -M;
  a.block(2 * n, 0, m, n) = -G;
  return MatrixPair(MatrixFunction::constant(e), MatrixFunction::constant(a), interval);
}

MatrixPair build_multibody_skew(const Matrix& M, const Matrix& W, const Matrix& G, const TimeGrid& interval) {
  require_spd(M, "M");
  require_spd(W, "W");
  const Index n = M.rows(), m = G.rows();
  if (W.rows() != n || G.cols() != n) fail(ErrorCode::Dimension, "M, W, G do not conform");
  Matrix e = Matrix::Zero(2 * n + m, 2 * n + m), a = Matrix::Zero(2 * n + m, 2 * n + m);
  e.block(0, 0, n, n) = W;
  e.block(n, n, n, n) = M;
  a.block(0, n, n, n) = W;
  a.block(n, 0, n, n) = -W;
  a.block(n, 2 * n, n, m) = -G.transpose();
  a.block(2 * n, n, m, n) = G;
  return MatrixPair(MatrixFunction::constant(e), MatrixFunction::constant(a), interval);
}

MultibodyPairs build_multibody(const Matrix& M, const Matrix& W, const Matrix& G, const TimeGrid& interval) {
  return {build_multibody_self(M, W, G, interval), build_multibody_skew(M, W, G, interval)};
}

OptimalControlPair build_optimal_control(const MatrixFunction& E, const MatrixFunction& A, const MatrixFunction& B,
                                         const MatrixFunction& W, const MatrixFunction& S, const MatrixFunction& R,
                                         const Matrix& Mf, const TimeGrid& interval) {
  const Index n = E.rows(), m = B.cols();
  if (E.cols() != n || A.rows() != n || A.cols() != n || B.rows() != n || W.rows() != n || W.cols() != n ||
      S.rows() != n || S.cols() != m || R.rows() != m || R.cols() != m || Mf.rows() != n || Mf.cols() != n)
    fail(ErrorCode::Dimension, "optimal control blocks do not conform");
  if (max_symmetry_defect(W, interval, 1.0) > 1e-12) fail(ErrorCode::InvalidArgument, "W must be symmetric");
  if (max_symmetry_defect(R, interval, 1.0) > 1e-12) fail(ErrorCode::InvalidArgument, "R must be symmetric");
  if ((Mf - Mf.transpose()).norm() > 1e-12) fail(ErrorCode::InvalidArgument, "Mf must be symmetric");
  auto z = [](Index r, Index c) { return MatrixFunction::zero(r, c); };
  auto et = transpose(E);
  auto ebig = vstack(vstack(hstack(hstack(z(n, n), E), z(n, m)), hstack(hstack(-et, z(n, n)), z(n, m))),
                     z(m, 2 * n + m));
  auto row1 = hstack(hstack(z(n, n), A), B);
  auto row2 = hstack(hstack(transpose(A) + differentiate(et), W), S);
  auto row3 = hstack(hstack(transpose(B), transpose(S)), R);
  return {MatrixPair(ebig, vstack(vstack(row1, row2), row3), interval), Mf};
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

TimeGrid interval_from(const std::map<std::string, double>& p, double t0, double tf) {
  return TimeGrid({param(p, "t0", t0), param(p, "tf", tf)});
}

std::uint64_t demo_seed(const std::map<std::string, double>& p) {
  if (auto it = p.find("seed"); it != p.end()) return static_cast<std::uint64_t>(it->second);
  if (const char* env = std::getenv("STRUCT_DAE_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
    fail(ErrorCode::InvalidArgument, "STRUCT_DAE_SEED is not a nonnegative integer");
  }
  return 1;
}

}  // namespace

Model demo_model(const std::string& name, const std::map<std::string, double>& params) {
  static const char* circuit_keys[] = {"L", "C1", "C2", "RL", "RG", "RR"};
  if (name == "circuit" || name == "circuit-canonical") {
    CircuitParams cp{param(params, "L", 1), param(params, "C1", 1), param(params, "C2", 1),
                     param(params, "RL", 0), param(params, "RG", 0), param(params, "RR", 0)};
    auto iv = interval_from(params, 0, 10);
    std::map<std::string, double> rec;
    for (const char* k : circuit_keys) rec[k] = param(params, k, k[0] == 'R' ? 0.0 : 1.0);
    if (name == "circuit") {
      auto m = build_circuit(cp);
      return {"circuit", "circuit", m.pair(iv), m.input_map().constant_value(), m, std::nullopt, rec, std::nullopt,
              {"I", "V1", "V2", "I_G", "I_R"}};
    }
    auto c = build_circuit_canonical(cp, iv);
    return {"circuit-canonical", "circuit-canonical", c.pair, c.input, std::nullopt, std::nullopt, rec, std::nullopt,
            {"V1", "V2", "I", "I_G", "I_R"}};
  }
  if (name == "stokes") {
    const auto nv = static_cast<Index>(param(params, "nv", 5));
    const auto np = static_cast<Index>(param(params, "np", 2));
    const bool damped = param(params, "damped", 0) != 0;
    const auto seed = demo_seed(params);
    auto iv = interval_from(params, 0, 1);
    auto s = build_stokes(nv, np, seed, iv);
    std::vector<std::string> names;
    for (Index i = 0; i < nv; ++i) names.push_back("v" + std::to_string(i + 1));
    for (Index i = 0; i < np; ++i) names.push_back("p" + std::to_string(i + 1));
    return {"stokes", "stokes", s.pair(iv, damped), s.input_map(), std::nullopt, s,
            {{"nv", double(nv)}, {"np", double(np)}, {"damped", damped ? 1.0 : 0.0}}, seed, names};
  }
  if (name == "multibody" || name == "multibody-self" || name == "multibody-skew") {
    const auto n = static_cast<Index>(param(params, "n", 2));
    if (n < 1) fail(ErrorCode::InvalidArgument, "multibody needs n >= 1");
    const bool skew = name == "multibody-skew" || (name == "multibody" && param(params, "form", 1) != 0);
    Matrix g = Matrix::Zero(1, n);
    g(0, 0) = 1;
    Matrix id = Matrix::Identity(n, n);
    auto iv = interval_from(params, 0, 1);
    std::vector<std::string> names;
    for (Index i = 0; i < n; ++i) names.push_back("q" + std::to_string(i + 1));
    for (Index i = 0; i < n; ++i) names.push_back("p" + std::to_string(i + 1));
    names.push_back("lambda");
    auto pair = skew ? build_multibody_skew(id, id, g, iv) : build_multibody_self(id, id, g, iv);
    return {skew ? "multibody-skew" : "multibody-self", skew ? "multibody-skew" : "multibody-self", pair,
            Matrix::Zero(2 * n + 1, 0), std::nullopt, std::nullopt, {{"n", double(n)}}, std::nullopt, names};
  }
  if (name == "ocp") {
    auto one = MatrixFunction::identity(1);
    auto iv = interval_from(params, 0, 1);
    auto o = build_optimal_control(one, one, one, one, MatrixFunction::zero(1, 1), one, Matrix::Identity(1, 1), iv);
    return {"ocp", "ocp", o.pair, Matrix::Zero(3, 0), std::nullopt, std::nullopt, {}, std::nullopt,
            {"lambda", "x", "u"}};
  }
  fail(ErrorCode::InvalidArgument, "unknown demo model '" + name + "'");
}

}  // namespace structdae
