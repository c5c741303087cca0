#include "structdae/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace structdae {

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) fail(ErrorCode::InvalidArgument, "time grid needs at least two points");
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k])) fail(ErrorCode::InvalidArgument, "time grid contains a non-finite point");
    if (k > 0 && !(points_[k] > points_[k - 1]))
      fail(ErrorCode::InvalidArgument, "time grid must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double t0, double tf, std::size_t count) {
  if (!(t0 < tf)) fail(ErrorCode::InvalidArgument, "time grid needs t0 < tf");
  if (count < 2) fail(ErrorCode::InvalidArgument, "time grid needs at least two points");
  std::vector<double> pts(count);
  const double h = (tf - t0) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) pts[k] = t0 + h * static_cast<double>(k);
  pts.back() = tf;
  return TimeGrid(std::move(pts));
}

bool TimeGrid::contains(double t) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(t0()), std::abs(tf())});
  return t >= t0() - slack && t <= tf() + slack;
}

bool TimeGrid::within(const TimeGrid& other) const { return other.contains(t0()) && other.contains(tf()); }

TimeGrid TimeGrid::refined() const {
  std::vector<double> pts;
  pts.reserve(2 * points_.size() - 1);
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    pts.push_back(points_[k]);
    pts.push_back(0.5 * (points_[k] + points_[k + 1]));
  }
  pts.push_back(points_.back());
  return TimeGrid(std::move(pts));
}

std::size_t TimeGrid::interval_index(double t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t);
  std::size_t k = it == points_.begin() ? 0 : static_cast<std::size_t>(it - points_.begin()) - 1;
  return std::min(k, points_.size() - 2);
}

// ---------------------------------------------------------------------------
// Interpolation helpers

namespace {

using Index = Eigen::Index;

// Not-a-knot cubic spline slopes at the nodes.
std::vector<Matrix> spline_slopes(const TimeGrid& grid, const std::vector<Matrix>& y) {
  const std::size_t n = grid.size();
  std::vector<double> h(n - 1);
  std::vector<Matrix> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = grid[i + 1] - grid[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  std::vector<Matrix> s(n);
  if (n == 2) {
    s[0] = delta[0];
    s[1] = delta[0];
    return s;
  }
  if (n == 3) {
    // The not-a-knot spline through three points is the interpolating parabola.
    Matrix c = (delta[1] - delta[0]) / (h[0] + h[1]);
    s[0] = delta[0] - h[0] * c;
    s[1] = delta[0] + h[0] * c;
    s[2] = delta[0] + (h[0] + 2.0 * h[1]) * c;
    return s;
  }

  // Tridiagonal system: sub[i] s[i-1] + diag[i] s[i] + sup[i] s[i+1] = rhs[i].
  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0);
  std::vector<Matrix> rhs(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sub[i] = h[i];
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    sup[i] = h[i - 1];
    rhs[i] = 3.0 * (h[i] * delta[i - 1] + h[i - 1] * delta[i]);
  }
  {
    // Third-derivative continuity at the second node, with s[2] eliminated
    // through the first interior row.
    const double a = h[0], b = h[1];
    diag[0] = 1.0 / (a * a) + 1.0 / (a * b);
    sup[0] = 1.0 / (a * a) - 1.0 / (b * b) + 2.0 * (a + b) / (a * b * b);
    rhs[0] = 2.0 * delta[0] / (a * a) - 2.0 * delta[1] / (b * b) + rhs[1] / (a * b * b);
  }
  {
    const double a = h[n - 3], b = h[n - 2];
    sub[n - 1] = -2.0 * (a + b) / (a * a * b) + 1.0 / (a * a) - 1.0 / (b * b);
    diag[n - 1] = -1.0 / (a * b) - 1.0 / (b * b);
    rhs[n - 1] = 2.0 * delta[n - 3] / (a * a) - 2.0 * delta[n - 2] / (b * b) - rhs[n - 2] / (a * a * b);
  }
  // Thomas algorithm with matrix-valued right-hand sides.
  std::vector<double> c(n, 0.0);
  c[0] = sup[0] / diag[0];
  rhs[0] /= diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - sub[i] * c[i - 1];
    if (i + 1 < n) c[i] = sup[i] / m;
    rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / m;
  }
  s[n - 1] = rhs[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) s[i] = rhs[i] - c[i] * s[i + 1];
  return s;
}

std::vector<Matrix> linear_slopes(const TimeGrid& grid, const std::vector<Matrix>& y) {
  const std::size_t n = grid.size();
  std::vector<Matrix> s(n);
  for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (y[i + 1] - y[i]) / (grid[i + 1] - grid[i]);
  s[n - 1] = s[n - 2];
  return s;
}

// Index of t if it coincides with a node.
std::optional<std::size_t> node_index(const TimeGrid& grid, double t) {
  auto pts = grid.points();
  auto it = std::lower_bound(pts.begin(), pts.end(), t);
  if (it != pts.end() && *it == t) return static_cast<std::size_t>(it - pts.begin());
  return std::nullopt;
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

double horner_derivative(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) v = v * t + static_cast<double>(k) * c[k];
  return v;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b, double sb) {
  std::vector<double> r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sb * b[i];
  return r;
}

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorCode::InvalidArgument, std::string(what) + " contains non-finite entries");
}

}  // namespace

// ---------------------------------------------------------------------------
// MatrixFunction construction

MatrixFunction MatrixFunction::constant(Matrix value) {
  check_finite(value, "constant matrix");
  const Index r = value.rows(), c = value.cols();
  return MatrixFunction(r, c, std::move(value));
}

MatrixFunction MatrixFunction::zero(Index rows, Index cols) { return constant(Matrix::Zero(rows, cols)); }

MatrixFunction MatrixFunction::identity(Index n) { return constant(Matrix::Identity(n, n)); }

MatrixFunction MatrixFunction::polynomial(Index rows, Index cols, std::vector<std::vector<double>> coefficients) {
  if (rows < 0 || cols < 0 || static_cast<Index>(coefficients.size()) != rows * cols)
    fail(ErrorCode::Dimension, "polynomial coefficient list does not match the declared shape");
  for (const auto& c : coefficients)
    for (double v : c)
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "polynomial coefficient is not finite");
  return MatrixFunction(rows, cols, Poly{std::move(coefficients)});
}

MatrixFunction MatrixFunction::polynomial(std::span<const Matrix> mc) {
  if (mc.empty()) fail(ErrorCode::InvalidArgument, "matrix polynomial needs at least one coefficient");
  const Index r = mc[0].rows(), c = mc[0].cols();
  std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(r * c), std::vector<double>(mc.size()));
  for (std::size_t k = 0; k < mc.size(); ++k) {
    if (mc[k].rows() != r || mc[k].cols() != c) fail(ErrorCode::Dimension, "matrix polynomial coefficients differ in shape");
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) coeffs[static_cast<std::size_t>(i * c + j)][k] = mc[k](i, j);
  }
  return polynomial(r, c, std::move(coeffs));
}

MatrixFunction MatrixFunction::sampled(TimeGrid grid, std::vector<Matrix> values, int order) {
  if (order != 1 && order != 3) fail(ErrorCode::InvalidArgument, "interpolation order must be 1 or 3");
  if (values.size() != grid.size()) fail(ErrorCode::Dimension, "number of samples differs from number of grid points");
  const Index r = values[0].rows(), c = values[0].cols();
  for (const auto& v : values) {
    if (v.rows() != r || v.cols() != c) fail(ErrorCode::Dimension, "samples differ in shape");
    check_finite(v, "sample");
  }
  auto slopes = order == 3 ? spline_slopes(grid, values) : linear_slopes(grid, values);
  auto data = std::make_shared<const Samples>(Samples{std::move(grid), std::move(values), std::move(slopes), order, false});
  return MatrixFunction(r, c, std::move(data));
}

MatrixFunction MatrixFunction::hermite(TimeGrid grid, std::vector<Matrix> values, std::vector<Matrix> derivatives) {
  if (values.size() != grid.size() || derivatives.size() != grid.size())
    fail(ErrorCode::Dimension, "number of samples differs from number of grid points");
  const Index r = values[0].rows(), c = values[0].cols();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].rows() != r || values[k].cols() != c || derivatives[k].rows() != r || derivatives[k].cols() != c)
      fail(ErrorCode::Dimension, "samples differ in shape");
    check_finite(values[k], "sample");
    check_finite(derivatives[k], "sample derivative");
  }
  auto data = std::make_shared<const Samples>(
      Samples{std::move(grid), std::move(values), std::move(derivatives), 3, true});
  return MatrixFunction(r, c, std::move(data));
}

MatrixFunction::Kind MatrixFunction::kind() const {
  switch (data_.index()) {
    case 0: return Kind::Constant;
    case 1: return Kind::Polynomial;
    default: return Kind::Sampled;
  }
}

const TimeGrid* MatrixFunction::grid() const {
  if (auto* s = std::get_if<std::shared_ptr<const Samples>>(&data_)) return &(*s)->grid;
  return nullptr;
}

bool MatrixFunction::has_explicit_derivatives() const {
  if (auto* s = std::get_if<std::shared_ptr<const Samples>>(&data_)) return (*s)->explicit_derivatives;
  return false;
}

int MatrixFunction::order() const {
  if (auto* s = std::get_if<std::shared_ptr<const Samples>>(&data_)) return (*s)->order;
  return 3;
}

const Matrix& MatrixFunction::constant_value() const {
  if (auto* m = std::get_if<Matrix>(&data_)) return *m;
  fail(ErrorCode::Unsupported, "matrix function is not constant");
}

const std::vector<std::vector<double>>& MatrixFunction::coefficients() const {
  if (auto* p = std::get_if<Poly>(&data_)) return p->coeffs;
  fail(ErrorCode::Unsupported, "matrix function is not polynomial");
}

const std::vector<Matrix>& MatrixFunction::node_values() const {
  if (auto* s = std::get_if<std::shared_ptr<const Samples>>(&data_)) return (*s)->values;
  fail(ErrorCode::Unsupported, "matrix function is not sampled");
}

const std::vector<Matrix>& MatrixFunction::node_derivatives() const {
  if (auto* s = std::get_if<std::shared_ptr<const Samples>>(&data_)) return (*s)->slopes;
  fail(ErrorCode::Unsupported, "matrix function is not sampled");
}

void MatrixFunction::check_domain(double t) const {
  if (!std::isfinite(t)) fail(ErrorCode::Domain, "evaluation time is not finite");
  if (const TimeGrid* g = grid(); g && !g->contains(t)) {
    std::ostringstream os;
    os << "t = " << t << " outside sampled interval [" << g->t0() << ", " << g->tf() << "]";
    fail(ErrorCode::Domain, os.str());
  }
}

// ---------------------------------------------------------------------------
// Evaluation

Matrix MatrixFunction::eval(double t) const {
  check_domain(t);
  if (auto* m = std::get_if<Matrix>(&data_)) return *m;
  if (auto* p = std::get_if<Poly>(&data_)) {
    Matrix out(rows_, cols_);
    for (Index i = 0; i < rows_; ++i)
      for (Index j = 0; j < cols_; ++j) out(i, j) = horner(p->coeffs[static_cast<std::size_t>(i * cols_ + j)], t);
    return out;
  }
  const Samples& s = *std::get<std::shared_ptr<const Samples>>(data_);
  if (auto k = node_index(s.grid, t)) return s.values[*k];
  t = std::clamp(t, s.grid.t0(), s.grid.tf());
  const std::size_t k = s.grid.interval_index(t);
  const double h = s.grid[k + 1] - s.grid[k];
  const double tau = (t - s.grid[k]) / h;
  if (s.order == 1) return (1.0 - tau) * s.values[k] + tau * s.values[k + 1];
  const double tau2 = tau * tau, tau3 = tau2 * tau;
  return (2 * tau3 - 3 * tau2 + 1) * s.values[k] + (tau3 - 2 * tau2 + tau) * h * s.slopes[k] +
         (-2 * tau3 + 3 * tau2) * s.values[k + 1] + (tau3 - tau2) * h * s.slopes[k + 1];
}

Matrix MatrixFunction::derivative(double t) const {
  check_domain(t);
  if (std::holds_alternative<Matrix>(data_)) return Matrix::Zero(rows_, cols_);
  if (auto* p = std::get_if<Poly>(&data_)) {
    Matrix out(rows_, cols_);
    for (Index i = 0; i < rows_; ++i)
      for (Index j = 0; j < cols_; ++j)
        out(i, j) = horner_derivative(p->coeffs[static_cast<std::size_t>(i * cols_ + j)], t);
    return out;
  }
  const Samples& s = *std::get<std::shared_ptr<const Samples>>(data_);
  if (auto k = node_index(s.grid, t)) return s.slopes[*k];
  t = std::clamp(t, s.grid.t0(), s.grid.tf());
  const std::size_t k = s.grid.interval_index(t);
  const double h = s.grid[k + 1] - s.grid[k];
  if (s.order == 1) return (s.values[k + 1] - s.values[k]) / h;
  const double tau = (t - s.grid[k]) / h;
  const double tau2 = tau * tau;
  return (6 * tau2 - 6 * tau) / h * s.values[k] + (3 * tau2 - 4 * tau + 1) * s.slopes[k] +
         (-6 * tau2 + 6 * tau) / h * s.values[k + 1] + (3 * tau2 - 2 * tau) * s.slopes[k + 1];
}

Matrix eval(const MatrixFunction& f, double t) { return f.eval(t); }
Matrix derivative(const MatrixFunction& f, double t) { return f.derivative(t); }

MatrixFunction sample(const MatrixFunction& f, const TimeGrid& grid, int order) {
  if (const TimeGrid* g = f.grid(); g && !grid.within(*g))
    fail(ErrorCode::Domain, "sampling grid lies outside the function's interval");
  std::vector<Matrix> values;
  values.reserve(grid.size());
  for (double t : grid.points()) values.push_back(f.eval(t));
  if (order == 1) return MatrixFunction::sampled(grid, std::move(values), 1);
  if (order != 3) fail(ErrorCode::InvalidArgument, "interpolation order must be 1 or 3");
  std::vector<Matrix> derivs;
  derivs.reserve(grid.size());
  for (double t : grid.points()) derivs.push_back(f.derivative(t));
  return MatrixFunction::hermite(grid, std::move(values), std::move(derivs));
}

MatrixFunction differentiate(const MatrixFunction& f) {
  switch (f.kind()) {
    case MatrixFunction::Kind::Constant: return MatrixFunction::zero(f.rows(), f.cols());
    case MatrixFunction::Kind::Polynomial: {
      auto coeffs = f.coefficients();
      for (auto& c : coeffs) {
        if (c.empty()) continue;
        for (std::size_t k = 1; k < c.size(); ++k) c[k - 1] = static_cast<double>(k) * c[k];
        c.pop_back();
      }
      return MatrixFunction::polynomial(f.rows(), f.cols(), std::move(coeffs));
    }
    case MatrixFunction::Kind::Sampled: break;
  }
  return MatrixFunction::sampled(*f.grid(), f.node_derivatives(), f.order());
}

// ---------------------------------------------------------------------------
// Algebra

namespace {

using Kind = MatrixFunction::Kind;

const TimeGrid* common_grid(const MatrixFunction& a, const MatrixFunction& b) {
  const TimeGrid* ga = a.grid();
  const TimeGrid* gb = b.grid();
  if (ga && gb && !(*ga == *gb)) fail(ErrorCode::Domain, "sampled operands live on different grids");
  return ga ? ga : gb;
}

std::vector<std::vector<double>> as_poly(const MatrixFunction& f) {
  if (f.kind() == Kind::Polynomial) return f.coefficients();
  const Matrix& m = f.constant_value();
  std::vector<std::vector<double>> c(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) c[static_cast<std::size_t>(i * m.cols() + j)] = {m(i, j)};
  return c;
}

// Rebuilds a sampled function from node data, keeping order-1 semantics.
MatrixFunction from_nodes(const MatrixFunction& like, std::vector<Matrix> values, std::vector<Matrix> slopes) {
  if (like.order() == 1) return MatrixFunction::sampled(*like.grid(), std::move(values), 1);
  return MatrixFunction::hermite(*like.grid(), std::move(values), std::move(slopes));
}

template <typename Op>
MatrixFunction map_nodes(const MatrixFunction& a, Op op) {
  std::vector<Matrix> v, d;
  for (const auto& m : a.node_values()) v.push_back(op(m));
  for (const auto& m : a.node_derivatives()) d.push_back(op(m));
  return from_nodes(a, std::move(v), std::move(d));
}

MatrixFunction add_scaled(const MatrixFunction& a, const MatrixFunction& b, double sb) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorCode::Dimension, "shape mismatch in matrix function sum");
  if (const TimeGrid* g = common_grid(a, b)) {
    return tabulate(*g, [&](double t) {
      return std::pair{Matrix(a.eval(t) + sb * b.eval(t)), Matrix(a.derivative(t) + sb * b.derivative(t))};
    });
  }
  if (a.is_constant() && b.is_constant()) return MatrixFunction::constant(a.constant_value() + sb * b.constant_value());
  auto ca = as_poly(a), cb = as_poly(b);
  for (std::size_t k = 0; k < ca.size(); ++k) ca[k] = poly_add(ca[k], cb[k], sb);
  return MatrixFunction::polynomial(a.rows(), a.cols(), std::move(ca));
}

}  // namespace

MatrixFunction operator+(const MatrixFunction& a, const MatrixFunction& b) { return add_scaled(a, b, 1.0); }
MatrixFunction operator-(const MatrixFunction& a, const MatrixFunction& b) { return add_scaled(a, b, -1.0); }
MatrixFunction operator-(const MatrixFunction& a) { return -1.0 * a; }

MatrixFunction operator*(double s, const MatrixFunction& a) {
  switch (a.kind()) {
    case Kind::Constant: return MatrixFunction::constant(s * a.constant_value());
    case Kind::Polynomial: {
      auto c = a.coefficients();
      for (auto& e : c)
        for (double& v : e) v *= s;
      return MatrixFunction::polynomial(a.rows(), a.cols(), std::move(c));
    }
    case Kind::Sampled: break;
  }
  return map_nodes(a, [s](const Matrix& m) { return Matrix(s * m); });
}

MatrixFunction operator*(const MatrixFunction& a, const MatrixFunction& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::Dimension, "shape mismatch in matrix function product");
  if (const TimeGrid* g = common_grid(a, b)) {
    return tabulate(*g, [&](double t) {
      Matrix av = a.eval(t), bv = b.eval(t);
      Matrix d = a.derivative(t) * bv + av * b.derivative(t);
      return std::pair{Matrix(av * bv), std::move(d)};
    });
  }
  if (a.is_constant() && b.is_constant()) return MatrixFunction::constant(a.constant_value() * b.constant_value());
  const Index r = a.rows(), c = b.cols(), inner = a.cols();
  auto ca = as_poly(a), cb = as_poly(b);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(r * c));
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) {
      std::vector<double> acc;
      for (Index k = 0; k < inner; ++k)
        acc = poly_add(acc, poly_mul(ca[static_cast<std::size_t>(i * inner + k)], cb[static_cast<std::size_t>(k * c + j)]), 1.0);
      out[static_cast<std::size_t>(i * c + j)] = std::move(acc);
    }
  return MatrixFunction::polynomial(r, c, std::move(out));
}

MatrixFunction transpose(const MatrixFunction& a) {
  switch (a.kind()) {
    case Kind::Constant: return MatrixFunction::constant(a.constant_value().transpose());
    case Kind::Polynomial: {
      const auto& c = a.coefficients();
      std::vector<std::vector<double>> t(c.size());
      for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
          t[static_cast<std::size_t>(j * a.rows() + i)] = c[static_cast<std::size_t>(i * a.cols() + j)];
      return MatrixFunction::polynomial(a.cols(), a.rows(), std::move(t));
    }
    case Kind::Sampled: break;
  }
  return map_nodes(a, [](const Matrix& m) { return Matrix(m.transpose()); });
}

MatrixFunction block(const MatrixFunction& a, Index row, Index col, Index rows, Index cols) {
  if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > a.rows() || col + cols > a.cols())
    fail(ErrorCode::Dimension, "block lies outside the matrix function");
  switch (a.kind()) {
    case Kind::Constant: return MatrixFunction::constant(a.constant_value().block(row, col, rows, cols));
    case Kind::Polynomial: {
      const auto& c = a.coefficients();
      std::vector<std::vector<double>> b(static_cast<std::size_t>(rows * cols));
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
          b[static_cast<std::size_t>(i * cols + j)] = c[static_cast<std::size_t>((row + i) * a.cols() + col + j)];
      return MatrixFunction::polynomial(rows, cols, std::move(b));
    }
    case Kind::Sampled: break;
  }
  return map_nodes(a, [&](const Matrix& m) { return Matrix(m.block(row, col, rows, cols)); });
}

namespace {

template <typename Assemble>
MatrixFunction assemble(const MatrixFunction& a, const MatrixFunction& b, Index rows, Index cols, Assemble place) {
  if (const TimeGrid* g = common_grid(a, b)) {
    return tabulate(*g, [&](double t) {
      Matrix v = Matrix::Zero(rows, cols), d = Matrix::Zero(rows, cols);
      place(v, a.eval(t), b.eval(t));
      place(d, a.derivative(t), b.derivative(t));
      return std::pair{std::move(v), std::move(d)};
    });
  }
  if (a.is_constant() && b.is_constant()) {
    Matrix v = Matrix::Zero(rows, cols);
    place(v, a.constant_value(), b.constant_value());
    return MatrixFunction::constant(std::move(v));
  }
  // Polynomial: place coefficient-wise.
  auto ca = as_poly(a), cb = as_poly(b);
  std::size_t degree = 1;
  for (const auto& c : ca) degree = std::max(degree, c.size());
  for (const auto& c : cb) degree = std::max(degree, c.size());
  std::vector<Matrix> coeffs;
  for (std::size_t k = 0; k < degree; ++k) {
    Matrix ma = Matrix::Zero(a.rows(), a.cols()), mb = Matrix::Zero(b.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) {
        const auto& c = ca[static_cast<std::size_t>(i * a.cols() + j)];
        if (k < c.size()) ma(i, j) = c[k];
      }
    for (Index i = 0; i < b.rows(); ++i)
      for (Index j = 0; j < b.cols(); ++j) {
        const auto& c = cb[static_cast<std::size_t>(i * b.cols() + j)];
        if (k < c.size()) mb(i, j) = c[k];
      }
    Matrix v = Matrix::Zero(rows, cols);
    place(v, ma, mb);
    coeffs.push_back(std::move(v));
  }
  return MatrixFunction::polynomial(coeffs);
}

}  // namespace

MatrixFunction hstack(const MatrixFunction& a, const MatrixFunction& b) {
  if (a.rows() != b.rows()) fail(ErrorCode::Dimension, "hstack needs equal row counts");
  return assemble(a, b, a.rows(), a.cols() + b.cols(), [&](Matrix& out, const Matrix& x, const Matrix& y) {
    out.leftCols(a.cols()) = x;
    out.rightCols(b.cols()) = y;
  });
}

MatrixFunction vstack(const MatrixFunction& a, const MatrixFunction& b) {
  if (a.cols() != b.cols()) fail(ErrorCode::Dimension, "vstack needs equal column counts");
  return assemble(a, b, a.rows() + b.rows(), a.cols(), [&](Matrix& out, const Matrix& x, const Matrix& y) {
    out.topRows(a.rows()) = x;
    out.bottomRows(b.rows()) = y;
  });
}

MatrixFunction block_diag(const MatrixFunction& a, const MatrixFunction& b) {
  return assemble(a, b, a.rows() + b.rows(), a.cols() + b.cols(), [&](Matrix& out, const Matrix& x, const Matrix& y) {
    out.topLeftCorner(a.rows(), a.cols()) = x;
    out.bottomRightCorner(b.rows(), b.cols()) = y;
  });
}

// ---------------------------------------------------------------------------

MatrixPair::MatrixPair(MatrixFunction e, MatrixFunction a, TimeGrid iv)
    : E(std::move(e)), A(std::move(a)), interval(std::move(iv)) {
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows())
    fail(ErrorCode::Dimension, "E and A must be square of equal size");
  for (const MatrixFunction* f : {&E, &A})
    if (const TimeGrid* g = f->grid(); g && !interval.within(*g))
      fail(ErrorCode::Domain, "pair interval extends beyond the sampled coefficients");
}

}  // namespace structdae
