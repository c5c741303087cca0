#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "structdae/error.hpp"

namespace structdae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Strictly increasing sample points on a compact interval [t0, tf].
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);

  static TimeGrid uniform(double t0, double tf, std::size_t count);

  double t0() const { return points_.front(); }
  double tf() const { return points_.back(); }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t k) const { return points_[k]; }
  std::span<const double> points() const { return points_; }

  bool contains(double t) const;
  bool within(const TimeGrid& other) const;
  /// Same interval with every subinterval split in half.
  TimeGrid refined() const;
  /// Largest k with points[k] <= t, clamped to [0, size-2].
  std::size_t interval_index(double t) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> points_;
};

/// Time-dependent real matrix with an evaluable first derivative.
///
/// Three representations are supported:
///  - Constant: a fixed matrix, derivative exactly zero.
///  - Polynomial: every entry is a polynomial in t (coefficients lowest degree
///    first); values and derivatives are exact.
///  - Sampled: values on a TimeGrid. Order 1 interpolates piecewise linearly.
///    Order 3 is a piecewise cubic Hermite interpolant: either a not-a-knot
///    cubic spline through the values, or, when node derivatives are supplied,
///    the Hermite cubic matching both.
///
/// Instances are immutable and cheap to copy (sampled data is shared).
class MatrixFunction {
 public:
  enum class Kind { Constant, Polynomial, Sampled };

  MatrixFunction() : MatrixFunction(constant(Matrix::Zero(0, 0))) {}

  static MatrixFunction constant(Matrix value);
  static MatrixFunction zero(Eigen::Index rows, Eigen::Index cols);
  static MatrixFunction identity(Eigen::Index n);
  /// `coefficients` holds rows*cols entries in row-major order.
  static MatrixFunction polynomial(Eigen::Index rows, Eigen::Index cols,
                                   std::vector<std::vector<double>> coefficients);
  /// Matrix polynomial sum_k t^k C_k.
  static MatrixFunction polynomial(std::span<const Matrix> matrix_coefficients);
  static MatrixFunction sampled(TimeGrid grid, std::vector<Matrix> values, int order = 3);
  static MatrixFunction hermite(TimeGrid grid, std::vector<Matrix> values,
                                std::vector<Matrix> derivatives);

  Kind kind() const;
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  Matrix eval(double t) const;
  Matrix derivative(double t) const;

  /// Sampling grid for Sampled functions, nullptr otherwise.
  const TimeGrid* grid() const;
  bool has_explicit_derivatives() const;
  int order() const;

  /// Constant value (throws Unsupported for other kinds).
  const Matrix& constant_value() const;
  /// Per-entry coefficient lists, row-major (Polynomial kind only).
  const std::vector<std::vector<double>>& coefficients() const;
  /// Node values / node derivatives (Sampled kind only).
  const std::vector<Matrix>& node_values() const;
  const std::vector<Matrix>& node_derivatives() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_sampled() const { return kind() == Kind::Sampled; }

 private:
  struct Poly {
    std::vector<std::vector<double>> coeffs;
  };
  struct Samples {
    TimeGrid grid;
    std::vector<Matrix> values;
    std::vector<Matrix> slopes;
    int order;
    bool explicit_derivatives;
  };

  MatrixFunction(Eigen::Index rows, Eigen::Index cols,
                 std::variant<Matrix, Poly, std::shared_ptr<const Samples>> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {}

  void check_domain(double t) const;

  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::variant<Matrix, Poly, std::shared_ptr<const Samples>> data_;
};

Matrix eval(const MatrixFunction& f, double t);
Matrix derivative(const MatrixFunction& f, double t);

/// Resample `f` on `grid`. The result agrees with f exactly at the grid points.
/// Order 3 keeps f's derivative at the nodes (Hermite data); order 1 keeps
/// values only.
MatrixFunction sample(const MatrixFunction& f, const TimeGrid& grid, int order = 3);

/// The derivative as a function of its own. Sampled inputs give a sampled
/// function whose values are the node derivatives.
MatrixFunction differentiate(const MatrixFunction& f);

// Pointwise algebra. Constant and polynomial operands stay exact in the
// polynomial ring; any sampled operand makes the result sampled on its grid,
// carrying node derivatives from the product rule.
MatrixFunction operator+(const MatrixFunction& a, const MatrixFunction& b);
MatrixFunction operator-(const MatrixFunction& a, const MatrixFunction& b);
MatrixFunction operator-(const MatrixFunction& a);
MatrixFunction operator*(const MatrixFunction& a, const MatrixFunction& b);
MatrixFunction operator*(double s, const MatrixFunction& a);
MatrixFunction transpose(const MatrixFunction& a);
MatrixFunction block(const MatrixFunction& a, Eigen::Index row, Eigen::Index col,
                     Eigen::Index rows, Eigen::Index cols);
MatrixFunction hstack(const MatrixFunction& a, const MatrixFunction& b);
MatrixFunction vstack(const MatrixFunction& a, const MatrixFunction& b);
MatrixFunction block_diag(const MatrixFunction& a, const MatrixFunction& b);

/// Builds a sampled function on `grid` from a callback returning the value and
/// the derivative at each node.
template <typename F>
MatrixFunction tabulate(const TimeGrid& grid, F&& value_and_derivative) {
  std::vector<Matrix> values;
  std::vector<Matrix> derivs;
  values.reserve(grid.size());
  derivs.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto [v, d] = value_and_derivative(grid[k]);
    values.push_back(std::move(v));
    derivs.push_back(std::move(d));
  }
  return MatrixFunction::hermite(grid, std::move(values), std::move(derivs));
}

/// Time-varying pair (E, A) of square matrix functions on a common interval.
struct MatrixPair {
  MatrixFunction E;
  MatrixFunction A;
  TimeGrid interval;

  MatrixPair(MatrixFunction e, MatrixFunction a, TimeGrid iv);
  Eigen::Index dim() const { return E.rows(); }
  bool is_constant() const { return E.is_constant() && A.is_constant(); }
};

}  // namespace structdae
