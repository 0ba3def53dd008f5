#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace solitonforge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Step controls for central-difference differentiation. A zero entry selects
/// the default error-balancing base: eps^(1/3) for first derivatives and
/// eps^(1/4) for second derivatives. The actual step on axis i is
/// base * max(1, |x_i|).
struct FdOptions {
  double first_order_step = 0.0;
  double second_order_step = 0.0;

  double first_step_base() const;
  double second_step_base() const;
};

namespace fd {

double default_first_step();   // eps^(1/3)
double default_second_step();  // eps^(1/4)

using Fn = std::function<double(const Vector&)>;

/// Central difference O(step^2) gradient. Throws std::domain_error if the
/// function is non-finite at any stencil point.
Vector gradient(const Fn& f, const Vector& x, const FdOptions& opts = {});

/// Second-derivative matrix with every (i,j) entry evaluated independently:
/// 3-point stencil on the diagonal, 4-point central stencil off it. Not
/// symmetrized; use hessian() for the production path.
Matrix hessian_raw(const Fn& f, const Vector& x, const FdOptions& opts = {});

/// hessian_raw symmetrized by averaging with its transpose.
Matrix hessian(const Fn& f, const Vector& x, const FdOptions& opts = {});

/// Sum of the diagonal 3-point stencils (trace of the FD Hessian).
double laplacian(const Fn& f, const Vector& x, const FdOptions& opts = {});

}  // namespace fd

/// A scalar function on R^n (n >= 2) with value, gradient and Hessian access.
/// Analytic mode uses caller-supplied closed-form derivatives; finite
/// difference mode falls back to central differences on the evaluator.
/// One-dimensional profiles are a separate type (Profile).
///
/// All accessors are pure and safe to call concurrently. Non-finite values
/// anywhere fail fast with std::domain_error.
class ScalarField {
 public:
  using Evaluator = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  static ScalarField analytic(int dimension, Evaluator value, GradientFn gradient,
                              HessianFn hessian);
  static ScalarField finite_difference(int dimension, Evaluator value,
                                       FdOptions options = {});

  int dimension() const { return dimension_; }
  bool is_analytic() const { return analytic_; }
  const FdOptions& fd_options() const { return fd_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Symmetric as returned (averaged with its transpose in both modes).
  Matrix hessian(const Vector& x) const;
  double laplacian(const Vector& x) const;

 private:
  ScalarField() = default;

  int dimension_ = 0;
  bool analytic_ = false;
  Evaluator value_;
  GradientFn gradient_;
  HessianFn hessian_;
  FdOptions fd_;
};

/// A scalar function of one real variable with first and second derivatives,
/// analytic or central-difference.
class Profile {
 public:
  using Fn = std::function<double(double)>;

  static Profile analytic(Fn value, Fn first, Fn second);
  static Profile finite_difference(Fn value, FdOptions options = {});

  bool is_analytic() const { return analytic_; }

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

 private:
  Profile() = default;

  bool analytic_ = false;
  Fn value_;
  Fn first_;
  Fn second_;
  FdOptions fd_;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Tensor-product evaluation grid. Points are ordered lexicographically by
/// index tuple, axis 0 slowest. An axis with count 1 degenerates to its lower
/// bound.
class GridSpec {
 public:
  GridSpec(std::vector<AxisRange> ranges, std::vector<int> counts);

  int dimension() const { return static_cast<int>(ranges_.size()); }
  long point_count() const { return point_count_; }
  const std::vector<AxisRange>& ranges() const { return ranges_; }
  const std::vector<int>& counts() const { return counts_; }

  double spacing(int axis) const;
  Vector point(long index) const;
  std::vector<Vector> points() const;

 private:
  std::vector<AxisRange> ranges_;
  std::vector<int> counts_;
  long point_count_ = 0;
};

struct FdConsistency {
  double max_gradient_rel_err = 0.0;
  double max_hessian_rel_err = 0.0;
};

/// Compares an analytic field's supplied derivatives against central
/// differences of its evaluator over the given points. Relative errors are
/// normalized by max(1, ||analytic||_inf) per point.
FdConsistency check_fd_consistency(const ScalarField& field,
                                   const std::vector<Vector>& points,
                                   const FdOptions& options = {});

}  // namespace solitonforge
