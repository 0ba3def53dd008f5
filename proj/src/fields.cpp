#include "solitonforge/fields.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace solitonforge {

namespace {

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string("non-finite value in ") + what);
  }
  return v;
}

void check_dimension(int dim, const Vector& x, const char* what) {
  if (x.size() != dim) {
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(x.size()) + ", field has " +
                                std::to_string(dim));
  }
}

double step_for(double base, double coord) {
  return base * std::max(1.0, std::abs(coord));
}

}  // namespace

double fd::default_first_step() {
  return std::cbrt(std::numeric_limits<double>::epsilon());
}

double fd::default_second_step() {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25);
}

double FdOptions::first_step_base() const {
  if (first_order_step < 0.0 || !std::isfinite(first_order_step)) {
    throw std::invalid_argument("FdOptions: first_order_step must be >= 0 and finite");
  }
  return first_order_step > 0.0 ? first_order_step : fd::default_first_step();
}

double FdOptions::second_step_base() const {
  if (second_order_step < 0.0 || !std::isfinite(second_order_step)) {
    throw std::invalid_argument("FdOptions: second_order_step must be >= 0 and finite");
  }
  return second_order_step > 0.0 ? second_order_step : fd::default_second_step();
}

namespace fd {

namespace {

double sample(const Fn& f, const Vector& x) {
  return finite_or_throw(f(x), "finite-difference stencil");
}

}  // namespace

Vector gradient(const Fn& f, const Vector& x, const FdOptions& opts) {
  const double base = opts.first_step_base();
  const auto n = x.size();
  Vector g(n);
  Vector p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step_for(base, x[i]);
    p[i] = x[i] + h;
    const double fp = sample(f, p);
    p[i] = x[i] - h;
    const double fm = sample(f, p);
    p[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix hessian_raw(const Fn& f, const Vector& x, const FdOptions& opts) {
  const double base = opts.second_step_base();
  const auto n = x.size();
  Matrix hess(n, n);
  const double f0 = sample(f, x);
  Vector p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hi = step_for(base, x[i]);
    p[i] = x[i] + hi;
    const double fp = sample(f, p);
    p[i] = x[i] - hi;
    const double fm = sample(f, p);
    p[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double hj = step_for(base, x[j]);
      p[i] = x[i] + hi;
      p[j] = x[j] + hj;
      const double fpp = sample(f, p);
      p[j] = x[j] - hj;
      const double fpm = sample(f, p);
      p[i] = x[i] - hi;
      p[j] = x[j] + hj;
      const double fmp = sample(f, p);
      p[j] = x[j] - hj;
      const double fmm = sample(f, p);
      p[i] = x[i];
      p[j] = x[j];
      hess(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
    }
  }
  return hess;
}

Matrix hessian(const Fn& f, const Vector& x, const FdOptions& opts) {
  Matrix raw = hessian_raw(f, x, opts);
  return 0.5 * (raw + raw.transpose()).eval();
}

double laplacian(const Fn& f, const Vector& x, const FdOptions& opts) {
  const double base = opts.second_step_base();
  const double f0 = sample(f, x);
  Vector p = x;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step_for(base, x[i]);
    p[i] = x[i] + h;
    const double fp = sample(f, p);
    p[i] = x[i] - h;
    const double fm = sample(f, p);
    p[i] = x[i];
    acc += (fp - 2.0 * f0 + fm) / (h * h);
  }
  return acc;
}

}  // namespace fd

ScalarField ScalarField::analytic(int dimension, Evaluator value, GradientFn gradient,
                                  HessianFn hessian) {
  if (dimension < 2) {
    throw std::invalid_argument("ScalarField: dimension must be >= 2");
  }
  if (!value || !gradient || !hessian) {
    throw std::invalid_argument("ScalarField::analytic: missing evaluator or derivative");
  }
  ScalarField f;
  f.dimension_ = dimension;
  f.analytic_ = true;
  f.value_ = std::move(value);
  f.gradient_ = std::move(gradient);
  f.hessian_ = std::move(hessian);
  return f;
}

ScalarField ScalarField::finite_difference(int dimension, Evaluator value,
                                           FdOptions options) {
  if (dimension < 2) {
    throw std::invalid_argument("ScalarField: dimension must be >= 2");
  }
  if (!value) {
    throw std::invalid_argument("ScalarField::finite_difference: missing evaluator");
  }
  options.first_step_base();
  options.second_step_base();
  ScalarField f;
  f.dimension_ = dimension;
  f.analytic_ = false;
  f.value_ = std::move(value);
  f.fd_ = options;
  return f;
}

double ScalarField::value(const Vector& x) const {
  check_dimension(dimension_, x, "ScalarField::value");
  return finite_or_throw(value_(x), "ScalarField::value");
}

Vector ScalarField::gradient(const Vector& x) const {
  check_dimension(dimension_, x, "ScalarField::gradient");
  Vector g = analytic_ ? gradient_(x) : fd::gradient(value_, x, fd_);
  if (g.size() != dimension_) {
    throw std::domain_error("ScalarField::gradient: wrong gradient dimension");
  }
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    finite_or_throw(g[i], "ScalarField::gradient");
  }
  return g;
}

Matrix ScalarField::hessian(const Vector& x) const {
  check_dimension(dimension_, x, "ScalarField::hessian");
  Matrix h = analytic_ ? hessian_(x) : fd::hessian_raw(value_, x, fd_);
  if (h.rows() != dimension_ || h.cols() != dimension_) {
    throw std::domain_error("ScalarField::hessian: wrong Hessian shape");
  }
  h = 0.5 * (h + h.transpose()).eval();
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      finite_or_throw(h(i, j), "ScalarField::hessian");
    }
  }
  return h;
}

double ScalarField::laplacian(const Vector& x) const {
  check_dimension(dimension_, x, "ScalarField::laplacian");
  if (analytic_) {
    return finite_or_throw(hessian_(x).trace(), "ScalarField::laplacian");
  }
  return finite_or_throw(fd::laplacian(value_, x, fd_), "ScalarField::laplacian");
}

Profile Profile::analytic(Fn value, Fn first, Fn second) {
  if (!value || !first || !second) {
    throw std::invalid_argument("Profile::analytic: missing evaluator or derivative");
  }
  Profile p;
  p.analytic_ = true;
  p.value_ = std::move(value);
  p.first_ = std::move(first);
  p.second_ = std::move(second);
  return p;
}

Profile Profile::finite_difference(Fn value, FdOptions options) {
  if (!value) {
    throw std::invalid_argument("Profile::finite_difference: missing evaluator");
  }
  options.first_step_base();
  options.second_step_base();
  Profile p;
  p.analytic_ = false;
  p.value_ = std::move(value);
  p.fd_ = options;
  return p;
}

double Profile::value(double t) const {
  return finite_or_throw(value_(t), "Profile::value");
}

double Profile::derivative(double t) const {
  if (analytic_) {
    return finite_or_throw(first_(t), "Profile::derivative");
  }
  const double h = step_for(fd_.first_step_base(), t);
  const double fp = finite_or_throw(value_(t + h), "Profile::derivative");
  const double fm = finite_or_throw(value_(t - h), "Profile::derivative");
  return (fp - fm) / (2.0 * h);
}

double Profile::second_derivative(double t) const {
  if (analytic_) {
    return finite_or_throw(second_(t), "Profile::second_derivative");
  }
  const double h = step_for(fd_.second_step_base(), t);
  const double f0 = finite_or_throw(value_(t), "Profile::second_derivative");
  const double fp = finite_or_throw(value_(t + h), "Profile::second_derivative");
  const double fm = finite_or_throw(value_(t - h), "Profile::second_derivative");
  return (fp - 2.0 * f0 + fm) / (h * h);
}

GridSpec::GridSpec(std::vector<AxisRange> ranges, std::vector<int> counts)
    : ranges_(std::move(ranges)), counts_(std::move(counts)) {
  if (ranges_.empty() || ranges_.size() != counts_.size()) {
    throw std::invalid_argument("GridSpec: ranges and counts must be non-empty and equal-sized");
  }
  point_count_ = 1;
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (counts_[i] < 1) {
      throw std::invalid_argument("GridSpec: point count must be >= 1 per axis");
    }
    if (!(ranges_[i].lo <= ranges_[i].hi) || !std::isfinite(ranges_[i].lo) ||
        !std::isfinite(ranges_[i].hi)) {
      throw std::invalid_argument("GridSpec: axis range must be finite with lo <= hi");
    }
    point_count_ *= counts_[i];
  }
}

double GridSpec::spacing(int axis) const {
  if (axis < 0 || axis >= dimension()) {
    throw std::invalid_argument("GridSpec::spacing: axis out of range");
  }
  if (counts_[axis] == 1) return 0.0;
  return (ranges_[axis].hi - ranges_[axis].lo) / (counts_[axis] - 1);
}

Vector GridSpec::point(long index) const {
  if (index < 0 || index >= point_count_) {
    throw std::invalid_argument("GridSpec::point: index out of range");
  }
  const int n = dimension();
  Vector x(n);
  long rem = index;
  for (int axis = n - 1; axis >= 0; --axis) {
    const long k = rem % counts_[axis];
    rem /= counts_[axis];
    x[axis] = counts_[axis] == 1 ? ranges_[axis].lo
                                 : ranges_[axis].lo + k * spacing(axis);
  }
  return x;
}

std::vector<Vector> GridSpec::points() const {
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(point_count_));
  for (long i = 0; i < point_count_; ++i) {
    pts.push_back(point(i));
  }
  return pts;
}

FdConsistency check_fd_consistency(const ScalarField& field,
                                   const std::vector<Vector>& points,
                                   const FdOptions& options) {
  if (!field.is_analytic()) {
    throw std::invalid_argument("check_fd_consistency: field must be analytic");
  }
  auto evaluator = [&field](const Vector& x) { return field.value(x); };
  FdConsistency out;
  for (const Vector& x : points) {
    const Vector ga = field.gradient(x);
    const Vector gn = fd::gradient(evaluator, x, options);
    const double gscale = std::max(1.0, ga.cwiseAbs().maxCoeff());
    out.max_gradient_rel_err =
        std::max(out.max_gradient_rel_err, (ga - gn).cwiseAbs().maxCoeff() / gscale);

    const Matrix ha = field.hessian(x);
    const Matrix hn = fd::hessian(evaluator, x, options);
    const double hscale = std::max(1.0, ha.cwiseAbs().maxCoeff());
    out.max_hessian_rel_err =
        std::max(out.max_hessian_rel_err, (ha - hn).cwiseAbs().maxCoeff() / hscale);
  }
  return out;
}

}  // namespace solitonforge
