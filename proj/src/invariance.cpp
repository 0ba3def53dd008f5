#include "solitonforge/invariance.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace solitonforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void canonicalize_sign(Vector& d) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::abs(d[i]) > 1e-12) {
      if (d[i] < 0.0) d = -d;
      return;
    }
  }
}

double angle_to(const Vector& unit_g, const Vector& d) {
  const double dot = unit_g.dot(d);
  const Vector folded = dot < 0.0 ? Vector(-unit_g) : unit_g;
  const double perp = (folded - folded.dot(d) * d).norm();
  return std::asin(std::min(1.0, perp));
}

}  // namespace

std::string_view to_string(InvarianceVerdict v) {
  switch (v) {
    case InvarianceVerdict::Invariant: return "invariant";
    case InvarianceVerdict::NotInvariant: return "not_invariant";
    case InvarianceVerdict::Degenerate: return "degenerate";
  }
  return "unknown";
}

InvarianceFit fit_gradient_directions(const std::vector<Vector>& gradients, double tol) {
  if (gradients.empty()) {
    throw std::invalid_argument("fit_gradient_directions: no gradient samples");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("fit_gradient_directions: tolerance must be finite and > 0");
  }
  const auto n = gradients.front().size();
  for (const Vector& g : gradients) {
    if (g.size() != n) {
      throw std::invalid_argument("fit_gradient_directions: inconsistent dimensions");
    }
  }

  double gmax = 0.0;
  for (const Vector& g : gradients) gmax = std::max(gmax, g.norm());
  const double cutoff = kGradientDegeneracyRel * gmax;

  std::vector<Vector> usable;
  for (const Vector& g : gradients) {
    if (gmax > 0.0 && g.norm() >= cutoff && g.norm() > 0.0) {
      usable.push_back(g.normalized());
    }
  }

  InvarianceFit fit;
  fit.tolerance = tol;
  fit.usable_points = static_cast<long>(usable.size());
  fit.direction = Vector::Zero(n);
  fit.max_angular_residual = 0.0;

  const ProportionalityFit prop = proportionality_from_gradients(gradients);
  fit.proportionality = prop.c;
  fit.proportionality_residual = prop.residual;

  if (fit.usable_points < static_cast<long>(n) + 1) {
    fit.verdict = InvarianceVerdict::Degenerate;
    return fit;
  }

  Matrix outer = Matrix::Zero(n, n);
  for (const Vector& u : usable) outer += u * u.transpose();
  outer /= static_cast<double>(usable.size());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(outer);
  Vector d = eig.eigenvectors().col(n - 1);
  d.normalize();
  canonicalize_sign(d);
  fit.direction = d;

  double worst = 0.0;
  for (const Vector& u : usable) worst = std::max(worst, angle_to(u, d));
  fit.max_angular_residual = worst;
  fit.verdict = worst <= tol ? InvarianceVerdict::Invariant : InvarianceVerdict::NotInvariant;
  return fit;
}

InvarianceFit detect_translation_invariance(const ScalarField& f, const GridSpec& grid,
                                            double tol) {
  if (grid.dimension() != f.dimension()) {
    throw std::invalid_argument("detect_translation_invariance: grid dimension mismatch");
  }
  std::vector<Vector> gradients;
  gradients.reserve(static_cast<std::size_t>(grid.point_count()));
  for (long i = 0; i < grid.point_count(); ++i) {
    gradients.push_back(f.gradient(grid.point(i)));
  }
  return fit_gradient_directions(gradients, tol);
}

ProportionalityFit proportionality_from_gradients(const std::vector<Vector>& gradients) {
  if (gradients.empty()) {
    throw std::invalid_argument("proportionality_from_gradients: no gradient samples");
  }
  const auto n = gradients.front().size();

  double gmax = 0.0;
  for (const Vector& g : gradients) gmax = std::max(gmax, g.cwiseAbs().maxCoeff());
  const double cutoff = 1e-8 * gmax;
  const double scale = gmax > 0.0 ? gmax : 1.0;

  ProportionalityFit fit;
  fit.c = Matrix::Constant(n, n, kNaN);
  fit.residual = Matrix::Constant(n, n, kNaN);
  fit.c.diagonal().setOnes();
  fit.residual.diagonal().setZero();

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double num = 0.0;
      double den = 0.0;
      bool any = false;
      for (const Vector& g : gradients) {
        if (gmax == 0.0 || std::abs(g[j]) <= cutoff) continue;
        num += g[i] * g[j];
        den += g[j] * g[j];
        any = true;
      }
      if (!any || den == 0.0) continue;
      const double cij = num / den;
      double worst = 0.0;
      for (const Vector& g : gradients) {
        if (std::abs(g[j]) <= cutoff) continue;
        worst = std::max(worst, std::abs(g[i] - cij * g[j]) / scale);
      }
      fit.c(i, j) = cij;
      fit.residual(i, j) = worst;
    }
  }
  return fit;
}

ProportionalityFit proportionality_constants(const ScalarField& f, const GridSpec& grid) {
  if (grid.dimension() != f.dimension()) {
    throw std::invalid_argument("proportionality_constants: grid dimension mismatch");
  }
  std::vector<Vector> gradients;
  gradients.reserve(static_cast<std::size_t>(grid.point_count()));
  for (long i = 0; i < grid.point_count(); ++i) {
    gradients.push_back(f.gradient(grid.point(i)));
  }
  return proportionality_from_gradients(gradients);
}

GridGradients grid_sample_gradients(const GridSpec& grid, const std::vector<double>& values) {
  if (static_cast<long>(values.size()) != grid.point_count()) {
    throw std::invalid_argument("grid_sample_gradients: one value per grid point required");
  }
  const int n = grid.dimension();

  std::vector<long> strides(static_cast<std::size_t>(n), 1);
  for (int axis = n - 2; axis >= 0; --axis) {
    strides[axis] = strides[axis + 1] * grid.counts()[axis + 1];
  }

  GridGradients out;
  for (long idx = 0; idx < grid.point_count(); ++idx) {
    bool interior = true;
    long rem = idx;
    for (int axis = 0; axis < n && interior; ++axis) {
      const long k = rem / strides[axis];
      rem %= strides[axis];
      if (k == 0 || k >= grid.counts()[axis] - 1) interior = false;
    }
    if (!interior) continue;

    Vector g(n);
    for (int axis = 0; axis < n; ++axis) {
      const double dx = grid.spacing(axis);
      g[axis] = (values[idx + strides[axis]] - values[idx - strides[axis]]) / (2.0 * dx);
    }
    out.points.push_back(grid.point(idx));
    out.gradients.push_back(std::move(g));
  }
  return out;
}

}  // namespace solitonforge
