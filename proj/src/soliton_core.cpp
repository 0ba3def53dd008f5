#include "solitonforge/soliton_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace solitonforge {

namespace {

void check_inputs(const WarpedSolitonSpec& spec, const ScalarField& f,
                  const ScalarField& h, const char* what) {
  validate(spec);
  if (f.dimension() != spec.n || h.dimension() != spec.n) {
    throw std::invalid_argument(std::string(what) +
                                ": field dimensions must match spec.n");
  }
}

double require_regular(double fx, const char* what) {
  if (!(fx > kFMin)) {
    throw std::domain_error(std::string(what) + ": f at or below the f_min threshold");
  }
  return fx;
}

double residual_scale(double rho, double fx, double lambda_f) {
  return std::max({1.0, std::abs(rho) * fx * fx, std::abs(lambda_f)});
}

double fiber_equation_lhs(int m, double fx, const Vector& gf, const Vector& gh,
                          const Matrix& hf) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < gf.size(); ++k) {
    acc += -fx * hf(k, k) - (m - 1) * gf[k] * gf[k] + fx * gf[k] * gh[k];
  }
  return acc;
}

}  // namespace

SolitonClass classify(double rho) {
  if (!std::isfinite(rho)) {
    throw std::invalid_argument("classify: rho must be finite");
  }
  if (rho > 0.0) return SolitonClass::Shrinking;
  if (rho < 0.0) return SolitonClass::Expanding;
  return SolitonClass::Steady;
}

std::string_view to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::Shrinking: return "shrinking";
    case SolitonClass::Steady: return "steady";
    case SolitonClass::Expanding: return "expanding";
  }
  return "unknown";
}

double ResidualBlock::max_abs_offdiag() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < offdiag.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < offdiag.cols(); ++j) {
      m = std::max(m, std::abs(offdiag(i, j)));
    }
  }
  return m;
}

double ResidualBlock::max_abs_diag() const {
  return diag.size() == 0 ? 0.0 : diag.cwiseAbs().maxCoeff();
}

double ResidualBlock::max_abs() const {
  return std::max({max_abs_offdiag(), max_abs_diag(), std::abs(fiber)});
}

ResidualBlock residual_system(const WarpedSolitonSpec& spec, const ScalarField& f,
                              const ScalarField& h, const Vector& x) {
  check_inputs(spec, f, h, "residual_system");
  const int n = spec.n;
  const int m = spec.m;
  const double fx = require_regular(f.value(x), "residual_system");
  const Vector gf = f.gradient(x);
  const Vector gh = h.gradient(x);
  const Matrix hf = f.hessian(x);
  const Matrix hh = h.hessian(x);

  ResidualBlock block;
  block.offdiag = Matrix::Zero(n, n);
  block.diag = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    block.diag[i] = fx * hh(i, i) - m * hf(i, i) - spec.rho * fx;
    for (int j = i + 1; j < n; ++j) {
      block.offdiag(i, j) = fx * hh(i, j) - m * hf(i, j);
    }
  }
  block.fiber = fiber_equation_lhs(m, fx, gf, gh, hf) - spec.rho * fx * fx + spec.lambda_f;
  block.scale = residual_scale(spec.rho, fx, spec.lambda_f);
  return block;
}

ResidualBlock residual_direct(const WarpedSolitonSpec& spec, const ScalarField& f,
                              const ScalarField& h, const Vector& x) {
  check_inputs(spec, f, h, "residual_direct");
  const int n = spec.n;
  const int m = spec.m;
  const double fx = require_regular(f.value(x), "residual_direct");
  const Vector gf = f.gradient(x);
  const Vector gh = h.gradient(x);
  const Matrix hf = f.hessian(x);
  const Matrix hh = h.hessian(x);

  // Base block of Ric_g for a flat base is -(m/f) Hess f; the soliton
  // equation entry is Ric + Hess h - rho g0, multiplied by f to match the
  // displayed system.
  ResidualBlock block;
  block.offdiag = Matrix::Zero(n, n);
  block.diag = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    block.diag[i] = fx * (-(m / fx) * hf(i, i) + hh(i, i) - spec.rho);
    for (int j = i + 1; j < n; ++j) {
      block.offdiag(i, j) = fx * (-(m / fx) * hf(i, j) + hh(i, j));
    }
  }
  block.fiber = spec.lambda_f - fx * f.laplacian(x) - (m - 1) * gf.squaredNorm() +
                fx * gf.dot(gh) - spec.rho * fx * fx;
  block.scale = residual_scale(spec.rho, fx, spec.lambda_f);
  return block;
}

LambdaFit solve_lambda_f(int n, int m, double rho, const ScalarField& f,
                         const ScalarField& h, const GridSpec& grid) {
  WarpedSolitonSpec spec{n, m, rho, 0.0};
  check_inputs(spec, f, h, "solve_lambda_f");
  if (grid.dimension() != n) {
    throw std::invalid_argument("solve_lambda_f: grid dimension must match n");
  }

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(grid.point_count()));
  long skipped = 0;
  for (long i = 0; i < grid.point_count(); ++i) {
    const Vector x = grid.point(i);
    const double fx = f.value(x);
    if (!(fx > kFMin)) {
      ++skipped;
      continue;
    }
    const Vector gf = f.gradient(x);
    const Vector gh = h.gradient(x);
    const Matrix hf = f.hessian(x);
    values.push_back(rho * fx * fx - fiber_equation_lhs(m, fx, gf, gh, hf));
  }
  if (values.empty()) {
    throw std::domain_error("solve_lambda_f: no grid points with f above f_min");
  }

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double spread = 0.0;
  for (double v : values) spread = std::max(spread, std::abs(v - mean));
  return LambdaFit{mean, spread, static_cast<long>(values.size()), skipped};
}

double ResidualReport::sup_raw() const {
  return std::max({sup_raw_offdiag, sup_raw_diag, sup_raw_fiber});
}

double ResidualReport::sup_scaled() const {
  return std::max({sup_scaled_offdiag, sup_scaled_diag, sup_scaled_fiber});
}

ResidualReport verify_on_grid(const WarpedSolitonSpec& spec, const ScalarField& f,
                              const ScalarField& h, const GridSpec& grid,
                              double tolerance) {
  check_inputs(spec, f, h, "verify_on_grid");
  if (grid.dimension() != spec.n) {
    throw std::invalid_argument("verify_on_grid: grid dimension must match spec.n");
  }
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw std::invalid_argument("verify_on_grid: tolerance must be finite and >= 0");
  }

  ResidualReport report{grid, tolerance, 0, 0, 0, 0, 0, 0, 0, 0, false, {}};
  report.points_total = grid.point_count();
  report.per_point.reserve(static_cast<std::size_t>(grid.point_count()));
  for (long i = 0; i < grid.point_count(); ++i) {
    const Vector x = grid.point(i);
    if (!(f.value(x) > kFMin)) {
      report.per_point.push_back(PointResidual{i, true, 0.0, 0.0});
      ++report.points_skipped;
      continue;
    }
    const ResidualBlock block = residual_system(spec, f, h, x);
    report.sup_raw_offdiag = std::max(report.sup_raw_offdiag, block.max_abs_offdiag());
    report.sup_raw_diag = std::max(report.sup_raw_diag, block.max_abs_diag());
    report.sup_raw_fiber = std::max(report.sup_raw_fiber, std::abs(block.fiber));
    report.sup_scaled_offdiag =
        std::max(report.sup_scaled_offdiag, block.max_abs_offdiag() / block.scale);
    report.sup_scaled_diag =
        std::max(report.sup_scaled_diag, block.max_abs_diag() / block.scale);
    report.sup_scaled_fiber =
        std::max(report.sup_scaled_fiber, std::abs(block.fiber) / block.scale);
    report.per_point.push_back(
        PointResidual{i, false, block.max_abs(), block.max_scaled()});
  }
  if (report.points_skipped == report.points_total) {
    throw std::domain_error("verify_on_grid: every grid point has f below f_min");
  }
  report.pass = report.sup_scaled() <= tolerance;
  return report;
}

}  // namespace solitonforge
