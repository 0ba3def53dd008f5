#pragma once

#include "solitonforge/fields.hpp"

#include <string_view>
#include <vector>

namespace solitonforge {

enum class InvarianceVerdict { Invariant, NotInvariant, Degenerate };

/// Relative gradient-norm cutoff below which a sample carries no direction
/// information.
inline constexpr double kGradientDegeneracyRel = 1e-10;

/// Default angular tolerances (radians) for fields with analytic and
/// finite-difference gradients.
inline constexpr double kAngleTolAnalytic = 1e-6;
inline constexpr double kAngleTolFd = 1e-3;

/// Outcome of the translation-invariance test. `direction` is the unit
/// vector fitted to the sampled gradient directions, sign-canonicalized so
/// its first nonzero component is positive. `proportionality` holds the
/// per-pair least-squares constants c_ij with f,_i ~ c_ij f,_j (NaN where no
/// sample keeps f,_j away from zero); `proportionality_residual` is the
/// matching max misfit normalized by the gradient scale.
struct InvarianceFit {
  InvarianceVerdict verdict = InvarianceVerdict::Degenerate;
  Vector direction;
  double max_angular_residual = 0.0;
  Matrix proportionality;
  Matrix proportionality_residual;
  long usable_points = 0;
  double tolerance = 0.0;
};

/// Fits a single direction to a set of sampled gradients: unit gradients are
/// sign-folded into the dominant eigenvector of their averaged outer
/// product, and the verdict is Invariant when every usable gradient lies
/// within `tol` radians of that direction. Degenerate when fewer than
/// dim + 1 gradients survive the degeneracy cutoff. Throws
/// std::invalid_argument on an empty sample set.
InvarianceFit fit_gradient_directions(const std::vector<Vector>& gradients, double tol);

/// Samples grad f over the grid and runs fit_gradient_directions.
InvarianceFit detect_translation_invariance(const ScalarField& f, const GridSpec& grid,
                                            double tol);

struct ProportionalityFit {
  Matrix c;         // c_ij, NaN where undefined, 1 on the diagonal
  Matrix residual;  // max |g_i - c_ij g_j| / gradient scale, NaN where undefined
};

ProportionalityFit proportionality_from_gradients(const std::vector<Vector>& gradients);
ProportionalityFit proportionality_constants(const ScalarField& f, const GridSpec& grid);

/// Central-difference gradients of grid-sampled values at interior nodes.
/// `values` must hold one sample per grid point in grid order. Axes with
/// fewer than 3 points contribute no interior nodes.
struct GridGradients {
  std::vector<Vector> points;
  std::vector<Vector> gradients;
};
GridGradients grid_sample_gradients(const GridSpec& grid, const std::vector<double>& values);

std::string_view to_string(InvarianceVerdict v);

}  // namespace solitonforge
