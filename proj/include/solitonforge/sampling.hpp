#pragma once

#include "solitonforge/fields.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace solitonforge {

/// Reproducible uniform sampling. The generator sequence and the mapping to
/// doubles are both pinned, so a seed fully determines every sample.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vector point(const std::vector<AxisRange>& box) {
    Vector x(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      x[static_cast<Eigen::Index>(i)] = in(box[i].lo, box[i].hi);
    }
    return x;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace solitonforge
