#pragma once

#include <optional>
#include <span>

#include "mcurv/space.hpp"

namespace mcurv {

// tol < 0 selects an automatic tolerance: a few ulps of the problem scale for
// the exact backends (finite scan, circle arcs, linf boxes, tree pairs,
// euclidean enumeration), 1e-9 * scale for the iterative ones.
struct IntersectOptions {
  double tol = -1.0;
};

struct IntersectResult {
  bool intersects = false;
  std::optional<Location> witness;
};

// Does the family of closed balls B(x_{centers[i]}, radii[i]) have a common
// point? Witnesses range over the sample points (intrinsic-sample) or the
// whole model space (ambient). Duplicate center indices are merged keeping
// the smallest radius.
IntersectResult balls_intersect(const Space& s, std::span<const int> centers,
                                std::span<const double> radii, WitnessMode mode,
                                const IntersectOptions& opts = {});

struct MinimaxOptions {
  double descent_tol = 1e-9;  // step floor for the pattern-search backends
};

struct MinimaxResult {
  double value = 0.0;
  Location witness;
  bool attained = false;  // true only when an exact backend certifies the witness
};

// inf_x max_i d(x, x_{centers[i]}) / weights[i]. Exact closed forms are used
// on finite samples, circles, linf clouds, trees and low-dimensional
// euclidean clouds; spheres and the hyperbolic disk use seeded multistart
// pattern search (attained = false).
MinimaxResult minimax_scaled_distance(const Space& s, std::span<const int> centers,
                                      std::span<const double> weights, WitnessMode mode,
                                      const MinimaxOptions& opts = {});

}  // namespace mcurv
