#pragma once

#include <optional>
#include <span>
#include <vector>

namespace mcurv::detail {

struct MinimaxPoint {
  double value = 0.0;
  std::vector<double> point;
};

// Exact solvers for the two Euclidean minimax problems
//
//   ratio:   min_x max_i ||x - c_i|| / w_i          (w_i > 0)
//   offset:  min_x max_i (||x - c_i|| - r_i)
//
// At the optimum the active constraints admit a subset of at most dim+1
// centers whose gradients contain 0 in their convex hull, and the optimizer
// lies in the affine hull of that subset where all active values are equal.
// Enumerating every subset of size <= min(dim+1, k), solving the equal-value
// system inside its affine hull, and evaluating each solution (plus every
// center) against the full objective therefore yields the exact optimum.
//
// Returns nullopt when the enumeration would be combinatorially too large;
// callers fall back to the descent variants below.
std::optional<MinimaxPoint> euclid_ratio_minimax(const std::vector<std::vector<double>>& centers,
                                                 std::span<const double> weights);
std::optional<MinimaxPoint> euclid_offset_minimax(const std::vector<std::vector<double>>& centers,
                                                  std::span<const double> radii);

// Iterative fallbacks: pull toward the worst constraint with diminishing
// steps from several starts. Approximate; used only where the exact
// enumeration is infeasible.
MinimaxPoint euclid_ratio_descent(const std::vector<std::vector<double>>& centers,
                                  std::span<const double> weights, int iterations = 4000);
MinimaxPoint euclid_offset_descent(const std::vector<std::vector<double>>& centers,
                                   std::span<const double> radii, int iterations = 4000);

}  // namespace mcurv::detail
