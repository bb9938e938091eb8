#pragma once

#include <array>
#include <optional>
#include <span>

#include "mcurv/space.hpp"

namespace mcurv {

struct TriangleSides {
  double d12 = 0.0;
  double d13 = 0.0;
  double d23 = 0.0;

  // Checks nonnegativity and the triangle inequality with relative slack 1e-9.
  static TriangleSides validated(double d12, double d13, double d23);

  double perimeter() const { return d12 + d13 + d23; }
  std::array<double, 3> as_array() const { return {d12, d13, d23}; }
};

// Side lengths of the sample triple (i, j, k).
TriangleSides triple_sides(const Space& s, int i, int j, int k);

// The unique radii with r_i + r_j = d_ij: r1 = (d12 + d13 - d23) / 2 and
// cyclically. Each r_v groups the two sides incident to vertex v first, so
// exact-arithmetic identities on the smallest product survive in floating
// point when the inputs allow it.
struct GromovRadii {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  TriangleSides sides;
  std::array<double, 3> as_array() const { return {r1, r2, r3}; }
};

GromovRadii gromov_products(const TriangleSides& sides);

// lambda = (sum of the two smallest sides) / (largest side), in [1, 2]:
// 1 means collinear, 2 equilateral. argmax_edge identifies the largest side
// (0 -> d12, 1 -> d13, 2 -> d23), lowest index on ties.
struct LambdaMeasure {
  double lambda = 1.0;
  int argmax_edge = 0;
};

LambdaMeasure lambda_measure(const TriangleSides& sides);

struct LambdaBin {
  double center = 0.0;
  double half_width = 0.0;
};

// Index of the bin whose interval [center - hw, center + hw] contains the
// triple's lambda, or nullopt. Bins must be sorted and non-overlapping.
std::optional<std::size_t> classify_triple(const TriangleSides& sides,
                                           std::span<const LambdaBin> bins);

// Collinear within tolerance: some Gromov product below 1e-12 * perimeter.
// Such triples are excluded from the rho functional, which divides by r_i.
bool is_degenerate(const GromovRadii& g);

}  // namespace mcurv
