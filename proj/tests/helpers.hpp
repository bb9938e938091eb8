#pragma once

// Shared space builders and slow reference computations for the test suite.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "mcurv/rng.hpp"
#include "mcurv/space.hpp"

namespace helpers {

inline mcurv::Space equilateral_plane(double side = 1.0) {
  return mcurv::Space::euclidean(
      2, {{0.0, 0.0}, {side, 0.0}, {side / 2.0, side * std::sqrt(3.0) / 2.0}});
}

// k equidistant marks on a circle of the given circumference.
inline mcurv::Space circle_equidistant(int k, double circumference = 1.0) {
  std::vector<double> pos(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    pos[static_cast<std::size_t>(i)] = circumference * i / k;
  return mcurv::Space::circle(circumference, std::move(pos));
}

// Three equidistant points on the equator great circle.
inline mcurv::Space sphere_equidistant(double radius = 1.0) {
  std::vector<std::array<double, 3>> pts;
  for (int i = 0; i < 3; ++i) {
    const double t = 2.0 * M_PI * i / 3.0;
    pts.push_back({std::cos(t), std::sin(t), 0.0});
  }
  return mcurv::Space::sphere(radius, std::move(pts));
}

// Two inner nodes with three and two leaves; sample points on nodes and one
// mid-edge point:
//   0 -1.0- 3 -1.5- 4 -2.5- 2
//   1 -2.0- 3       4 -0.5- 5
inline mcurv::Space sample_tree() {
  mcurv::TreeTopology topo;
  topo.node_labels = {"a", "b", "c", "x", "y", "d"};
  topo.edges = {{0, 3}, {1, 3}, {3, 4}, {4, 2}, {4, 5}};
  topo.edge_lengths = {1.0, 2.0, 1.5, 2.5, 0.5};
  std::vector<mcurv::TreePoint> pts = {
      {0, 0, 0.0}, {1, 1, 0.0}, {2, 2, 0.0}, {5, 5, 0.0}, {3, 4, 0.75}};
  return mcurv::Space::tree(topo, pts);
}

inline mcurv::Space random_cloud(mcurv::Rng& rng, int n, int dim, bool linf,
                                 double lo = 0.0, double hi = 10.0) {
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(dim)));
  for (auto& p : pts)
    for (auto& c : p) c = rng.next_in(lo, hi);
  return linf ? mcurv::Space::linf(dim, std::move(pts))
              : mcurv::Space::euclidean(dim, std::move(pts));
}

inline mcurv::Space random_circle(mcurv::Rng& rng, int n, double circumference = 1.0) {
  std::vector<double> pos(static_cast<std::size_t>(n));
  for (auto& p : pos) p = rng.next_in(0.0, circumference);
  return mcurv::Space::circle(circumference, std::move(pos));
}

// Random symmetric weights closed under shortest paths: a genuine finite
// metric that is generally not embeddable in any of the model spaces.
inline mcurv::Space random_metric(mcurv::Rng& rng, int n, double lo = 1.0, double hi = 2.0) {
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rng.next_in(lo, hi);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return mcurv::Space::finite(std::move(d));
}

inline double arc_distance(double a, double b, double circumference) {
  double d = std::fmod(std::fabs(a - b), circumference);
  return std::min(d, circumference - d);
}

// Dense-scan reference for the weighted circle minimax, resolution-limited.
inline double circle_scan_minimax(double circumference, const std::vector<double>& pos,
                                  const std::vector<double>& weights, int steps = 400000) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    const double x = circumference * k / steps;
    double v = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      v = std::max(v, arc_distance(x, pos[i], circumference) / weights[i]);
    best = std::min(best, v);
  }
  return best;
}

}  // namespace helpers
