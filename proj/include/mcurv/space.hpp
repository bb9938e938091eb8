#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcurv/errors.hpp"

namespace mcurv {

enum class SpaceKind { Finite, Euclidean, Linf, Circle, Sphere, HyperbolicDisk, Tree };

// Where ball-intersection witnesses may live: restricted to the listed sample
// points, or anywhere in the ambient model space.
enum class WitnessMode { IntrinsicSample, Ambient };

std::string to_string(SpaceKind k);
std::string to_string(WitnessMode m);
std::optional<WitnessMode> parse_witness_mode(std::string_view s);

// A point on a metric tree: the node `a` when a == b, otherwise the point at
// arc length `offset` from node a along the edge {a, b}.
struct TreePoint {
  int a = 0;
  int b = 0;
  double offset = 0.0;
  bool is_node() const { return a == b; }
};

// Result location of a witness search. `Index` refers to a sample point of the
// space; `Coords` carries ambient coordinates (size 1 for circle positions,
// 2 for plane/disk, 3 for sphere, d for d-dimensional clouds).
struct Location {
  enum class Kind { Index, Coords, Tree };
  Kind kind = Kind::Index;
  int index = -1;
  std::vector<double> coords;
  TreePoint tree;

  static Location at_index(int i) {
    Location l;
    l.kind = Kind::Index;
    l.index = i;
    return l;
  }
  static Location at_coords(std::vector<double> x) {
    Location l;
    l.kind = Kind::Coords;
    l.coords = std::move(x);
    return l;
  }
  static Location at_tree(TreePoint t) {
    Location l;
    l.kind = Kind::Tree;
    l.tree = t;
    return l;
  }
  nlohmann::ordered_json to_json(const class Space& s) const;
};

struct MetricViolation {
  enum class Kind { Asymmetric, NonzeroDiagonal, Negative, Triangle };
  Kind kind;
  int i = -1;
  int j = -1;
  int k = -1;
  double amount = 0.0;
  std::string describe() const;
};

struct ValidationReport {
  bool ok = true;
  std::vector<MetricViolation> violations;
};

// Checks symmetry, zero diagonal, nonnegativity and the triangle inequality,
// each with absolute slack `tol`.
ValidationReport validate_metric(const std::vector<std::vector<double>>& m, double tol = 1e-9);

struct TreeTopology {
  std::vector<std::string> node_labels;
  std::vector<std::array<int, 2>> edges;  // endpoints as node indices
  std::vector<double> edge_lengths;
};

class Space {
 public:
  static Space finite(std::vector<std::vector<double>> matrix);
  static Space euclidean(int dim, std::vector<std::vector<double>> points);
  static Space linf(int dim, std::vector<std::vector<double>> points);
  static Space circle(double circumference, std::vector<double> positions);
  static Space sphere(double radius, std::vector<std::array<double, 3>> points);
  static Space hyperbolic_disk(std::vector<std::array<double, 2>> points);
  static Space tree(TreeTopology topology, std::vector<TreePoint> points);

  static Space from_json(const nlohmann::json& j);
  static Space from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  SpaceKind kind() const { return kind_; }
  int point_count() const { return n_; }
  bool supports(WitnessMode m) const {
    return m == WitnessMode::IntrinsicSample || kind_ != SpaceKind::Finite;
  }

  double distance(int p, int q) const;
  // Distances from sample point p to all sample points. Served from the cache
  // for small spaces, otherwise computed into `scratch`.
  std::span<const double> distance_row(int p, std::vector<double>& scratch) const;
  double distance_to(const Location& loc, int q) const;
  // Largest pairwise distance of `subset` (all points when empty).
  double diameter(std::span<const int> subset = {}) const;

  Location location_of(int idx) const;
  // Point at arc length `dist` from sample `from` along a geodesic to sample
  // `to`; ambient model spaces only. Requires 0 <= dist <= d(from, to).
  Location geodesic_point(int from, int to, double dist) const;

  // Payload accessors; each is valid only for the matching kind.
  const std::vector<std::vector<double>>& matrix() const { return matrix_; }
  int cloud_dim() const { return dim_; }
  const std::vector<double>& point_coords(int idx) const { return pts_[idx]; }
  double circumference() const { return circumference_; }
  const std::vector<double>& circle_positions() const { return circle_pos_; }
  double sphere_radius() const { return sphere_radius_; }
  const TreeTopology& tree_topology() const { return tree_; }
  const std::vector<TreePoint>& tree_points() const { return tree_pts_; }
  const std::vector<double>& node_distances(int node) const { return node_dist_[node]; }
  // Coordinate-major buffer over sample points for the batch kernels.
  const std::vector<double>& soa() const { return soa_; }
  std::size_t soa_stride() const { return soa_stride_; }

  double tree_point_distance(const TreePoint& p, const TreePoint& q) const;
  // Point at arc length `dist` from p along the unique p -> q path.
  TreePoint tree_walk(const TreePoint& p, const TreePoint& q, double dist) const;
  // Distance between ambient coordinate tuples under this space's metric.
  double coord_distance(std::span<const double> x, std::span<const double> y) const;

 private:
  Space() = default;
  void finalize();  // builds the SoA buffer and the distance cache
  void compute_row(int p, std::vector<double>& out) const;

  SpaceKind kind_ = SpaceKind::Finite;
  int n_ = 0;
  std::vector<std::vector<double>> matrix_;  // Finite
  int dim_ = 0;                              // Euclidean / Linf
  std::vector<std::vector<double>> pts_;     // Euclidean / Linf / Sphere / Disk
  double circumference_ = 0.0;               // Circle
  std::vector<double> circle_pos_;
  double sphere_radius_ = 0.0;               // Sphere
  TreeTopology tree_;                        // Tree
  std::vector<TreePoint> tree_pts_;
  std::vector<std::vector<double>> node_dist_;
  std::vector<std::vector<int>> adj_;        // node -> edge ids
  std::vector<double> soa_;
  std::size_t soa_stride_ = 0;
  std::vector<std::vector<double>> rows_;    // pairwise distance cache
};

// Pairwise distances restricted to `base` (vr_slice and the test oracles work
// on these directly).
std::vector<std::vector<double>> pairwise_distances(const Space& s, std::span<const int> base);

}  // namespace mcurv
