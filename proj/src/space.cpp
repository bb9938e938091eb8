#include "mcurv/space.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "mcurv/kernels.hpp"

namespace mcurv {

namespace {

constexpr double kDuplicateTol = 1e-12;

double pmod(double x, double c) {
  double r = std::fmod(x, c);
  return r < 0.0 ? r + c : r;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Finite: return "finite";
    case SpaceKind::Euclidean: return "euclidean";
    case SpaceKind::Linf: return "linf";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Sphere: return "sphere";
    case SpaceKind::HyperbolicDisk: return "hyperbolic-disk";
    case SpaceKind::Tree: return "tree";
  }
  return "?";
}

std::string to_string(WitnessMode m) {
  return m == WitnessMode::IntrinsicSample ? "intrinsic-sample" : "ambient";
}

std::optional<WitnessMode> parse_witness_mode(std::string_view s) {
  if (s == "intrinsic-sample" || s == "intrinsic") return WitnessMode::IntrinsicSample;
  if (s == "ambient") return WitnessMode::Ambient;
  return std::nullopt;
}

std::string MetricViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Asymmetric: os << "d(" << i << "," << j << ") != d(" << j << "," << i
                              << ") by " << amount; break;
    case Kind::NonzeroDiagonal: os << "d(" << i << "," << i << ") = " << amount; break;
    case Kind::Negative: os << "d(" << i << "," << j << ") = " << amount << " < 0"; break;
    case Kind::Triangle: os << "d(" << i << "," << k << ") + d(" << k << "," << j
                            << ") < d(" << i << "," << j << ") by " << amount; break;
  }
  return os.str();
}

ValidationReport validate_metric(const std::vector<std::vector<double>>& m, double tol) {
  ValidationReport rep;
  auto add = [&rep](MetricViolation v) {
    rep.ok = false;
    rep.violations.push_back(v);
  };
  int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(m[i].size()) != n)
      fail("NonSquareInput", "row " + std::to_string(i) + " has wrong length");
  for (int i = 0; i < n; ++i) {
    if (std::fabs(m[i][i]) > tol)
      add({MetricViolation::Kind::NonzeroDiagonal, i, i, -1, m[i][i]});
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(m[i][j]) || m[i][j] < -tol)
        add({MetricViolation::Kind::Negative, i, j, -1, m[i][j]});
      if (j > i && std::fabs(m[i][j] - m[j][i]) > tol)
        add({MetricViolation::Kind::Asymmetric, i, j, -1, std::fabs(m[i][j] - m[j][i])});
    }
  }
  if (!rep.ok) return rep;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        double slack = m[i][k] + m[k][j] - m[i][j];
        if (slack < -tol) add({MetricViolation::Kind::Triangle, i, j, k, -slack});
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// construction

Space Space::finite(std::vector<std::vector<double>> matrix) {
  Space s;
  s.kind_ = SpaceKind::Finite;
  ValidationReport rep = validate_metric(matrix);
  if (!rep.ok)
    fail("InvalidMetric", "matrix violates metric axioms: " + rep.violations.front().describe());
  if (matrix.empty()) fail("EmptyPointList", "finite space needs at least one point");
  s.n_ = static_cast<int>(matrix.size());
  s.matrix_ = std::move(matrix);
  s.finalize();
  return s;
}

static void check_cloud(int dim, const std::vector<std::vector<double>>& pts) {
  if (dim < 1) fail("InvalidDimension", "dim must be >= 1");
  if (pts.empty()) fail("EmptyPointList", "point cloud needs at least one point");
  for (const auto& p : pts) {
    if (static_cast<int>(p.size()) != dim)
      fail("InvalidDimension", "point has wrong number of coordinates");
    if (!all_finite(p)) fail("NonFiniteInput", "point has a non-finite coordinate");
  }
}

static void check_duplicates(const Space& s) {
  for (int i = 0; i < s.point_count(); ++i)
    for (int j = i + 1; j < s.point_count(); ++j)
      if (s.distance(i, j) <= kDuplicateTol)
        fail("DuplicatePoints",
             "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
}

Space Space::euclidean(int dim, std::vector<std::vector<double>> points) {
  check_cloud(dim, points);
  Space s;
  s.kind_ = SpaceKind::Euclidean;
  s.dim_ = dim;
  s.n_ = static_cast<int>(points.size());
  s.pts_ = std::move(points);
  s.finalize();
  check_duplicates(s);
  return s;
}

Space Space::linf(int dim, std::vector<std::vector<double>> points) {
  check_cloud(dim, points);
  Space s;
  s.kind_ = SpaceKind::Linf;
  s.dim_ = dim;
  s.n_ = static_cast<int>(points.size());
  s.pts_ = std::move(points);
  s.finalize();
  check_duplicates(s);
  return s;
}

Space Space::circle(double circumference, std::vector<double> positions) {
  if (!(circumference > 0.0) || !std::isfinite(circumference))
    fail("InvalidCircumference", "circumference must be positive");
  if (positions.empty()) fail("EmptyPointList", "circle needs at least one point");
  for (double t : positions)
    if (!std::isfinite(t) || t < 0.0 || t >= circumference)
      fail("InvalidPosition", "arc positions must lie in [0, circumference)");
  Space s;
  s.kind_ = SpaceKind::Circle;
  s.circumference_ = circumference;
  s.n_ = static_cast<int>(positions.size());
  s.circle_pos_ = std::move(positions);
  s.finalize();
  return s;
}

Space Space::sphere(double radius, std::vector<std::array<double, 3>> points) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    fail("InvalidRadius", "sphere radius must be positive");
  if (points.empty()) fail("EmptyPointList", "sphere needs at least one point");
  Space s;
  s.kind_ = SpaceKind::Sphere;
  s.sphere_radius_ = radius;
  s.n_ = static_cast<int>(points.size());
  s.pts_.reserve(points.size());
  for (const auto& p : points) {
    double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (!std::isfinite(norm) || std::fabs(norm - 1.0) > 1e-9)
      fail("NotUnitVector", "sphere points must be unit direction vectors");
    s.pts_.push_back({p[0] / norm, p[1] / norm, p[2] / norm});
  }
  s.dim_ = 3;
  s.finalize();
  return s;
}

Space Space::hyperbolic_disk(std::vector<std::array<double, 2>> points) {
  if (points.empty()) fail("EmptyPointList", "disk needs at least one point");
  Space s;
  s.kind_ = SpaceKind::HyperbolicDisk;
  s.n_ = static_cast<int>(points.size());
  for (const auto& p : points) {
    double norm2 = p[0] * p[0] + p[1] * p[1];
    if (!std::isfinite(norm2) || norm2 > 1.0 - kDuplicateTol)
      fail("OutsideDisk", "disk points must satisfy |p| < 1");
    s.pts_.push_back({p[0], p[1]});
  }
  s.dim_ = 2;
  s.finalize();
  return s;
}

Space Space::tree(TreeTopology topology, std::vector<TreePoint> points) {
  int nn = static_cast<int>(topology.node_labels.size());
  if (nn < 1) fail("EmptyTree", "tree needs at least one node");
  if (topology.edges.size() != topology.edge_lengths.size())
    fail("SizeMismatch", "edges and edge_lengths differ in length");
  if (static_cast<int>(topology.edges.size()) != nn - 1)
    fail("NotATree", "a tree on n nodes has exactly n-1 edges");
  Space s;
  s.kind_ = SpaceKind::Tree;
  s.adj_.assign(nn, {});
  for (std::size_t e = 0; e < topology.edges.size(); ++e) {
    auto [a, b] = topology.edges[e];
    if (a < 0 || a >= nn || b < 0 || b >= nn || a == b)
      fail("InvalidEdge", "edge references a bad node");
    if (!(topology.edge_lengths[e] > 0.0) || !std::isfinite(topology.edge_lengths[e]))
      fail("InvalidEdge", "edge lengths must be positive");
    s.adj_[a].push_back(static_cast<int>(e));
    s.adj_[b].push_back(static_cast<int>(e));
  }
  s.tree_ = std::move(topology);
  // Connectivity (with n-1 edges this also rules out cycles).
  {
    std::vector<int> stack = {0};
    std::vector<char> seen(nn, 0);
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e : s.adj_[u]) {
        int v = s.tree_.edges[e][0] == u ? s.tree_.edges[e][1] : s.tree_.edges[e][0];
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    if (count != nn) fail("NotATree", "tree is not connected");
  }
  if (points.empty()) fail("EmptyPointList", "tree needs at least one marked point");
  for (auto& p : points) {
    if (p.a < 0 || p.a >= nn || p.b < 0 || p.b >= nn)
      fail("InvalidPoint", "marked point references a bad node");
    if (!p.is_node()) {
      int eid = -1;
      for (int e : s.adj_[p.a]) {
        int o = s.tree_.edges[e][0] == p.a ? s.tree_.edges[e][1] : s.tree_.edges[e][0];
        if (o == p.b) eid = e;
      }
      if (eid < 0) fail("InvalidPoint", "marked point references a missing edge");
      double len = s.tree_.edge_lengths[eid];
      if (!(p.offset >= 0.0) || p.offset > len)
        fail("InvalidPoint", "edge offset outside [0, length]");
    } else {
      p.offset = 0.0;
    }
  }
  s.n_ = static_cast<int>(points.size());
  s.tree_pts_ = std::move(points);
  // All-pairs node distances by DFS from each node.
  s.node_dist_.assign(nn, std::vector<double>(nn, 0.0));
  for (int src = 0; src < nn; ++src) {
    std::vector<int> stack = {src};
    std::vector<char> seen(nn, 0);
    seen[src] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e : s.adj_[u]) {
        int v = s.tree_.edges[e][0] == u ? s.tree_.edges[e][1] : s.tree_.edges[e][0];
        if (!seen[v]) {
          seen[v] = 1;
          s.node_dist_[src][v] = s.node_dist_[src][u] + s.tree_.edge_lengths[e];
          stack.push_back(v);
        }
      }
    }
  }
  s.finalize();
  return s;
}

void Space::finalize() {
  // Coordinate-major buffer for the batch kernels.
  if (kind_ == SpaceKind::Euclidean || kind_ == SpaceKind::Linf ||
      kind_ == SpaceKind::Sphere || kind_ == SpaceKind::HyperbolicDisk) {
    soa_stride_ = static_cast<std::size_t>(n_);
    soa_.assign(static_cast<std::size_t>(dim_) * soa_stride_, 0.0);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < dim_; ++k) soa_[static_cast<std::size_t>(k) * soa_stride_ + j] = pts_[j][k];
  } else if (kind_ == SpaceKind::Circle) {
    soa_stride_ = static_cast<std::size_t>(n_);
    soa_ = circle_pos_;
  }
  if (n_ <= 2048) {
    std::vector<std::vector<double>> rows(n_);
    for (int p = 0; p < n_; ++p) compute_row(p, rows[p]);
    rows_ = std::move(rows);
  }
}

// ---------------------------------------------------------------------------
// distances

double Space::coord_distance(std::span<const double> x, std::span<const double> y) const {
  switch (kind_) {
    case SpaceKind::Euclidean: {
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        double d = x[k] - y[k];
        s = s + d * d;
      }
      return std::sqrt(s);
    }
    case SpaceKind::Linf: {
      double m = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        double d = std::fabs(x[k] - y[k]);
        if (d > m) m = d;
      }
      return m;
    }
    case SpaceKind::Circle: {
      double u = std::fabs(x[0] - y[0]);
      double v = circumference_ - u;
      return u < v ? u : v;
    }
    case SpaceKind::Sphere: {
      double s = x[0] * y[0];
      s = s + x[1] * y[1];
      s = s + x[2] * y[2];
      return sphere_radius_ * std::acos(clamp_unit(s));
    }
    case SpaceKind::HyperbolicDisk: {
      double qn = 1.0 - (x[0] * x[0] + x[1] * x[1]);
      double pn = 1.0 - (y[0] * y[0] + y[1] * y[1]);
      double dx = x[0] - y[0];
      double dy = x[1] - y[1];
      double e = dx * dx + dy * dy;
      double arg = 1.0 + (2.0 * e) / (qn * pn);
      return std::acosh(arg < 1.0 ? 1.0 : arg);
    }
    default:
      fail("UnsupportedMode", "coordinate distances are undefined for " + to_string(kind_));
  }
}

double Space::distance(int p, int q) const {
  if (p < 0 || p >= n_ || q < 0 || q >= n_)
    fail("IndexOutOfRange", "point index out of range");
  if (!rows_.empty()) return rows_[p][q];
  switch (kind_) {
    case SpaceKind::Finite: return matrix_[p][q];
    case SpaceKind::Tree: return tree_point_distance(tree_pts_[p], tree_pts_[q]);
    case SpaceKind::Circle: {
      double x = circle_pos_[p];
      return coord_distance({&x, 1}, {&circle_pos_[q], 1});
    }
    default: return coord_distance(pts_[p], pts_[q]);
  }
}

std::span<const double> Space::distance_row(int p, std::vector<double>& scratch) const {
  if (p < 0 || p >= n_) fail("IndexOutOfRange", "point index out of range");
  if (!rows_.empty()) return rows_[p];
  compute_row(p, scratch);
  return scratch;
}

void Space::compute_row(int p, std::vector<double>& scratch) const {
  scratch.resize(n_);
  const auto& K = kernels::table();
  std::size_t n = static_cast<std::size_t>(n_);
  switch (kind_) {
    case SpaceKind::Finite:
      std::copy(matrix_[p].begin(), matrix_[p].end(), scratch.begin());
      break;
    case SpaceKind::Tree:
      for (int q = 0; q < n_; ++q) scratch[q] = tree_point_distance(tree_pts_[p], tree_pts_[q]);
      break;
    case SpaceKind::Circle:
      K.batch_circle(circle_pos_[p], soa_.data(), n, circumference_, scratch.data());
      break;
    case SpaceKind::Euclidean:
      K.batch_sqdist(pts_[p].data(), soa_.data(), soa_stride_, dim_, n, scratch.data());
      for (double& v : scratch) v = std::sqrt(v);
      break;
    case SpaceKind::Linf:
      K.batch_absmax(pts_[p].data(), soa_.data(), soa_stride_, dim_, n, scratch.data());
      break;
    case SpaceKind::Sphere:
      K.batch_dot3(pts_[p].data(), soa_.data(), soa_stride_, n, scratch.data());
      for (double& v : scratch) v = sphere_radius_ * std::acos(clamp_unit(v));
      break;
    case SpaceKind::HyperbolicDisk:
      K.batch_poincare_arg(pts_[p][0], pts_[p][1], soa_.data(), soa_stride_, n, scratch.data());
      for (double& v : scratch) v = std::acosh(v < 1.0 ? 1.0 : v);
      break;
  }
}

double Space::distance_to(const Location& loc, int q) const {
  if (q < 0 || q >= n_) fail("IndexOutOfRange", "point index out of range");
  switch (loc.kind) {
    case Location::Kind::Index: return distance(loc.index, q);
    case Location::Kind::Tree:
      if (kind_ != SpaceKind::Tree) fail("UnsupportedMode", "tree location in a non-tree space");
      return tree_point_distance(loc.tree, tree_pts_[q]);
    case Location::Kind::Coords: {
      if (kind_ == SpaceKind::Circle) {
        double y = circle_pos_[q];
        return coord_distance(loc.coords, {&y, 1});
      }
      if (kind_ == SpaceKind::Euclidean || kind_ == SpaceKind::Linf ||
          kind_ == SpaceKind::Sphere || kind_ == SpaceKind::HyperbolicDisk)
        return coord_distance(loc.coords, pts_[q]);
      fail("UnsupportedMode", "coordinate location in a " + to_string(kind_) + " space");
    }
  }
  fail("UnsupportedMode", "bad location");
}

double Space::diameter(std::span<const int> subset) const {
  std::vector<int> all;
  if (subset.empty()) {
    all.resize(n_);
    for (int i = 0; i < n_; ++i) all[i] = i;
    subset = all;
  }
  double m = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      m = std::max(m, distance(subset[a], subset[b]));
  return m;
}

Location Space::location_of(int idx) const {
  if (idx < 0 || idx >= n_) fail("IndexOutOfRange", "point index out of range");
  switch (kind_) {
    case SpaceKind::Finite: return Location::at_index(idx);
    case SpaceKind::Tree: return Location::at_tree(tree_pts_[idx]);
    case SpaceKind::Circle: return Location::at_coords({circle_pos_[idx]});
    default: return Location::at_coords(pts_[idx]);
  }
}

// ---------------------------------------------------------------------------
// tree geometry

namespace {
struct EdgeRef {
  int id = -1;
  double length = 0.0;
};
}  // namespace

static EdgeRef find_edge(const TreeTopology& t, const std::vector<std::vector<int>>& adj,
                         int a, int b) {
  for (int e : adj[a]) {
    int o = t.edges[e][0] == a ? t.edges[e][1] : t.edges[e][0];
    if (o == b) return {e, t.edge_lengths[e]};
  }
  return {};
}

static bool same_edge(const TreePoint& p, const TreePoint& q) {
  return (p.a == q.a && p.b == q.b) || (p.a == q.b && p.b == q.a);
}

double Space::tree_point_distance(const TreePoint& p, const TreePoint& q) const {
  if (!p.is_node() && !q.is_node() && same_edge(p, q)) {
    double qo = p.a == q.a ? q.offset : find_edge(tree_, adj_, p.a, p.b).length - q.offset;
    return std::fabs(p.offset - qo);
  }
  auto ends = [this](const TreePoint& x) {
    std::vector<std::pair<int, double>> e;
    if (x.is_node()) {
      e.emplace_back(x.a, 0.0);
    } else {
      double len = find_edge(tree_, adj_, x.a, x.b).length;
      e.emplace_back(x.a, x.offset);
      e.emplace_back(x.b, len - x.offset);
    }
    return e;
  };
  double best = std::numeric_limits<double>::infinity();
  for (auto [n1, w1] : ends(p))
    for (auto [n2, w2] : ends(q)) best = std::min(best, w1 + node_dist_[n1][n2] + w2);
  return best;
}

static std::vector<int> node_path(const TreeTopology& t, const std::vector<std::vector<int>>& adj,
                                  int from, int to) {
  int nn = static_cast<int>(t.node_labels.size());
  std::vector<int> parent(nn, -1);
  std::vector<int> stack = {from};
  parent[from] = from;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u == to) break;
    for (int e : adj[u]) {
      int v = t.edges[e][0] == u ? t.edges[e][1] : t.edges[e][0];
      if (parent[v] < 0) {
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  std::vector<int> path;
  for (int u = to; u != from; u = parent[u]) path.push_back(u);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

TreePoint Space::tree_walk(const TreePoint& p, const TreePoint& q, double dist) const {
  if (dist <= 0.0) return p;
  if (!p.is_node() && !q.is_node() && same_edge(p, q)) {
    double len = find_edge(tree_, adj_, p.a, p.b).length;
    double qo = p.a == q.a ? q.offset : len - q.offset;
    double off = p.offset + (qo >= p.offset ? dist : -dist);
    return {p.a, p.b, std::clamp(off, 0.0, len)};
  }
  // Choose the endpoints through which the geodesic leaves p and enters q.
  auto ends = [this](const TreePoint& x) {
    std::vector<std::pair<int, double>> e;
    if (x.is_node()) {
      e.emplace_back(x.a, 0.0);
    } else {
      double len = find_edge(tree_, adj_, x.a, x.b).length;
      e.emplace_back(x.a, x.offset);
      e.emplace_back(x.b, len - x.offset);
    }
    return e;
  };
  int e1 = -1, e2 = -1;
  double w1 = 0.0, w2 = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (auto [n1, u1] : ends(p))
    for (auto [n2, u2] : ends(q)) {
      double tot = u1 + node_dist_[n1][n2] + u2;
      if (tot < best) {
        best = tot;
        e1 = n1;
        w1 = u1;
        e2 = n2;
        w2 = u2;
      }
    }
  if (dist <= w1) {
    // Still on p's edge, moving toward endpoint e1.
    double off = e1 == p.a ? p.offset - dist : p.offset + dist;
    double len = find_edge(tree_, adj_, p.a, p.b).length;
    return {p.a, p.b, std::clamp(off, 0.0, len)};
  }
  double rem = dist - w1;
  std::vector<int> path = node_path(tree_, adj_, e1, e2);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    double len = find_edge(tree_, adj_, path[i], path[i + 1]).length;
    if (rem <= len) return {path[i], path[i + 1], rem};
    rem -= len;
  }
  // On q's edge, entering through e2.
  if (q.is_node() || rem <= 0.0) return {e2, e2, 0.0};
  double len = find_edge(tree_, adj_, q.a, q.b).length;
  double off = e2 == q.a ? rem : len - rem;
  return {q.a, q.b, std::clamp(off, 0.0, len)};
}

// ---------------------------------------------------------------------------
// geodesic interpolation (ambient model spaces)

Location Space::geodesic_point(int from, int to, double dist) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    fail("IndexOutOfRange", "point index out of range");
  switch (kind_) {
    case SpaceKind::Euclidean:
    case SpaceKind::Linf: {
      double d = distance(from, to);
      std::vector<double> x = pts_[from];
      if (d > 0.0) {
        double t = dist / d;
        for (int k = 0; k < dim_; ++k) x[k] = pts_[from][k] + t * (pts_[to][k] - pts_[from][k]);
      }
      return Location::at_coords(std::move(x));
    }
    case SpaceKind::Circle: {
      double s = circle_pos_[from];
      double fwd = pmod(circle_pos_[to] - s, circumference_);
      double dir = fwd <= circumference_ / 2.0 ? 1.0 : -1.0;
      return Location::at_coords({pmod(s + dir * dist, circumference_)});
    }
    case SpaceKind::Sphere: {
      const auto& a = pts_[from];
      const auto& b = pts_[to];
      double dot = clamp_unit(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
      std::array<double, 3> u{};
      for (int k = 0; k < 3; ++k) u[k] = b[k] - dot * a[k];
      double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
      if (un < 1e-15) {
        if (dot > 0.0) return Location::at_coords({a[0], a[1], a[2]});
        // Antipodal: pick a deterministic direction orthogonal to a.
        int k0 = std::fabs(a[0]) <= std::fabs(a[1])
                     ? (std::fabs(a[0]) <= std::fabs(a[2]) ? 0 : 2)
                     : (std::fabs(a[1]) <= std::fabs(a[2]) ? 1 : 2);
        std::array<double, 3> e{};
        e[k0] = 1.0;
        double proj = e[0] * a[0] + e[1] * a[1] + e[2] * a[2];
        for (int k = 0; k < 3; ++k) u[k] = e[k] - proj * a[k];
        un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
      }
      double theta = dist / sphere_radius_;
      std::vector<double> x(3);
      for (int k = 0; k < 3; ++k) x[k] = std::cos(theta) * a[k] + std::sin(theta) * (u[k] / un);
      return Location::at_coords(std::move(x));
    }
    case SpaceKind::HyperbolicDisk: {
      std::complex<double> a(pts_[from][0], pts_[from][1]);
      std::complex<double> b(pts_[to][0], pts_[to][1]);
      std::complex<double> bp = (b - a) / (1.0 - std::conj(a) * b);
      double bn = std::abs(bp);
      if (bn < 1e-15) return Location::at_coords({pts_[from][0], pts_[from][1]});
      std::complex<double> zeta = std::tanh(dist / 2.0) * (bp / bn);
      std::complex<double> x = (zeta + a) / (1.0 + std::conj(a) * zeta);
      return Location::at_coords({x.real(), x.imag()});
    }
    case SpaceKind::Tree:
      return Location::at_tree(tree_walk(tree_pts_[from], tree_pts_[to], dist));
    case SpaceKind::Finite:
      fail("UnsupportedMode", "finite-explicit spaces have no ambient geodesics");
  }
  fail("UnsupportedMode", "bad kind");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::vector<std::vector<double>> json_points(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) fail("ParseError", "missing points array");
  std::vector<std::vector<double>> pts;
  for (const auto& row : j[key]) {
    if (!row.is_array()) fail("ParseError", "points must be arrays of numbers");
    pts.push_back(row.get<std::vector<double>>());
  }
  return pts;
}

}  // namespace

Space Space::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    fail("ParseError", "space descriptor needs a string \"type\"");
  std::string type = j["type"].get<std::string>();
  try {
    if (type == "finite") {
      if (!j.contains("matrix")) fail("ParseError", "finite space needs \"matrix\"");
      return finite(j["matrix"].get<std::vector<std::vector<double>>>());
    }
    if (type == "euclidean" || type == "linf") {
      if (!j.contains("dim")) fail("ParseError", "point cloud needs \"dim\"");
      int dim = j["dim"].get<int>();
      auto pts = json_points(j, "points");
      return type == "euclidean" ? euclidean(dim, std::move(pts)) : linf(dim, std::move(pts));
    }
    if (type == "circle") {
      if (!j.contains("circumference")) fail("ParseError", "circle needs \"circumference\"");
      return circle(j["circumference"].get<double>(), j["points"].get<std::vector<double>>());
    }
    if (type == "sphere") {
      if (!j.contains("radius")) fail("ParseError", "sphere needs \"radius\"");
      auto pts = json_points(j, "points");
      std::vector<std::array<double, 3>> v;
      for (auto& p : pts) {
        if (p.size() != 3) fail("ParseError", "sphere points are 3-vectors");
        v.push_back({p[0], p[1], p[2]});
      }
      return sphere(j["radius"].get<double>(), std::move(v));
    }
    if (type == "hyperbolic-disk") {
      auto pts = json_points(j, "points");
      std::vector<std::array<double, 2>> v;
      for (auto& p : pts) {
        if (p.size() != 2) fail("ParseError", "disk points are 2-vectors");
        v.push_back({p[0], p[1]});
      }
      return hyperbolic_disk(std::move(v));
    }
    if (type == "tree") {
      if (!j.contains("nodes") || !j.contains("edges") || !j.contains("points"))
        fail("ParseError", "tree needs \"nodes\", \"edges\" and \"points\"");
      TreeTopology topo;
      std::unordered_map<std::string, int> idx;
      for (const auto& nd : j["nodes"]) {
        std::string lbl = nd.dump();
        if (idx.count(lbl)) fail("ParseError", "duplicate node id " + lbl);
        idx[lbl] = static_cast<int>(topo.node_labels.size());
        topo.node_labels.push_back(lbl);
      }
      auto node_of = [&idx](const nlohmann::json& v) {
        auto it = idx.find(v.dump());
        if (it == idx.end()) fail("ParseError", "unknown node id " + v.dump());
        return it->second;
      };
      for (const auto& ed : j["edges"]) {
        if (!ed.is_array() || ed.size() != 3) fail("ParseError", "edges are [a, b, length]");
        topo.edges.push_back({node_of(ed[0]), node_of(ed[1])});
        topo.edge_lengths.push_back(ed[2].get<double>());
      }
      std::vector<TreePoint> pts;
      for (const auto& pt : j["points"]) {
        if (pt.contains("node")) {
          int a = node_of(pt["node"]);
          pts.push_back({a, a, 0.0});
        } else if (pt.contains("edge")) {
          const auto& e = pt["edge"];
          if (!e.is_array() || e.size() != 2) fail("ParseError", "point edge is [a, b]");
          pts.push_back({node_of(e[0]), node_of(e[1]), pt.value("offset", 0.0)});
        } else {
          fail("ParseError", "tree point needs \"node\" or \"edge\"");
        }
      }
      return tree(std::move(topo), std::move(pts));
    }
  } catch (const nlohmann::json::exception& e) {
    fail("ParseError", e.what());
  }
  fail("ParseError", "unknown space type \"" + type + "\"");
}

Space Space::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("ParseError", std::string("bad JSON in ") + path + ": " + e.what());
  }
  return from_json(j);
}

// Node labels produced by the JSON loader are canonical dumps of the node
// ids, so they parse back to the original value; labels attached through the
// programmatic constructors are arbitrary strings and serialize as strings.
static nlohmann::ordered_json node_id_json(const std::string& label) {
  auto parsed = nlohmann::ordered_json::parse(label, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded()) return parsed;
  return nlohmann::ordered_json(label);
}

nlohmann::ordered_json Space::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = to_string(kind_);
  switch (kind_) {
    case SpaceKind::Finite: j["matrix"] = matrix_; break;
    case SpaceKind::Euclidean:
    case SpaceKind::Linf:
      j["dim"] = dim_;
      j["points"] = pts_;
      break;
    case SpaceKind::Circle:
      j["circumference"] = circumference_;
      j["points"] = circle_pos_;
      break;
    case SpaceKind::Sphere:
      j["radius"] = sphere_radius_;
      j["points"] = pts_;
      break;
    case SpaceKind::HyperbolicDisk: j["points"] = pts_; break;
    case SpaceKind::Tree: {
      nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
      for (const auto& lbl : tree_.node_labels) nodes.push_back(node_id_json(lbl));
      j["nodes"] = nodes;
      nlohmann::ordered_json edges = nlohmann::ordered_json::array();
      for (std::size_t e = 0; e < tree_.edges.size(); ++e)
        edges.push_back({node_id_json(tree_.node_labels[tree_.edges[e][0]]),
                         node_id_json(tree_.node_labels[tree_.edges[e][1]]),
                         tree_.edge_lengths[e]});
      j["edges"] = edges;
      nlohmann::ordered_json pts = nlohmann::ordered_json::array();
      for (const auto& p : tree_pts_) {
        nlohmann::ordered_json pj;
        if (p.is_node()) {
          pj["node"] = node_id_json(tree_.node_labels[p.a]);
        } else {
          pj["edge"] = {node_id_json(tree_.node_labels[p.a]),
                        node_id_json(tree_.node_labels[p.b])};
          pj["offset"] = p.offset;
        }
        pts.push_back(pj);
      }
      j["points"] = pts;
      break;
    }
  }
  return j;
}

nlohmann::ordered_json Location::to_json(const Space& s) const {
  nlohmann::ordered_json j;
  switch (kind) {
    case Kind::Index: j["index"] = index; break;
    case Kind::Coords: j["coords"] = coords; break;
    case Kind::Tree: {
      const auto& labels = s.tree_topology().node_labels;
      if (tree.is_node() || tree.offset == 0.0) {
        j["node"] = node_id_json(labels[tree.a]);
      } else {
        j["edge"] = {node_id_json(labels[tree.a]), node_id_json(labels[tree.b])};
        j["offset"] = tree.offset;
      }
      break;
    }
  }
  return j;
}

std::vector<std::vector<double>> pairwise_distances(const Space& s, std::span<const int> base) {
  std::size_t k = base.size();
  std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) d[a][b] = d[b][a] = s.distance(base[a], base[b]);
  return d;
}

}  // namespace mcurv
