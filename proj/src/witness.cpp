#include "mcurv/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mcurv/euclid_minimax.hpp"
#include "mcurv/kernels.hpp"

namespace mcurv {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Family {
  std::vector<int> centers;
  std::vector<double> values;  // merged radii or weights
  std::size_t size() const { return centers.size(); }
};

// Duplicate center indices are merged; the smallest radius (or weight) is the
// binding one in both problems.
Family merge_family(const Space& s, std::span<const int> centers, std::span<const double> values,
                    bool positive_weights) {
  if (centers.empty()) fail("EmptyFamily", "ball family must contain at least one center");
  if (centers.size() != values.size())
    fail("SizeMismatch", "family has " + std::to_string(centers.size()) + " centers but " +
                             std::to_string(values.size()) + " radii/weights");
  Family f;
  f.centers.reserve(centers.size());
  f.values.reserve(centers.size());
  for (std::size_t t = 0; t < centers.size(); ++t) {
    const int c = centers[t];
    if (c < 0 || c >= s.point_count())
      fail("IndexOutOfRange", "center index " + std::to_string(c) + " outside sample of size " +
                                  std::to_string(s.point_count()));
    const double v = values[t];
    if (!std::isfinite(v)) fail("NonFiniteInput", "radius/weight must be finite");
    if (positive_weights && v <= 0.0)
      fail("NonPositiveWeight", "weights must be strictly positive");
    if (!positive_weights && v < 0.0) fail("NegativeRadius", "radii must be nonnegative");
    auto it = std::find(f.centers.begin(), f.centers.end(), c);
    if (it == f.centers.end()) {
      f.centers.push_back(c);
      f.values.push_back(v);
    } else {
      const std::size_t k = static_cast<std::size_t>(it - f.centers.begin());
      f.values[k] = std::min(f.values[k], v);
    }
  }
  return f;
}

double family_scale(const Space& s, const Family& f) {
  double m = 1.0;
  for (double v : f.values) m = std::max(m, v);
  for (std::size_t a = 0; a + 1 < f.size(); ++a)
    for (std::size_t b = a + 1; b < f.size(); ++b)
      m = std::max(m, s.distance(f.centers[a], f.centers[b]));
  return m;
}

double resolve_tol(double user_tol, double scale, bool exact_backend) {
  if (user_tol >= 0.0) return user_tol;
  return (exact_backend ? 64.0 * kEps : 1e-9) * scale;
}

// ---------------------------------------------------------------- intrinsic

MinimaxResult intrinsic_minimax(const Space& s, const Family& f) {
  const std::size_t n = static_cast<std::size_t>(s.point_count());
  const auto& kt = kernels::table();
  std::vector<double> acc(n, 0.0);
  std::vector<double> scratch;
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto row = s.distance_row(f.centers[t], scratch);
    kt.scale_max(acc.data(), row.data(), 1.0 / f.values[t], n);
  }
  const std::size_t j = kt.argmin(acc.data(), n);
  return {acc[j], Location::at_index(static_cast<int>(j)), true};
}

IntersectResult intrinsic_intersect(const Space& s, const Family& f, double tol) {
  const std::size_t n = static_cast<std::size_t>(s.point_count());
  const auto& kt = kernels::table();
  std::vector<double> acc(n, -kInf);
  std::vector<double> scratch;
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto row = s.distance_row(f.centers[t], scratch);
    kt.offset_max(acc.data(), row.data(), f.values[t], n);
  }
  const std::size_t j = kt.argmin(acc.data(), n);
  if (acc[j] <= tol) return {true, Location::at_index(static_cast<int>(j))};
  return {false, std::nullopt};
}

// ------------------------------------------------------------------- circle

double pmod(double x, double m) {
  double r = std::fmod(x, m);
  return r < 0.0 ? r + m : r;
}

double circ_dist(double a, double b, double c) {
  const double u = std::fabs(a - b);
  return std::min(u, c - u);
}

// A common point of circular arcs, if any, can be found among the arc centers
// and endpoints; arcs that wrap the whole circle impose no constraint.
std::optional<double> circle_feasible(const Space& s, const Family& f,
                                      std::span<const double> radii, double tol) {
  const double c = s.circumference();
  const auto& pos = s.circle_positions();
  std::vector<std::size_t> active;
  for (std::size_t t = 0; t < f.size(); ++t)
    if (2.0 * radii[t] < c) active.push_back(t);
  if (active.empty()) return pos[f.centers[0]];
  std::vector<double> cand;
  cand.reserve(3 * active.size());
  for (std::size_t t : active) {
    const double p = pos[f.centers[t]];
    cand.push_back(pmod(p, c));
    cand.push_back(pmod(p - radii[t], c));
    cand.push_back(pmod(p + radii[t], c));
  }
  for (double x : cand) {
    double worst = -kInf;
    for (std::size_t t : active)
      worst = std::max(worst, circ_dist(x, pos[f.centers[t]], c) - radii[t]);
    if (worst <= tol) return x;
  }
  return std::nullopt;
}

IntersectResult circle_intersect(const Space& s, const Family& f, double tol) {
  auto x = circle_feasible(s, f, f.values, tol);
  if (x) return {true, Location::at_coords({*x})};
  return {false, std::nullopt};
}

// The optimal scale is critical: either two arc endpoints meet (an ordered
// pair contributes gap / (w_a + w_b)) or one arc closes around the circle
// (c / (2 w_a)). Feasibility is monotone in the scale, so the optimum is the
// smallest feasible candidate.
MinimaxResult circle_minimax(const Space& s, const Family& f) {
  const double c = s.circumference();
  const auto& pos = s.circle_positions();
  const std::size_t k = f.size();
  std::vector<double> scales;
  scales.reserve(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    scales.push_back(c / (2.0 * f.values[a]));
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const double gap = pmod(pos[f.centers[b]] - pos[f.centers[a]], c);
      scales.push_back(gap / (f.values[a] + f.values[b]));
    }
  }
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  const double tol = 64.0 * kEps * std::max(1.0, c);
  std::vector<double> radii(k);
  auto feasible = [&](double t) {
    for (std::size_t i = 0; i < k; ++i) radii[i] = t * f.values[i];
    return circle_feasible(s, f, radii, tol);
  };
  std::size_t lo = 0, hi = scales.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(scales[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  double t = scales[lo];
  auto x = feasible(t);
  if (!x) {  // cannot happen: the largest candidate wraps every arc
    t = scales.back();
    x = feasible(t);
  }
  return {t, Location::at_coords({*x}), true};
}

// --------------------------------------------------------------------- linf

// Balls are axis-aligned boxes, so both problems decouple per coordinate and
// the minimax value is attained by the worst pair.
MinimaxResult linf_minimax(const Space& s, const Family& f) {
  const std::size_t k = f.size();
  double t = 0.0;
  for (std::size_t a = 0; a + 1 < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      t = std::max(t, s.distance(f.centers[a], f.centers[b]) / (f.values[a] + f.values[b]));
  const int dim = s.cloud_dim();
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    double lo = -kInf, hi = kInf;
    for (std::size_t a = 0; a < k; ++a) {
      const double cd = s.point_coords(f.centers[a])[static_cast<std::size_t>(d)];
      lo = std::max(lo, cd - t * f.values[a]);
      hi = std::min(hi, cd + t * f.values[a]);
    }
    x[static_cast<std::size_t>(d)] = 0.5 * (lo + hi);
  }
  return {t, Location::at_coords(std::move(x)), true};
}

IntersectResult linf_intersect(const Space& s, const Family& f, double tol) {
  const int dim = s.cloud_dim();
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    double lo = -kInf, hi = kInf;
    for (std::size_t a = 0; a < f.size(); ++a) {
      const double cd = s.point_coords(f.centers[a])[static_cast<std::size_t>(d)];
      lo = std::max(lo, cd - f.values[a]);
      hi = std::min(hi, cd + f.values[a]);
    }
    if (lo > hi + tol) return {false, std::nullopt};
    x[static_cast<std::size_t>(d)] = 0.5 * (lo + hi);
  }
  return {true, Location::at_coords(std::move(x))};
}

// --------------------------------------------------------------------- tree

// Balls in a metric tree are convex subtrees, and pairwise intersecting
// convex subtrees share a common point. At the critical value the worst pair
// pins the witness to the balanced point of its geodesic, which the remaining
// balls are then guaranteed to contain.
MinimaxResult tree_minimax(const Space& s, const Family& f) {
  const std::size_t k = f.size();
  std::size_t ia = 0, ib = 1;
  double t = -kInf;
  for (std::size_t a = 0; a + 1 < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double v = s.distance(f.centers[a], f.centers[b]) / (f.values[a] + f.values[b]);
      if (v > t) {
        t = v;
        ia = a;
        ib = b;
      }
    }
  t = std::max(t, 0.0);
  const auto& pts = s.tree_points();
  const TreePoint z =
      s.tree_walk(pts[f.centers[ia]], pts[f.centers[ib]], t * f.values[ia]);
  return {t, Location::at_tree(z), true};
}

IntersectResult tree_intersect(const Space& s, const Family& f, double tol) {
  const std::size_t k = f.size();
  std::size_t ia = 0, ib = 1;
  double worst = -kInf;
  for (std::size_t a = 0; a + 1 < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double v =
          s.distance(f.centers[a], f.centers[b]) - f.values[a] - f.values[b];
      if (v > worst) {
        worst = v;
        ia = a;
        ib = b;
      }
    }
  if (worst > tol) return {false, std::nullopt};
  const double d = s.distance(f.centers[ia], f.centers[ib]);
  const double a = std::clamp(0.5 * (d + f.values[ia] - f.values[ib]), 0.0, d);
  const auto& pts = s.tree_points();
  const TreePoint z = s.tree_walk(pts[f.centers[ia]], pts[f.centers[ib]], a);
  return {true, Location::at_tree(z)};
}

// ---------------------------------------------------------------- euclidean

std::vector<std::vector<double>> gather_coords(const Space& s, const Family& f) {
  std::vector<std::vector<double>> c;
  c.reserve(f.size());
  for (int idx : f.centers) c.push_back(s.point_coords(idx));
  return c;
}

MinimaxResult euclid_minimax_backend(const Space& s, const Family& f) {
  auto centers = gather_coords(s, f);
  if (auto exact = detail::euclid_ratio_minimax(centers, f.values))
    return {exact->value, Location::at_coords(std::move(exact->point)), true};
  auto approx = detail::euclid_ratio_descent(centers, f.values);
  return {approx.value, Location::at_coords(std::move(approx.point)), false};
}

IntersectResult euclid_intersect(const Space& s, const Family& f, double user_tol, double scale) {
  auto centers = gather_coords(s, f);
  auto exact = detail::euclid_offset_minimax(centers, f.values);
  const double tol = resolve_tol(user_tol, scale, exact.has_value());
  detail::MinimaxPoint best = exact ? std::move(*exact) : detail::euclid_offset_descent(centers, f.values);
  if (best.value <= tol) return {true, Location::at_coords(std::move(best.point))};
  return {false, std::nullopt};
}

// ------------------------------------------------- sphere / hyperbolic disk

// In any geodesic space the two-ball problems are solved on the connecting
// geodesic, which Space::geodesic_point parameterizes exactly.
MinimaxResult pair_geodesic_minimax(const Space& s, const Family& f) {
  const double d = s.distance(f.centers[0], f.centers[1]);
  const double t = d / (f.values[0] + f.values[1]);
  Location z = s.geodesic_point(f.centers[0], f.centers[1], std::min(t * f.values[0], d));
  return {t, std::move(z), true};
}

IntersectResult pair_geodesic_intersect(const Space& s, const Family& f, double tol) {
  const double d = s.distance(f.centers[0], f.centers[1]);
  if (d - f.values[0] - f.values[1] > tol) return {false, std::nullopt};
  const double a = std::clamp(0.5 * (d + f.values[0] - f.values[1]), 0.0, d);
  return {true, s.geodesic_point(f.centers[0], f.centers[1], a)};
}

void normalize3(std::array<double, 3>& p) {
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  p[0] /= n;
  p[1] /= n;
  p[2] /= n;
}

std::vector<std::array<double, 3>> build_icosphere(int levels) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<std::array<double, 3>> v = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) normalize3(p);
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<int, int>, int> cache;
    auto midpoint = [&](int a, int b) {
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      std::array<double, 3> m = {0.5 * (v[a][0] + v[b][0]), 0.5 * (v[a][1] + v[b][1]),
                                 0.5 * (v[a][2] + v[b][2])};
      normalize3(m);
      v.push_back(m);
      const int idx = static_cast<int>(v.size()) - 1;
      cache.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& t : faces) {
      const int ab = midpoint(t[0], t[1]);
      const int bc = midpoint(t[1], t[2]);
      const int ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  return v;
}

const std::vector<std::array<double, 3>>& icosphere_seeds() {
  static const std::vector<std::array<double, 3>> pts = build_icosphere(3);
  return pts;
}

std::vector<std::vector<double>> search_seeds(const Space& s, const Family& f) {
  std::vector<std::vector<double>> seeds;
  if (s.kind() == SpaceKind::Sphere) {
    for (const auto& p : icosphere_seeds()) seeds.push_back({p[0], p[1], p[2]});
  } else {
    double rmax = 0.0;
    for (int c : f.centers) {
      const auto& p = s.point_coords(c);
      rmax = std::max(rmax, std::hypot(p[0], p[1]));
    }
    const double renv = std::min(1.0 - 1e-9, 1.1 * rmax + 1e-3);
    seeds.push_back({0.0, 0.0});
    constexpr int kRings = 64, kAngles = 64;
    for (int j = 1; j <= kRings; ++j) {
      const double r = renv * j / kRings;
      for (int i = 0; i < kAngles; ++i) {
        const double a = 2.0 * M_PI * i / kAngles;
        seeds.push_back({r * std::cos(a), r * std::sin(a)});
      }
    }
  }
  for (int c : f.centers) seeds.push_back(s.point_coords(c));
  for (std::size_t a = 0; a + 1 < f.size(); ++a)
    for (std::size_t b = a + 1; b < f.size(); ++b) {
      const double d = s.distance(f.centers[a], f.centers[b]);
      Location mid = s.geodesic_point(f.centers[a], f.centers[b], 0.5 * d);
      seeds.push_back(std::move(mid.coords));
    }
  return seeds;
}

double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

// Batched distances from one sample point to every seed, mirroring the layout
// Space uses for its own rows: kernels produce the algebraic core and a
// scalar pass applies the transcendental map.
void seed_distances(const Space& s, int center, const std::vector<double>& soa, std::size_t m,
                    std::vector<double>& dist) {
  const auto& kt = kernels::table();
  const auto& q = s.point_coords(center);
  if (s.kind() == SpaceKind::Sphere) {
    kt.batch_dot3(q.data(), soa.data(), m, m, dist.data());
    const double r = s.sphere_radius();
    for (std::size_t j = 0; j < m; ++j) dist[j] = r * std::acos(clamp_unit(dist[j]));
  } else {
    kt.batch_poincare_arg(q[0], q[1], soa.data(), m, m, dist.data());
    for (std::size_t j = 0; j < m; ++j) dist[j] = std::acosh(std::max(1.0, dist[j]));
  }
}

// max_i of the scaled (ratio mode) or shifted (offset mode) distance to x.
double search_objective(const Space& s, const Family& f, std::span<const double> x, bool ratio) {
  double worst = -kInf;
  for (std::size_t t = 0; t < f.size(); ++t) {
    const auto& c = s.point_coords(f.centers[t]);
    const double d = s.coord_distance(x, c);
    worst = std::max(worst, ratio ? d / f.values[t] : d - f.values[t]);
  }
  return worst;
}

std::vector<double> best_seed(const Space& s, const Family& f, bool ratio) {
  auto seeds = search_seeds(s, f);
  const std::size_t m = seeds.size();
  const std::size_t dim = seeds[0].size();
  std::vector<double> soa(dim * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < dim; ++k) soa[k * m + j] = seeds[j][k];
  const auto& kt = kernels::table();
  std::vector<double> acc(m, ratio ? 0.0 : -kInf);
  std::vector<double> dist(m);
  for (std::size_t t = 0; t < f.size(); ++t) {
    seed_distances(s, f.centers[t], soa, m, dist);
    if (ratio)
      kt.scale_max(acc.data(), dist.data(), 1.0 / f.values[t], m);
    else
      kt.offset_max(acc.data(), dist.data(), f.values[t], m);
  }
  return seeds[kt.argmin(acc.data(), m)];
}

std::array<double, 3> rotate_toward(const std::array<double, 3>& x, const std::array<double, 3>& u,
                                    double angle) {
  const double c = std::cos(angle), sn = std::sin(angle);
  std::array<double, 3> y = {x[0] * c + u[0] * sn, x[1] * c + u[1] * sn, x[2] * c + u[2] * sn};
  normalize3(y);
  return y;
}

// Compass pattern search on the unit sphere: move along eight tangent
// directions, halve the step when no direction improves.
std::vector<double> refine_sphere(const Space& s, const Family& f, bool ratio,
                                  std::vector<double> x0, double step_floor) {
  std::array<double, 3> x = {x0[0], x0[1], x0[2]};
  normalize3(x);
  double fx = search_objective(s, f, std::span<const double>(x.data(), 3), ratio);
  double step = 0.5;
  for (int round = 0; round < 20000 && step >= step_floor; ++round) {
    int axis = 0;
    for (int k = 1; k < 3; ++k)
      if (std::fabs(x[k]) < std::fabs(x[axis])) axis = k;
    std::array<double, 3> u = {0, 0, 0};
    u[axis] = 1.0;
    const double proj = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
    for (int k = 0; k < 3; ++k) u[k] -= proj * x[k];
    normalize3(u);
    const std::array<double, 3> v = {x[1] * u[2] - x[2] * u[1], x[2] * u[0] - x[0] * u[2],
                                     x[0] * u[1] - x[1] * u[0]};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<std::array<double, 3>, 8> dirs;
    for (int k = 0; k < 3; ++k) {
      dirs[0][k] = u[k];
      dirs[1][k] = -u[k];
      dirs[2][k] = v[k];
      dirs[3][k] = -v[k];
      dirs[4][k] = (u[k] + v[k]) * inv_sqrt2;
      dirs[5][k] = (u[k] - v[k]) * inv_sqrt2;
      dirs[6][k] = (-u[k] + v[k]) * inv_sqrt2;
      dirs[7][k] = (-u[k] - v[k]) * inv_sqrt2;
    }
    double best = fx;
    std::array<double, 3> bx = x;
    for (const auto& d : dirs) {
      const auto y = rotate_toward(x, d, step);
      const double fy = search_objective(s, f, std::span<const double>(y.data(), 3), ratio);
      if (fy < best) {
        best = fy;
        bx = y;
      }
    }
    if (best < fx - 1e-12) {
      x = bx;
      fx = best;
    } else {
      step *= 0.5;
    }
  }
  return {x[0], x[1], x[2]};
}

std::vector<double> refine_disk(const Space& s, const Family& f, bool ratio,
                                std::vector<double> x0) {
  std::array<double, 2> x = {x0[0], x0[1]};
  auto clamp_disk = [](std::array<double, 2>& p) {
    const double n = std::hypot(p[0], p[1]);
    const double lim = 1.0 - 1e-12;
    if (n > lim) {
      p[0] *= lim / n;
      p[1] *= lim / n;
    }
  };
  clamp_disk(x);
  double fx = search_objective(s, f, std::span<const double>(x.data(), 2), ratio);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::array<std::array<double, 2>, 8> dirs = {{{1, 0},
                                                      {-1, 0},
                                                      {0, 1},
                                                      {0, -1},
                                                      {inv_sqrt2, inv_sqrt2},
                                                      {inv_sqrt2, -inv_sqrt2},
                                                      {-inv_sqrt2, inv_sqrt2},
                                                      {-inv_sqrt2, -inv_sqrt2}}};
  double step = 0.25;
  for (int round = 0; round < 20000 && step >= 1e-12; ++round) {
    double best = fx;
    std::array<double, 2> bx = x;
    for (const auto& d : dirs) {
      std::array<double, 2> y = {x[0] + step * d[0], x[1] + step * d[1]};
      clamp_disk(y);
      const double fy = search_objective(s, f, std::span<const double>(y.data(), 2), ratio);
      if (fy < best) {
        best = fy;
        bx = y;
      }
    }
    if (best < fx - 1e-12) {
      x = bx;
      fx = best;
    } else {
      step *= 0.5;
    }
  }
  return {x[0], x[1]};
}

MinimaxResult search_minimax(const Space& s, const Family& f, const MinimaxOptions& opts,
                             bool ratio) {
  std::vector<double> x = best_seed(s, f, ratio);
  if (s.kind() == SpaceKind::Sphere)
    x = refine_sphere(s, f, ratio, std::move(x), opts.descent_tol);
  else
    x = refine_disk(s, f, ratio, std::move(x));
  const double value = search_objective(s, f, x, ratio);
  return {value, Location::at_coords(std::move(x)), false};
}

}  // namespace

MinimaxResult minimax_scaled_distance(const Space& s, std::span<const int> centers,
                                      std::span<const double> weights, WitnessMode mode,
                                      const MinimaxOptions& opts) {
  if (!s.supports(mode))
    fail("UnsupportedMode", "ambient witnesses are not defined for a finite metric space");
  Family f = merge_family(s, centers, weights, /*positive_weights=*/true);
  if (mode == WitnessMode::IntrinsicSample) return intrinsic_minimax(s, f);
  if (f.size() == 1) return {0.0, s.location_of(f.centers[0]), true};
  // In every ambient model space (all Menger convex) the two-ball optimum is
  // d / (w1 + w2) on the connecting geodesic; computing it as exactly that
  // expression keeps Cech pair births bit-identical to Vietoris-Rips ones.
  if (f.size() == 2) return pair_geodesic_minimax(s, f);
  switch (s.kind()) {
    case SpaceKind::Circle:
      return circle_minimax(s, f);
    case SpaceKind::Linf:
      return linf_minimax(s, f);
    case SpaceKind::Tree:
      return tree_minimax(s, f);
    case SpaceKind::Euclidean:
      return euclid_minimax_backend(s, f);
    case SpaceKind::Sphere:
    case SpaceKind::HyperbolicDisk:
      return search_minimax(s, f, opts, /*ratio=*/true);
    case SpaceKind::Finite:
      break;  // excluded by the supports() check
  }
  fail("UnsupportedMode", "no ambient backend for this space kind");
}

IntersectResult balls_intersect(const Space& s, std::span<const int> centers,
                                std::span<const double> radii, WitnessMode mode,
                                const IntersectOptions& opts) {
  if (!s.supports(mode))
    fail("UnsupportedMode", "ambient witnesses are not defined for a finite metric space");
  Family f = merge_family(s, centers, radii, /*positive_weights=*/false);
  const double scale = family_scale(s, f);
  if (mode == WitnessMode::IntrinsicSample)
    return intrinsic_intersect(s, f, resolve_tol(opts.tol, scale, true));
  if (f.size() == 1) return {true, s.location_of(f.centers[0])};
  const bool iterative =
      s.kind() == SpaceKind::Sphere || s.kind() == SpaceKind::HyperbolicDisk;
  // Menger convexity: two balls meet iff r1 + r2 >= d, with the witness on
  // the connecting geodesic.
  if (f.size() == 2)
    return pair_geodesic_intersect(s, f, resolve_tol(opts.tol, scale, !iterative));
  switch (s.kind()) {
    case SpaceKind::Circle:
      return circle_intersect(s, f, resolve_tol(opts.tol, scale, true));
    case SpaceKind::Linf:
      return linf_intersect(s, f, resolve_tol(opts.tol, scale, true));
    case SpaceKind::Tree:
      return tree_intersect(s, f, resolve_tol(opts.tol, scale, true));
    case SpaceKind::Euclidean:
      return euclid_intersect(s, f, opts.tol, scale);
    case SpaceKind::Sphere:
    case SpaceKind::HyperbolicDisk: {
      const double tol = resolve_tol(opts.tol, scale, false);
      MinimaxOptions mo;
      MinimaxResult r = search_minimax(s, f, mo, /*ratio=*/false);
      if (r.value <= tol) return {true, std::move(r.witness)};
      return {false, std::nullopt};
    }
    case SpaceKind::Finite:
      break;
  }
  fail("UnsupportedMode", "no ambient backend for this space kind");
}

}  // namespace mcurv
