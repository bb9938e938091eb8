#include "mcurv/rho.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcurv/euclid_minimax.hpp"
#include "mcurv/rng.hpp"

namespace mcurv {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> gromov_weights(const GromovRadii& g) { return {g.r1, g.r2, g.r3}; }

}  // namespace

nlohmann::ordered_json RhoResult::to_json(const Space& s) const {
  nlohmann::ordered_json j;
  j["rho"] = rho;
  j["witness"] = witness.to_json(s);
  j["radii"] = radii;
  j["attained"] = attained;
  return j;
}

RhoResult rho_triple(const Space& s, int x1, int x2, int x3, WitnessMode mode) {
  const TriangleSides sides = triple_sides(s, x1, x2, x3);
  const GromovRadii g = gromov_products(sides);
  if (is_degenerate(g))
    fail("DegenerateTriple", "a Gromov product vanishes (collinear triple within tolerance)");
  RhoResult res;
  res.radii = gromov_weights(g);
  if (mode == WitnessMode::Ambient && s.kind() == SpaceKind::Tree) {
    // On a tree the three balls B(x_i, r_i) meet exactly at the median, which
    // sits at distance r1 from x1 along the x1 -> x2 geodesic; rho = 1 with
    // every constraint tight.
    const auto& pts = s.tree_points();
    const TreePoint median = s.tree_walk(pts[x1], pts[x2], g.r1);
    res.rho = 1.0;
    res.witness = Location::at_tree(median);
    res.attained = true;
    return res;
  }
  const std::array<int, 3> centers = {x1, x2, x3};
  MinimaxResult mm = minimax_scaled_distance(s, centers, res.radii, mode);
  res.rho = mm.value;
  res.witness = std::move(mm.witness);
  res.attained = mm.attained;
  return res;
}

double rho_circle_closed_form(double a12, double a13, double a23) {
  const std::array<double, 3> a = {a12, a13, a23};
  for (double x : a) {
    if (!std::isfinite(x)) fail("NonFiniteInput", "central angles must be finite");
    if (x < 0.0 || x > kPi + 1e-12)
      fail("UnrealizableAngles", "central angles of shorter arcs must lie in [0, pi]");
  }
  const double tol = 1e-12 * (a12 + a13 + a23);
  std::array<double, 3> theta = {0.5 * (a12 + a13 - a23), 0.5 * (a12 + a23 - a13),
                                 0.5 * (a13 + a23 - a12)};
  for (double t : theta)
    if (t < -tol) fail("UnrealizableAngles", "the per-point angle system has a negative solution");
  for (double t : theta)
    if (t <= tol) fail("DegenerateTriple", "a per-point angle vanishes (collinear configuration)");
  std::sort(theta.begin(), theta.end(), std::greater<double>());
  return 2.0 * kPi / (theta[0] + theta[1]) - 1.0;
}

CircumcenterResult weighted_circumcenter_euclidean(const std::array<double, 2>& x1,
                                                   const std::array<double, 2>& x2,
                                                   const std::array<double, 2>& x3) {
  auto dist = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
  };
  const TriangleSides sides = TriangleSides::validated(dist(x1, x2), dist(x1, x3), dist(x2, x3));
  const GromovRadii g = gromov_products(sides);
  if (is_degenerate(g)) fail("DegenerateTriple", "collinear plane triple");
  const std::vector<std::vector<double>> centers = {
      {x1[0], x1[1]}, {x2[0], x2[1]}, {x3[0], x3[1]}};
  const std::vector<double> weights = gromov_weights(g);
  auto mm = detail::euclid_ratio_minimax(centers, weights);
  if (!mm) fail("DegenerateTriple", "minimax enumeration failed on the plane triple");

  CircumcenterResult res;
  res.rho = mm->value;
  res.center = {mm->point[0], mm->point[1]};
  const std::array<std::array<int, 2>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
  const std::array<double, 3> ds = sides.as_array();
  for (std::size_t e = 0; e < 3; ++e) {
    const auto& ci = centers[static_cast<std::size_t>(pairs[e][0])];
    const auto& cj = centers[static_cast<std::size_t>(pairs[e][1])];
    const double uix = ci[0] - res.center[0], uiy = ci[1] - res.center[1];
    const double ujx = cj[0] - res.center[0], ujy = cj[1] - res.center[1];
    const double ni = std::sqrt(uix * uix + uiy * uiy);
    const double nj = std::sqrt(ujx * ujx + ujy * ujy);
    const double denom = std::max(ni * nj, 1e-300);
    const double cosang = std::clamp((uix * ujx + uiy * ujy) / denom, -1.0, 1.0);
    const double ri = weights[static_cast<std::size_t>(pairs[e][0])];
    const double rj = weights[static_cast<std::size_t>(pairs[e][1])];
    const double model = res.rho * res.rho * (ri * ri + rj * rj - 2.0 * ri * rj * cosang);
    res.residuals[e] = std::fabs(ds[e] * ds[e] - model);
  }
  return res;
}

RhoResult rho_tuple(const Space& s, std::span<const int> pts,
                    const std::optional<RadiusFunction>& radii, WitnessMode mode,
                    std::uint64_t seed) {
  const std::size_t k = pts.size();
  if (k < 3) fail("EmptyFamily", "rho_tuple requires at least three points");
  for (std::size_t a = 0; a < k; ++a) {
    if (pts[a] < 0 || pts[a] >= s.point_count())
      fail("IndexOutOfRange", "tuple index " + std::to_string(pts[a]) + " outside sample");
    for (std::size_t b = 0; b < a; ++b)
      if (pts[a] == pts[b]) fail("DuplicatePoints", "tuple points must be distinct");
  }
  double dmax = 0.0;
  for (std::size_t a = 0; a + 1 < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) dmax = std::max(dmax, s.distance(pts[a], pts[b]));
  if (dmax <= 0.0) fail("DegenerateTuple", "all tuple points coincide");
  const double rtol = 1e-12 * dmax;

  std::vector<std::vector<double>> candidates;
  if (radii) {
    if (radii->size() != k) fail("DomainMismatch", "radii domain size differs from the tuple");
    std::vector<double> aligned(k);
    for (std::size_t a = 0; a < k; ++a) {
      auto it = std::find(radii->domain.begin(), radii->domain.end(), pts[a]);
      if (it == radii->domain.end())
        fail("DomainMismatch", "radii are missing tuple point " + std::to_string(pts[a]));
      aligned[a] = radii->values[static_cast<std::size_t>(it - radii->domain.begin())];
    }
    candidates.push_back(std::move(aligned));
  } else if (k == 3) {
    const GromovRadii g =
        gromov_products(triple_sides(s, pts[0], pts[1], pts[2]));
    candidates.push_back(gromov_weights(g));
  } else {
    std::vector<double> r0(k);
    for (std::size_t a = 0; a < k; ++a) {
      double m = 0.0;
      for (std::size_t b = 0; b < k; ++b)
        if (b != a) m = std::max(m, s.distance(pts[a], pts[b]));
      r0[a] = 0.5 * m;
    }
    const RadiusFunction start =
        RadiusFunction::over(std::vector<int>(pts.begin(), pts.end()), r0);
    Rng rng(seed);
    for (int variant = 0; variant <= 4; ++variant) {
      std::vector<int> order;
      if (variant > 0) order = rng.permutation(static_cast<int>(k));
      const MinorantResult m = extremal_minorant(s, start, order);
      if (std::find(candidates.begin(), candidates.end(), m.r.values) == candidates.end())
        candidates.push_back(m.r.values);
    }
  }

  std::optional<RhoResult> best;
  for (const auto& cand : candidates) {
    if (*std::min_element(cand.begin(), cand.end()) < rtol) continue;
    MinimaxResult mm = minimax_scaled_distance(s, pts, cand, mode);
    if (!best || mm.value > best->rho) {
      RhoResult r;
      r.rho = mm.value;
      r.witness = std::move(mm.witness);
      r.radii = cand;
      r.attained = mm.attained;
      best = std::move(r);
    }
  }
  if (!best) fail("DegenerateTuple", "every candidate radius assignment has a vanishing radius");
  return *std::move(best);
}

ExpansionEstimate expansion_constant_estimate(const Space& s, std::span<const int> sample,
                                              int arity_max, int n_tuples, std::uint64_t seed,
                                              WitnessMode mode) {
  if (arity_max < 3) fail("InvalidArity", "arity_max must be at least 3");
  if (n_tuples < 1) fail("InvalidArity", "n_tuples must be at least 1");
  if (sample.size() < 3)
    fail("SampleTooSmall", "expansion estimation needs at least three sample points");
  for (int p : sample)
    if (p < 0 || p >= s.point_count())
      fail("IndexOutOfRange", "sample index " + std::to_string(p) + " outside the space");

  const int amax = std::min<int>(arity_max, static_cast<int>(sample.size()));
  Rng rng(seed);
  ExpansionEstimate est;
  est.arity_max = arity_max;
  for (int t = 0; t < n_tuples; ++t) {
    const int arity = 3 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(amax - 2)));
    std::vector<int> positions = rng.sample_distinct(static_cast<int>(sample.size()), arity);
    std::sort(positions.begin(), positions.end());
    std::vector<int> tuple(positions.size());
    for (std::size_t a = 0; a < positions.size(); ++a)
      tuple[a] = sample[static_cast<std::size_t>(positions[a])];
    const std::uint64_t tuple_seed = rng.next_u64();
    try {
      const RhoResult r = rho_tuple(s, tuple, std::nullopt, mode, tuple_seed);
      if (r.rho > est.mu_hat) {
        est.mu_hat = r.rho;
        est.argmax_tuple = tuple;
      }
    } catch (const DomainError& e) {
      if (e.code() == "DegenerateTuple" || e.code() == "DegenerateTriple" ||
          e.code() == "TriangleInequalityViolated")
        continue;
      throw;
    }
  }
  return est;
}

double rho_profile_value_x2(const Space& s, int x1, int x2, int x3, WitnessMode mode) {
  const TriangleSides sides = triple_sides(s, x1, x2, x3);
  const double dmax = std::max({sides.d12, sides.d13, sides.d23});
  const double tol = 1e-9 * dmax;
  if (std::fabs(sides.d12 - sides.d13) > tol || std::fabs(sides.d12 - sides.d23) > tol ||
      std::fabs(sides.d13 - sides.d23) > tol)
    fail("NotEquilateral", "the identity applies to equilateral triples only");
  if (dmax <= 0.0) fail("DegenerateTriple", "all three points coincide");
  const double r = 0.5 * sides.perimeter();
  const std::array<int, 3> centers = {x1, x2, x3};
  const std::array<double, 3> unit = {1.0, 1.0, 1.0};
  const MinimaxResult mm = minimax_scaled_distance(s, centers, unit, mode);
  return 3.0 * mm.value / r;
}

}  // namespace mcurv
