#include "mcurv/triples.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcurv {

TriangleSides TriangleSides::validated(double d12, double d13, double d23) {
  const std::array<double, 3> v = {d12, d13, d23};
  for (double x : v) {
    if (!std::isfinite(x)) fail("NonFiniteInput", "triangle sides must be finite");
    if (x < 0.0) fail("NegativeLength", "triangle sides must be nonnegative");
  }
  const double slack = 1e-9 * (d12 + d13 + d23);
  auto check = [&](double a, double b, double c, const char* name) {
    if (a > b + c + slack)
      fail("TriangleInequalityViolated", std::string(name) + " exceeds the sum of the other two by " +
                                             std::to_string(a - b - c));
  };
  check(d12, d13, d23, "d12");
  check(d13, d12, d23, "d13");
  check(d23, d12, d13, "d23");
  return TriangleSides{d12, d13, d23};
}

TriangleSides triple_sides(const Space& s, int i, int j, int k) {
  const int n = s.point_count();
  for (int v : {i, j, k})
    if (v < 0 || v >= n)
      fail("IndexOutOfRange", "triple index " + std::to_string(v) + " outside sample of size " +
                                  std::to_string(n));
  return TriangleSides::validated(s.distance(i, j), s.distance(i, k), s.distance(j, k));
}

GromovRadii gromov_products(const TriangleSides& sides) {
  const TriangleSides t = TriangleSides::validated(sides.d12, sides.d13, sides.d23);
  GromovRadii g;
  g.sides = t;
  g.r1 = 0.5 * (t.d12 + t.d13 - t.d23);
  g.r2 = 0.5 * (t.d12 + t.d23 - t.d13);
  g.r3 = 0.5 * (t.d13 + t.d23 - t.d12);
  g.r1 = std::max(g.r1, 0.0);
  g.r2 = std::max(g.r2, 0.0);
  g.r3 = std::max(g.r3, 0.0);
  return g;
}

LambdaMeasure lambda_measure(const TriangleSides& sides) {
  const TriangleSides t = TriangleSides::validated(sides.d12, sides.d13, sides.d23);
  const std::array<double, 3> v = t.as_array();
  int arg = 0;
  for (int e = 1; e < 3; ++e)
    if (v[static_cast<std::size_t>(e)] > v[static_cast<std::size_t>(arg)]) arg = e;
  const double largest = v[static_cast<std::size_t>(arg)];
  if (largest <= 0.0) fail("DegenerateAllZero", "all triangle sides are zero");
  double rest = 0.0;
  for (int e = 0; e < 3; ++e)
    if (e != arg) rest += v[static_cast<std::size_t>(e)];
  LambdaMeasure m;
  m.lambda = std::clamp(rest / largest, 1.0, 2.0);
  m.argmax_edge = arg;
  return m;
}

std::optional<std::size_t> classify_triple(const TriangleSides& sides,
                                           std::span<const LambdaBin> bins) {
  const double lambda = lambda_measure(sides).lambda;
  for (std::size_t b = 0; b < bins.size(); ++b)
    if (std::fabs(lambda - bins[b].center) <= bins[b].half_width) return b;
  return std::nullopt;
}

bool is_degenerate(const GromovRadii& g) {
  const double scale = 1e-12 * g.sides.perimeter();
  return g.r1 < scale || g.r2 < scale || g.r3 < scale;
}

}  // namespace mcurv
