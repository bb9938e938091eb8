#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "mcurv/rho.hpp"

using namespace mcurv;

namespace {
constexpr double kTwoOverSqrt3 = 1.1547005383792517;
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("rho closed forms") {
  SUBCASE("plane equilateral") {
    auto s = helpers::equilateral_plane();
    auto res = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
    CHECK(res.rho == doctest::Approx(kTwoOverSqrt3).epsilon(1e-12));
    CHECK(res.attained);
    REQUIRE(res.radii.size() == 3);
    // the sqrt in d13/d23 can sit an ulp below 1, so the radii are not dyadic
    for (double r : res.radii) CHECK(r == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(res.witness.kind == Location::Kind::Coords);
    CHECK(res.witness.coords[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.witness.coords[1] == doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-9));
  }

  SUBCASE("tree triples sit at the floor, exactly") {
    auto s = helpers::sample_tree();
    auto res = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
    CHECK(res.rho == 1.0);
    CHECK(res.attained);
    CHECK(res.radii == std::vector<double>{1.0, 2.0, 4.0});
    int checked = 0;
    for (int i = 0; i < s.point_count(); ++i)
      for (int j = i + 1; j < s.point_count(); ++j)
        for (int k = j + 1; k < s.point_count(); ++k) {
          try {
            auto r = rho_triple(s, i, j, k, WitnessMode::Ambient);
            CHECK(r.rho == 1.0);
            ++checked;
          } catch (const DomainError& e) {
            // triples with one point on the geodesic of the others
            CHECK(e.code() == "DegenerateTriple");
          }
        }
    CHECK(checked == 6);
  }

  SUBCASE("equidistant circle triple") {
    auto s = helpers::circle_equidistant(3);
    auto res = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
    CHECK(res.rho == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("equidistant great-circle triple on the sphere") {
    auto s = helpers::sphere_equidistant();
    auto res = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
    CHECK(res.rho == doctest::Approx(1.5).epsilon(1e-6));
  }
}

TEST_CASE("rho on the circle matches the angle closed form") {
  CHECK(rho_circle_closed_form(2.0 * kPi / 3.0, 2.0 * kPi / 3.0, 2.0 * kPi / 3.0) ==
        doctest::Approx(2.0).epsilon(1e-15));
  // per-point angles (pi/2, pi/4, pi/4)
  CHECK(rho_circle_closed_form(0.75 * kPi, 0.75 * kPi, 0.5 * kPi) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-15));

  // same configuration as sample positions on a unit-circumference circle
  auto s = Space::circle(1.0, {0.0, 0.375, 0.625});
  auto res = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
  CHECK(res.rho == doctest::Approx(5.0 / 3.0).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(rho_circle_closed_form(4.0, 1.0, 1.0),
                       doctest::Contains("UnrealizableAngles"), DomainError);
  CHECK_THROWS_WITH_AS(rho_circle_closed_form(kPi, kPi / 8.0, kPi / 8.0),
                       doctest::Contains("UnrealizableAngles"), DomainError);
  CHECK_THROWS_WITH_AS(rho_circle_closed_form(1.0, 0.5, 0.5),
                       doctest::Contains("DegenerateTriple"), DomainError);
  CHECK_THROWS_WITH_AS(rho_circle_closed_form(std::nan(""), 1.0, 1.0),
                       doctest::Contains("NonFiniteInput"), DomainError);
}

TEST_CASE("collinear triples are rejected") {
  auto s = Space::euclidean(2, {{0, 0}, {1, 0}, {2, 0}});
  CHECK_THROWS_WITH_AS(rho_triple(s, 0, 1, 2, WitnessMode::Ambient),
                       doctest::Contains("DegenerateTriple"), DomainError);
}

TEST_CASE("hyperbolic equilateral rho values") {
  // reference values from a dense-grid minimization independent of this
  // implementation; side s needs vertices at euclidean radius t with
  // cosh(s) = 1 + 6 t^2 / (1 - t^2)^2
  const std::vector<std::pair<double, double>> expected = {
      {0.1, 1.154540383}, {0.5, 1.150823950}, {1.0, 1.140579654},
      {2.0, 1.112735305}, {5.0, 1.056865451}, {10.0, 1.028765937}};
  for (const auto& [side, want] : expected) {
    const double target = std::cosh(side);
    double lo = 0.0, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double q = 1.0 - mid * mid;
      (1.0 + 6.0 * mid * mid / (q * q) < target ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    std::vector<std::array<double, 2>> pts;
    for (int k = 0; k < 3; ++k) {
      const double ang = 2.0 * M_PI * k / 3.0;
      pts.push_back({t * std::cos(ang), t * std::sin(ang)});
    }
    auto res = rho_triple(Space::hyperbolic_disk(pts), 0, 1, 2, WitnessMode::Ambient);
    CAPTURE(side);
    CHECK(res.rho == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("weighted circumcenter on the plane") {
  SUBCASE("equilateral reduces to the classical circumcenter") {
    auto c = weighted_circumcenter_euclidean({0.0, 0.0}, {1.0, 0.0},
                                             {0.5, std::sqrt(3.0) / 2.0});
    CHECK(c.center[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.center[1] == doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(c.rho == doctest::Approx(kTwoOverSqrt3).epsilon(1e-12));
    for (double res : c.residuals) CHECK(std::fabs(res) <= 1e-9);
  }

  SUBCASE("scaled distances from the center are equal") {
    const std::array<double, 2> p1 = {0.0, 0.0};
    const std::array<double, 2> p2 = {3.0, 0.0};
    const std::array<double, 2> p3 = {0.0, 4.0};
    auto c = weighted_circumcenter_euclidean(p1, p2, p3);
    auto g = gromov_products(TriangleSides::validated(3.0, 4.0, 5.0));
    const double s1 = std::hypot(c.center[0] - p1[0], c.center[1] - p1[1]) / g.r1;
    const double s2 = std::hypot(c.center[0] - p2[0], c.center[1] - p2[1]) / g.r2;
    const double s3 = std::hypot(c.center[0] - p3[0], c.center[1] - p3[1]) / g.r3;
    CHECK(s1 == doctest::Approx(c.rho).epsilon(1e-9));
    CHECK(s2 == doctest::Approx(c.rho).epsilon(1e-9));
    CHECK(s3 == doctest::Approx(c.rho).epsilon(1e-9));
    for (double res : c.residuals) CHECK(std::fabs(res) <= 1e-9);

    // the equi-ratio point is feasible for the minimax, so it upper-bounds rho
    auto s = Space::euclidean(2, {{0, 0}, {3, 0}, {0, 4}});
    auto tri = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
    CHECK(tri.rho <= c.rho + 1e-9);
  }
}

TEST_CASE("intrinsic rho on a bare matrix") {
  auto s = Space::finite({{0, 3, 4}, {3, 0, 5}, {4, 5, 0}});
  auto res = rho_triple(s, 0, 1, 2, WitnessMode::IntrinsicSample);
  CHECK(res.rho == 1.5);
  CHECK(res.attained);
  CHECK(res.witness.kind == Location::Kind::Index);
  CHECK(res.witness.index == 0);
  CHECK(res.radii == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("rho_tuple") {
  SUBCASE("k = 3 agrees with the triple form") {
    auto s = helpers::equilateral_plane();
    const std::vector<int> pts = {0, 1, 2};
    auto tup = rho_tuple(s, pts, std::nullopt, WitnessMode::Ambient);
    auto tri = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
    CHECK(tup.rho == doctest::Approx(tri.rho).epsilon(1e-12));
    CHECK(tup.radii == tri.radii);
  }

  SUBCASE("four equidistant circle points") {
    auto s = helpers::circle_equidistant(4);
    const std::vector<int> pts = {0, 1, 2, 3};
    auto res = rho_tuple(s, pts, std::nullopt, WitnessMode::Ambient);
    CHECK(res.rho == doctest::Approx(1.5).epsilon(1e-12));
    REQUIRE(res.radii.size() == 4);
    for (double r : res.radii) CHECK(r == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("explicit radii are honored") {
    auto s = helpers::circle_equidistant(4);
    const std::vector<int> pts = {0, 1, 2, 3};
    auto r = RadiusFunction::constant({0, 1, 2, 3}, 0.25);
    auto res = rho_tuple(s, pts, r, WitnessMode::Ambient);
    CHECK(res.rho == doctest::Approx(1.5).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(
        rho_tuple(s, pts, RadiusFunction::constant({0, 1, 2}, 0.25), WitnessMode::Ambient),
        doctest::Contains("DomainMismatch"), DomainError);
    CHECK_THROWS_WITH_AS(
        rho_tuple(s, pts, RadiusFunction::constant({0, 1, 2, 7}, 0.25), WitnessMode::Ambient),
        doctest::Contains("DomainMismatch"), DomainError);
  }

  SUBCASE("input validation") {
    auto s = helpers::equilateral_plane();
    CHECK_THROWS_WITH_AS(rho_tuple(s, std::vector<int>{0, 1}, std::nullopt, WitnessMode::Ambient),
                         doctest::Contains("EmptyFamily"), DomainError);
    CHECK_THROWS_WITH_AS(
        rho_tuple(s, std::vector<int>{0, 1, 1}, std::nullopt, WitnessMode::Ambient),
        doctest::Contains("DuplicatePoints"), DomainError);
    CHECK_THROWS_WITH_AS(
        rho_tuple(s, std::vector<int>{0, 1, 9}, std::nullopt, WitnessMode::Ambient),
        doctest::Contains("IndexOutOfRange"), DomainError);
    auto zero = Space::finite({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK_THROWS_WITH_AS(
        rho_tuple(zero, std::vector<int>{0, 1, 2}, std::nullopt, WitnessMode::IntrinsicSample),
        doctest::Contains("DegenerateTuple"), DomainError);
  }
}

TEST_CASE("expansion constant estimates") {
  SUBCASE("trees do not expand") {
    auto s = helpers::sample_tree();
    std::vector<int> sample(static_cast<std::size_t>(s.point_count()));
    for (int i = 0; i < s.point_count(); ++i) sample[static_cast<std::size_t>(i)] = i;
    auto est = expansion_constant_estimate(s, sample, 3, 60, 1, WitnessMode::Ambient);
    CHECK(std::fabs(est.mu_hat - 1.0) <= 1e-9);
  }

  SUBCASE("plane samples stay below the equilateral bound") {
    Rng rng(99);
    auto s = helpers::random_cloud(rng, 8, 2, false);
    std::vector<int> sample = {0, 1, 2, 3, 4, 5, 6, 7};
    auto est = expansion_constant_estimate(s, sample, 3, 40, 7, WitnessMode::Ambient);
    CHECK(est.mu_hat >= 1.0);
    CHECK(est.mu_hat <= kTwoOverSqrt3 + 1e-6);
    if (est.mu_hat > 1.0) {
      CHECK(est.argmax_tuple.size() == 3);
    }
  }

  SUBCASE("deterministic under a fixed seed") {
    Rng rng(5);
    auto s = helpers::random_cloud(rng, 7, 3, false);
    std::vector<int> sample = {0, 1, 2, 3, 4, 5, 6};
    auto a = expansion_constant_estimate(s, sample, 5, 25, 42, WitnessMode::Ambient);
    auto b = expansion_constant_estimate(s, sample, 5, 25, 42, WitnessMode::Ambient);
    CHECK(a.mu_hat == b.mu_hat);
    CHECK(a.argmax_tuple == b.argmax_tuple);
    CHECK(a.arity_max == 5);
  }

  SUBCASE("validation") {
    auto s = helpers::equilateral_plane();
    std::vector<int> sample = {0, 1, 2};
    CHECK_THROWS_WITH_AS(expansion_constant_estimate(s, sample, 2, 10, 0, WitnessMode::Ambient),
                         doctest::Contains("InvalidArity"), DomainError);
    CHECK_THROWS_WITH_AS(expansion_constant_estimate(s, sample, 3, 0, 0, WitnessMode::Ambient),
                         doctest::Contains("InvalidArity"), DomainError);
    CHECK_THROWS_WITH_AS(
        expansion_constant_estimate(s, std::vector<int>{0, 1}, 3, 10, 0, WitnessMode::Ambient),
        doctest::Contains("SampleTooSmall"), DomainError);
    CHECK_THROWS_WITH_AS(
        expansion_constant_estimate(s, std::vector<int>{0, 1, 5}, 3, 10, 0, WitnessMode::Ambient),
        doctest::Contains("IndexOutOfRange"), DomainError);
  }
}

TEST_CASE("equilateral profile identity") {
  auto s = helpers::equilateral_plane();
  auto tri = rho_triple(s, 0, 1, 2, WitnessMode::Ambient);
  CHECK(rho_profile_value_x2(s, 0, 1, 2) == doctest::Approx(tri.rho).epsilon(1e-9));

  auto c = helpers::circle_equidistant(3);
  CHECK(rho_profile_value_x2(c, 0, 1, 2) == doctest::Approx(2.0).epsilon(1e-12));

  auto bad = Space::finite({{0, 3, 4}, {3, 0, 5}, {4, 5, 0}});
  CHECK_THROWS_WITH_AS(rho_profile_value_x2(bad, 0, 1, 2, WitnessMode::IntrinsicSample),
                       doctest::Contains("NotEquilateral"), DomainError);
}
