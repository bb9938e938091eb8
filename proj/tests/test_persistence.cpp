#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "mcurv/persistence.hpp"

using namespace mcurv;

namespace {

// exact doubles for the unit-circumference equidistant triple
constexpr double kThird = 0.33333333333333331;
constexpr double kThirdUp = 0.33333333333333337;
constexpr double kSixth = 0.16666666666666666;
constexpr double kSixthUp = 0.16666666666666669;

FilteredComplex hand_filtration(std::vector<std::pair<std::vector<int>, double>> rows,
                                int dim_cap = 2) {
  FilteredComplex f;
  f.dim_cap = dim_cap;
  double tmax = 0.0;
  for (auto& [verts, birth] : rows) {
    for (int v : verts)
      if (std::find(f.base_points.begin(), f.base_points.end(), v) == f.base_points.end())
        f.base_points.push_back(v);
    f.simplices.push_back({Simplex{verts}, birth});
    tmax = std::max(tmax, birth);
  }
  std::sort(f.base_points.begin(), f.base_points.end());
  f.t_max = tmax;
  return f;
}

const PersistencePair* find_pair(const Barcode& b, int dim, double birth, double death) {
  for (const auto& p : b.pairs)
    if (p.dim == dim && p.birth == birth && p.death == death) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("equidistant circle triple, nerve flavor") {
  auto s = helpers::circle_equidistant(3);
  const std::vector<int> base = {0, 1, 2};
  auto f = cech_filtration(s, base, Schedule::uniform(), WitnessMode::Ambient, 2);
  auto bc = compute_persistence(f, 1);

  CHECK(bc.max_dim == 1);
  CHECK(bc.flavor == ComplexFlavor::Cech);

  // one component forever, two merged when the short edges arrive
  CHECK(find_pair(bc, 0, 0.0, std::numeric_limits<double>::infinity()));
  int h0_finite = 0;
  for (const auto& p : bc.pairs)
    if (p.dim == 0 && p.finite()) {
      CHECK(p.death == kSixth);
      ++h0_finite;
    }
  CHECK(h0_finite == 2);

  // the hole lives from the closing edge until the triple overlap
  const auto* hole = find_pair(bc, 1, kSixthUp, kThird);
  REQUIRE(hole);
  CHECK_FALSE(hole->zero_length);
  CHECK(hole->creator.vertices == std::vector<int>{0, 2});
  REQUIRE(hole->destroyer.has_value());
  CHECK(hole->destroyer->vertices == std::vector<int>{0, 1, 2});

  SUBCASE("rank queries") {
    CHECK(bc.rank_at(0, 0.0) == 3);
    CHECK(bc.rank_at(0, 0.2) == 1);
    CHECK(bc.rank_at(0, 10.0) == 1);
    CHECK(bc.rank_at(1, 0.1) == 0);
    CHECK(bc.rank_at(1, kSixthUp) == 1);  // birth inclusive
    CHECK(bc.rank_at(1, 0.2) == 1);
    CHECK(bc.rank_at(1, kThird) == 0);  // death exclusive
  }

  SUBCASE("csv output") {
    const std::string path = "persistence_circle.csv";
    write_barcode_csv(bc, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(text.find("dim,birth,death\n") == 0);
    CHECK(text.find("0,0,inf") != std::string::npos);
    CHECK(text.find("1,0.16666666666666669,0.33333333333333331") != std::string::npos);
    std::remove(path.c_str());
  }
}

TEST_CASE("equidistant circle triple, flag flavor has a zero-length hole") {
  auto s = helpers::circle_equidistant(3);
  const std::vector<int> base = {0, 1, 2};
  auto f = vr_filtration(base, pairwise_distances(s, base), Schedule::uniform(), 2);
  auto bc = compute_persistence(f, 1);
  const auto* hole = find_pair(bc, 1, kSixthUp, kSixthUp);
  REQUIRE(hole);
  CHECK(hole->zero_length);
}

TEST_CASE("rotated square in the max metric keeps a hole until the diagonals arrive") {
  // Hyperconvexity makes the nerve a flag complex (so both flavors agree
  // bar-for-bar), but it does not make slices below the admissible scale
  // trivial: these four points sit at mutual max-distance 1 around a gap, the
  // boundary cycle closes at 0.5, and no triangle can fill it before the
  // diagonal edges (distance 2) arrive at 1.
  auto s = Space::linf(2, {{1.0, 0.0}, {2.0, 1.0}, {1.0, 2.0}, {0.0, 1.0}});
  const std::vector<int> base = {0, 1, 2, 3};
  auto cech = cech_filtration(s, base, Schedule::uniform(), WitnessMode::Ambient, 2);
  auto vr = vr_filtration(base, pairwise_distances(s, base), Schedule::uniform(), 2);
  auto bc = compute_persistence(cech, 1);
  auto bv = compute_persistence(vr, 1);
  REQUIRE(bc.pairs.size() == bv.pairs.size());
  for (std::size_t i = 0; i < bc.pairs.size(); ++i) {
    CHECK(bc.pairs[i].dim == bv.pairs[i].dim);
    CHECK(bc.pairs[i].birth == bv.pairs[i].birth);
    CHECK(bc.pairs[i].death == bv.pairs[i].death);
  }
  int positive_h1 = 0;
  for (const auto& p : bc.pairs)
    if (p.dim == 1 && p.finite() && p.death > p.birth) {
      ++positive_h1;
      CHECK(p.birth == 0.5);
      CHECK(p.death == 1.0);
    }
  CHECK(positive_h1 == 1);
  CHECK(bc.rank_at(1, 0.75) == 1);
  CHECK(bc.rank_at(1, 1.0) == 0);
}

TEST_CASE("hand-built complexes") {
  SUBCASE("hollow triangle has an essential hole") {
    auto f = hand_filtration({{{0}, 0.0}, {{1}, 0.0}, {{2}, 0.0},
                              {{0, 1}, 1.0}, {{0, 2}, 1.0}, {{1, 2}, 1.0}});
    auto bc = compute_persistence(f, 1);
    int essential1 = 0;
    for (const auto& p : bc.pairs)
      if (p.dim == 1 && !p.finite()) ++essential1;
    CHECK(essential1 == 1);
    CHECK(bc.rank_at(1, 5.0) == 1);
  }

  SUBCASE("isolated points never merge") {
    auto f = hand_filtration({{{0}, 0.0}, {{1}, 0.0}, {{2}, 0.0}, {{3}, 0.0}});
    auto bc = compute_persistence(f, 1);
    CHECK(bc.pairs.size() == 4);
    for (const auto& p : bc.pairs) {
      CHECK(p.dim == 0);
      CHECK_FALSE(p.finite());
    }
    CHECK(bc.rank_at(0, 100.0) == 4);
  }

  SUBCASE("boundary of the solid tetrahedron") {
    std::vector<std::pair<std::vector<int>, double>> rows;
    for (int v = 0; v < 4; ++v) rows.push_back({{v}, 0.0});
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) rows.push_back({{a, b}, 1.0});
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = b + 1; c < 4; ++c) rows.push_back({{a, b, c}, 2.0});
    auto f = hand_filtration(rows);
    auto bc = compute_persistence(f, 2);
    int essential2 = 0;
    for (const auto& p : bc.pairs)
      if (p.dim == 2 && !p.finite()) ++essential2;
    CHECK(essential2 == 1);
    CHECK(bc.rank_at(2, 2.0) == 1);
    CHECK(bc.rank_at(1, 2.0) == 0);
    CHECK(bc.rank_at(1, 1.5) == 3);  // cycle space before the faces arrive
  }
}

TEST_CASE("invalid filtrations are rejected") {
  SUBCASE("empty") {
    FilteredComplex f;
    CHECK_THROWS_WITH_AS(compute_persistence(f, 1), doctest::Contains("InvalidFiltration"),
                         DomainError);
  }
  SUBCASE("negative max_dim") {
    auto f = hand_filtration({{{0}, 0.0}});
    CHECK_THROWS_WITH_AS(compute_persistence(f, -1), doctest::Contains("InvalidFiltration"),
                         DomainError);
  }
  SUBCASE("missing facet") {
    auto f = hand_filtration({{{0}, 0.0}, {{1}, 0.0}, {{0, 1, 2}, 1.0}});
    f.dim_cap = 2;
    CHECK_THROWS_WITH_AS(compute_persistence(f, 1), doctest::Contains("InvalidFiltration"),
                         DomainError);
  }
  SUBCASE("facet after cofacet") {
    FilteredComplex f;
    f.base_points = {0, 1};
    f.dim_cap = 1;
    f.t_max = 1.0;
    f.simplices.push_back({Simplex{{0}}, 0.0});
    f.simplices.push_back({Simplex{{0, 1}}, 0.5});
    f.simplices.push_back({Simplex{{1}}, 1.0});
    CHECK_THROWS_WITH_AS(compute_persistence(f, 1), doctest::Contains("InvalidFiltration"),
                         DomainError);
  }
  SUBCASE("unsorted births") {
    FilteredComplex f;
    f.base_points = {0, 1};
    f.dim_cap = 1;
    f.t_max = 1.0;
    f.simplices.push_back({Simplex{{0}}, 1.0});
    f.simplices.push_back({Simplex{{1}}, 0.0});
    CHECK_THROWS_WITH_AS(compute_persistence(f, 1), doctest::Contains("InvalidFiltration"),
                         DomainError);
  }
  SUBCASE("duplicate simplex") {
    auto f = hand_filtration({{{0}, 0.0}, {{0}, 0.0}});
    CHECK_THROWS_WITH_AS(compute_persistence(f, 1), doctest::Contains("InvalidFiltration"),
                         DomainError);
  }
}

TEST_CASE("brute-force betti numbers") {
  auto s = helpers::circle_equidistant(3);
  const std::vector<int> base = {0, 1, 2};
  auto r_small = RadiusFunction::constant(base, 0.25);
  auto hollow = cech_slice(s, base, r_small, WitnessMode::Ambient, 2);
  CHECK(betti_bruteforce(hollow, 0) == 1);
  CHECK(betti_bruteforce(hollow, 1) == 1);
  CHECK(betti_bruteforce(hollow, 2) == 0);
  CHECK_FALSE(homology_trivial_above_dim0(hollow));

  auto filled = vr_slice(base, pairwise_distances(s, base), r_small, 2);
  CHECK(betti_bruteforce(filled, 0) == 1);
  CHECK(betti_bruteforce(filled, 1) == 0);
  CHECK(homology_trivial_above_dim0(filled));

  SUBCASE("sphere-like shell") {
    auto ones = Space::finite({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
    const std::vector<int> all = {0, 1, 2, 3};
    auto dists = pairwise_distances(ones, all);
    auto shell = vr_slice(all, dists, RadiusFunction::constant(all, 0.5), 2);
    CHECK(shell.simplices.size() == 14);
    CHECK(betti_bruteforce(shell, 2) == 1);
    CHECK(betti_bruteforce(shell, 1) == 0);
    CHECK(betti_bruteforce(shell, 0) == 1);

    auto solid = vr_slice(all, dists, RadiusFunction::constant(all, 0.5), 3);
    CHECK(betti_bruteforce(solid, 2) == 0);
    CHECK(homology_trivial_above_dim0(solid));
  }

  SUBCASE("validation") {
    CHECK_THROWS_WITH_AS(betti_bruteforce(hollow, -1), doctest::Contains("IndexOutOfRange"),
                         DomainError);
    SliceComplex torn = hollow;
    torn.simplices.erase(torn.simplices.begin());  // drop vertex {0}
    CHECK_THROWS_WITH_AS(betti_bruteforce(torn, 1), doctest::Contains("InvalidSlice"),
                         DomainError);

    SliceComplex big;
    big.dim_cap = 1;
    for (int v = 0; v < 5001; ++v) {
      big.base_points.push_back(v);
      big.simplices.push_back(Simplex{{v}});
    }
    big.radius_fn = RadiusFunction::constant(big.base_points, 1.0);
    CHECK_THROWS_WITH_AS(betti_bruteforce(big, 0), doctest::Contains("TooLarge"), DomainError);
  }
}

TEST_CASE("reduction agrees with the brute force on random filtrations") {
  Rng rng(812);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 4 + static_cast<int>(rng.next_below(4));
    const bool flag = rep % 2 == 0;
    const bool weighted = rep % 3 == 0;
    auto s = (rep % 4 < 2) ? helpers::random_cloud(rng, n, 2, rep % 4 == 1)
                           : helpers::random_metric(rng, n);
    std::vector<int> base;
    for (int i = 0; i < n; ++i) base.push_back(i);
    Schedule sched = Schedule::uniform();
    if (weighted) {
      std::vector<double> w;
      for (int i = 0; i < n; ++i) w.push_back(rng.next_in(0.5, 2.0));
      sched = Schedule::weighted(RadiusFunction::over(base, w));
    }
    FilteredComplex f;
    if (flag) {
      f = vr_filtration(base, pairwise_distances(s, base), sched, 2);
    } else {
      f = cech_filtration(s, base, sched, WitnessMode::IntrinsicSample, 2);
    }
    auto bc = compute_persistence(f, 1);

    std::vector<double> grid;
    for (const auto& fs : f.simplices) grid.push_back(fs.birth);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> probes = grid;
    for (std::size_t a = 1; a < grid.size(); ++a)
      probes.push_back(0.5 * (grid[a - 1] + grid[a]));
    probes.push_back(f.t_max + 1.0);

    for (double t : probes) {
      auto sl = slice_at(f, t);
      for (int d = 0; d <= 1; ++d) {
        CAPTURE(rep);
        CAPTURE(t);
        CAPTURE(d);
        CHECK(bc.rank_at(d, t) == betti_bruteforce(sl, d));
      }
    }
  }
}
