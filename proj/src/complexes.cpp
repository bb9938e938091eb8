#include "mcurv/complexes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mcurv/witness.hpp"

namespace mcurv {
namespace {

bool vertex_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void check_base(std::span<const int> base) {
  if (base.empty()) fail("EmptyFamily", "base point list is empty");
  for (std::size_t a = 0; a < base.size(); ++a) {
    if (base[a] < 0) fail("IndexOutOfRange", "negative base point index");
    if (a > 0 && base[a] <= base[a - 1])
      fail("InvalidBasePoints", "base points must be strictly increasing");
  }
}

// Values aligned with base positions; the radius function must cover exactly
// the base points.
std::vector<double> align_values(std::span<const int> base, const RadiusFunction& r,
                                 const char* what) {
  if (r.domain.size() != base.size())
    fail("DomainMismatch", std::string(what) + " domain size differs from the base");
  std::vector<double> out(base.size());
  for (std::size_t a = 0; a < base.size(); ++a) {
    auto it = std::find(r.domain.begin(), r.domain.end(), base[a]);
    if (it == r.domain.end())
      fail("DomainMismatch",
           std::string(what) + " is missing base point " + std::to_string(base[a]));
    out[a] = r.values[static_cast<std::size_t>(it - r.domain.begin())];
  }
  return out;
}

struct LevelMap : std::map<std::vector<int>, double> {};  // positions -> birth

void append_sorted(std::vector<Simplex>& out, const LevelMap& level,
                   std::span<const int> base) {
  for (const auto& [pos, birth] : level) {
    Simplex sx;
    sx.vertices.reserve(pos.size());
    for (int p : pos) sx.vertices.push_back(base[static_cast<std::size_t>(p)]);
    out.push_back(std::move(sx));
  }
}

double default_t_max(const std::vector<std::vector<double>>& dist,
                     const Schedule& schedule, std::span<const double> w) {
  double dmax = 0.0;
  for (std::size_t a = 0; a + 1 < dist.size(); ++a)
    for (std::size_t b = a + 1; b < dist.size(); ++b) dmax = std::max(dmax, dist[a][b]);
  if (schedule.kind == Schedule::Kind::Uniform) return dmax;
  double wmin = w[0];
  for (double x : w) wmin = std::min(wmin, x);
  return dmax / wmin;
}

std::vector<double> schedule_weights(std::span<const int> base, const Schedule& schedule) {
  if (schedule.kind == Schedule::Kind::Uniform)
    return std::vector<double>(base.size(), 1.0);
  std::vector<double> w = align_values(base, schedule.weights, "schedule weights");
  for (double x : w)
    if (!(x > 0.0)) fail("NonPositiveWeight", "weighted schedules require positive weights");
  return w;
}

}  // namespace

bool simplex_less(const Simplex& a, const Simplex& b) {
  return vertex_less(a.vertices, b.vertices);
}

bool SliceComplex::contains(const Simplex& sx) const {
  auto it = std::lower_bound(simplices.begin(), simplices.end(), sx, simplex_less);
  return it != simplices.end() && *it == sx;
}

Schedule Schedule::weighted(RadiusFunction w) {
  Schedule s;
  s.kind = Kind::Weighted;
  s.weights = std::move(w);
  return s;
}

SliceComplex cech_slice(const Space& s, std::span<const int> base_points,
                        const RadiusFunction& r, WitnessMode mode, int dim_cap) {
  check_base(base_points);
  if (dim_cap < 1) fail("InvalidDimensionCap", "dim_cap must be at least 1");
  for (int p : base_points)
    if (p >= s.point_count()) fail("IndexOutOfRange", "base point outside the sample");
  const std::vector<double> radii = align_values(base_points, r, "radius function");
  const int m = static_cast<int>(base_points.size());

  SliceComplex out;
  out.base_points.assign(base_points.begin(), base_points.end());
  out.radius_fn = r;
  out.flavor = ComplexFlavor::Cech;
  out.dim_cap = dim_cap;

  LevelMap level;
  for (int a = 0; a < m; ++a) level[{a}] = 0.0;
  append_sorted(out.simplices, level, base_points);
  std::vector<int> centers;
  std::vector<double> sub_radii;
  for (int d = 1; d <= dim_cap && !level.empty(); ++d) {
    LevelMap next;
    for (const auto& [pos, birth] : level) {
      for (int v = pos.back() + 1; v < m; ++v) {
        std::vector<int> cand = pos;
        cand.push_back(v);
        bool facets_ok = true;
        for (std::size_t drop = 0; drop + 1 < cand.size() && facets_ok; ++drop) {
          std::vector<int> facet = cand;
          facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
          facets_ok = level.count(facet) > 0;
        }
        if (!facets_ok) continue;
        centers.clear();
        sub_radii.clear();
        for (int p : cand) {
          centers.push_back(base_points[static_cast<std::size_t>(p)]);
          sub_radii.push_back(radii[static_cast<std::size_t>(p)]);
        }
        if (balls_intersect(s, centers, sub_radii, mode).intersects) next[cand] = 0.0;
      }
    }
    append_sorted(out.simplices, next, base_points);
    level = std::move(next);
  }
  std::sort(out.simplices.begin(), out.simplices.end(), simplex_less);
  return out;
}

SliceComplex vr_slice(std::span<const int> base_points,
                      const std::vector<std::vector<double>>& distances, const RadiusFunction& r,
                      int dim_cap) {
  check_base(base_points);
  if (dim_cap < 1) fail("InvalidDimensionCap", "dim_cap must be at least 1");
  const std::size_t m = base_points.size();
  if (distances.size() != m)
    fail("DomainMismatch", "distance matrix size differs from the base");
  const std::vector<double> radii = align_values(base_points, r, "radius function");

  SliceComplex out;
  out.base_points.assign(base_points.begin(), base_points.end());
  out.radius_fn = r;
  out.flavor = ComplexFlavor::Vr;
  out.dim_cap = dim_cap;

  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a + 1 < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (radii[a] + radii[b] >= distances[a][b]) adj[a][b] = adj[b][a] = true;

  LevelMap level;
  for (std::size_t a = 0; a < m; ++a) level[{static_cast<int>(a)}] = 0.0;
  append_sorted(out.simplices, level, base_points);
  for (int d = 1; d <= dim_cap && !level.empty(); ++d) {
    LevelMap next;
    for (const auto& [pos, birth] : level) {
      for (int v = pos.back() + 1; v < static_cast<int>(m); ++v) {
        bool clique = true;
        for (int u : pos)
          if (!adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
            clique = false;
            break;
          }
        if (!clique) continue;
        std::vector<int> cand = pos;
        cand.push_back(v);
        next[cand] = 0.0;
      }
    }
    append_sorted(out.simplices, next, base_points);
    level = std::move(next);
  }
  std::sort(out.simplices.begin(), out.simplices.end(), simplex_less);
  return out;
}

namespace {

void sort_filtration(std::vector<FilteredSimplex>& sx) {
  std::sort(sx.begin(), sx.end(), [](const FilteredSimplex& a, const FilteredSimplex& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return simplex_less(a.simplex, b.simplex);
  });
}

}  // namespace

FilteredComplex cech_filtration(const Space& s, std::span<const int> base_points,
                                const Schedule& schedule, WitnessMode mode, int dim_cap,
                                std::optional<double> t_max) {
  check_base(base_points);
  if (dim_cap < 1) fail("InvalidDimensionCap", "dim_cap must be at least 1");
  for (int p : base_points)
    if (p >= s.point_count()) fail("IndexOutOfRange", "base point outside the sample");
  const std::vector<double> w = schedule_weights(base_points, schedule);
  const std::vector<std::vector<double>> dist = pairwise_distances(s, base_points);
  const double tmax = t_max ? *t_max : default_t_max(dist, schedule, w);
  const int m = static_cast<int>(base_points.size());

  FilteredComplex out;
  out.base_points.assign(base_points.begin(), base_points.end());
  out.schedule = schedule;
  out.flavor = ComplexFlavor::Cech;
  out.dim_cap = dim_cap;
  out.t_max = tmax;

  LevelMap level;
  for (int a = 0; a < m; ++a)
    if (0.0 <= tmax) level[{a}] = 0.0;
  std::vector<int> centers;
  std::vector<double> weights;
  auto emit = [&](const LevelMap& lv) {
    for (const auto& [pos, birth] : lv) {
      FilteredSimplex fs;
      fs.birth = birth;
      for (int p : pos) fs.simplex.vertices.push_back(base_points[static_cast<std::size_t>(p)]);
      out.simplices.push_back(std::move(fs));
    }
  };
  emit(level);
  for (int d = 1; d <= dim_cap && !level.empty(); ++d) {
    LevelMap next;
    for (const auto& [pos, birth] : level) {
      for (int v = pos.back() + 1; v < m; ++v) {
        std::vector<int> cand = pos;
        cand.push_back(v);
        double facet_floor = 0.0;
        bool facets_ok = true;
        for (std::size_t drop = 0; drop < cand.size() && facets_ok; ++drop) {
          if (cand.size() == 2) break;  // vertices are always present at 0
          std::vector<int> facet = cand;
          facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
          auto it = level.find(facet);
          if (it == level.end())
            facets_ok = false;
          else
            facet_floor = std::max(facet_floor, it->second);
        }
        if (!facets_ok) continue;
        // Every pair of balls must meet by t, so the worst pair scale (the
        // Vietoris-Rips birth) is a lower bound on the nerve birth; clamping
        // to it and to the facets removes round-off dips below either bound.
        double pair_floor = 0.0;
        for (std::size_t a = 0; a + 1 < cand.size(); ++a)
          for (std::size_t b = a + 1; b < cand.size(); ++b) {
            const std::size_t pa = static_cast<std::size_t>(cand[a]);
            const std::size_t pb = static_cast<std::size_t>(cand[b]);
            pair_floor = std::max(pair_floor, dist[pa][pb] / (w[pa] + w[pb]));
          }
        centers.clear();
        weights.clear();
        for (int p : cand) {
          centers.push_back(base_points[static_cast<std::size_t>(p)]);
          weights.push_back(w[static_cast<std::size_t>(p)]);
        }
        double birth_v = minimax_scaled_distance(s, centers, weights, mode).value;
        birth_v = std::max({birth_v, pair_floor, facet_floor});
        if (birth_v > tmax) continue;
        next[cand] = birth_v;
      }
    }
    emit(next);
    level = std::move(next);
  }
  sort_filtration(out.simplices);
  return out;
}

FilteredComplex vr_filtration(std::span<const int> base_points,
                              const std::vector<std::vector<double>>& distances,
                              const Schedule& schedule, int dim_cap,
                              std::optional<double> t_max) {
  check_base(base_points);
  if (dim_cap < 1) fail("InvalidDimensionCap", "dim_cap must be at least 1");
  const std::size_t m = base_points.size();
  if (distances.size() != m)
    fail("DomainMismatch", "distance matrix size differs from the base");
  const std::vector<double> w = schedule_weights(base_points, schedule);
  const double tmax = t_max ? *t_max : default_t_max(distances, schedule, w);

  FilteredComplex out;
  out.base_points.assign(base_points.begin(), base_points.end());
  out.schedule = schedule;
  out.flavor = ComplexFlavor::Vr;
  out.dim_cap = dim_cap;
  out.t_max = tmax;

  std::vector<std::vector<double>> edge_birth(m, std::vector<double>(m, 0.0));
  std::vector<std::vector<bool>> edge_in(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a + 1 < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double t = distances[a][b] / (w[a] + w[b]);
      if (t <= tmax) {
        edge_birth[a][b] = edge_birth[b][a] = t;
        edge_in[a][b] = edge_in[b][a] = true;
      }
    }

  LevelMap level;
  for (std::size_t a = 0; a < m; ++a) level[{static_cast<int>(a)}] = 0.0;
  auto emit = [&](const LevelMap& lv) {
    for (const auto& [pos, birth] : lv) {
      FilteredSimplex fs;
      fs.birth = birth;
      for (int p : pos) fs.simplex.vertices.push_back(base_points[static_cast<std::size_t>(p)]);
      out.simplices.push_back(std::move(fs));
    }
  };
  emit(level);
  for (int d = 1; d <= dim_cap && !level.empty(); ++d) {
    LevelMap next;
    for (const auto& [pos, birth] : level) {
      for (int v = pos.back() + 1; v < static_cast<int>(m); ++v) {
        double b = birth;
        bool clique = true;
        for (int u : pos) {
          const std::size_t su = static_cast<std::size_t>(u);
          const std::size_t sv = static_cast<std::size_t>(v);
          if (!edge_in[su][sv]) {
            clique = false;
            break;
          }
          b = std::max(b, edge_birth[su][sv]);
        }
        if (!clique) continue;
        std::vector<int> cand = pos;
        cand.push_back(v);
        next[cand] = b;
      }
    }
    emit(next);
    level = std::move(next);
  }
  sort_filtration(out.simplices);
  return out;
}

SliceComplex slice_at(const FilteredComplex& f, double t) {
  SliceComplex out;
  out.base_points = f.base_points;
  out.flavor = f.flavor;
  out.dim_cap = f.dim_cap;
  std::vector<double> values(f.base_points.size(), t);
  if (f.schedule.kind == Schedule::Kind::Weighted) {
    values = align_values(f.base_points, f.schedule.weights, "schedule weights");
    for (double& v : values) v *= t;
  }
  out.radius_fn = RadiusFunction::over(f.base_points, std::move(values));
  for (const auto& fs : f.simplices)
    if (fs.birth <= t) out.simplices.push_back(fs.simplex);
  std::sort(out.simplices.begin(), out.simplices.end(), simplex_less);
  return out;
}

InclusionReport check_inclusions(const FilteredComplex& cech, const FilteredComplex& vr,
                                 double mu, double tol) {
  if (cech.base_points != vr.base_points)
    fail("MismatchedBases", "the two filtrations have different base points");
  if (cech.schedule.kind != vr.schedule.kind ||
      (cech.schedule.kind == Schedule::Kind::Weighted &&
       (cech.schedule.weights.domain != vr.schedule.weights.domain ||
        cech.schedule.weights.values != vr.schedule.weights.values)))
    fail("MismatchedBases", "the two filtrations use different schedules");

  std::map<std::vector<int>, double> vr_births;
  for (const auto& fs : vr.simplices) vr_births[fs.simplex.vertices] = fs.birth;

  InclusionReport rep;
  rep.mu = mu;
  for (const auto& fs : cech.simplices) {
    auto it = vr_births.find(fs.simplex.vertices);
    if (it == vr_births.end()) continue;
    ++rep.compared;
    const double bvr = it->second;
    const double bcech = fs.birth;
    if (bvr <= bcech && bcech <= mu * bvr + tol) continue;
    rep.ok = false;
    rep.violations.push_back({fs.simplex, bvr, bcech});
  }
  return rep;
}

void write_filtration_csv(const FilteredComplex& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot open " + path + " for writing");
  char buf[64];
  for (const auto& fs : f.simplices) {
    std::snprintf(buf, sizeof(buf), "%.17g", fs.birth);
    out << fs.simplex.dim() << ',' << buf;
    for (int v : fs.simplex.vertices) out << ',' << v;
    out << '\n';
  }
  if (!out) fail("IoError", "failed writing " + path);
}

static int parse_int_field(const std::string& field, int line_no) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(field, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != field.size())
    fail("ParseError", "bad integer \"" + field + "\" on line " + std::to_string(line_no));
  return v;
}

static double parse_double_field(const std::string& field, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size())
    fail("ParseError", "bad number \"" + field + "\" on line " + std::to_string(line_no));
  return v;
}

FilteredComplex read_filtration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path + " for reading");
  FilteredComplex f;
  f.flavor = ComplexFlavor::Cech;
  std::string line;
  int line_no = 0;
  int max_dim = 0;
  std::vector<int> verts;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    verts.clear();
    if (!std::getline(ss, field, ','))
      fail("ParseError", "missing dimension field on line " + std::to_string(line_no));
    const int dim = parse_int_field(field, line_no);
    if (!std::getline(ss, field, ','))
      fail("ParseError", "missing birth field on line " + std::to_string(line_no));
    const double birth = parse_double_field(field, line_no);
    while (std::getline(ss, field, ',')) verts.push_back(parse_int_field(field, line_no));
    if (static_cast<int>(verts.size()) != dim + 1)
      fail("ParseError", "vertex count does not match dimension on line " +
                             std::to_string(line_no));
    if (!std::is_sorted(verts.begin(), verts.end()) ||
        std::adjacent_find(verts.begin(), verts.end()) != verts.end())
      fail("ParseError", "vertices must be strictly increasing on line " +
                             std::to_string(line_no));
    FilteredSimplex fs;
    fs.simplex.vertices = verts;
    fs.birth = birth;
    max_dim = std::max(max_dim, dim);
    f.t_max = std::max(f.t_max, birth);
    f.simplices.push_back(std::move(fs));
  }
  if (f.simplices.empty()) fail("ParseError", "filtration file is empty");
  std::vector<int> base;
  for (const auto& fs : f.simplices)
    for (int v : fs.simplex.vertices) base.push_back(v);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  f.base_points = std::move(base);
  f.dim_cap = max_dim;
  sort_filtration(f.simplices);
  return f;
}

}  // namespace mcurv
