#include "mcurv/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcurv {
namespace {

void check_domain(const Space& s, const RadiusFunction& r) {
  if (r.domain.size() != r.values.size())
    fail("DomainMismatch", "radius function has " + std::to_string(r.domain.size()) +
                               " domain points but " + std::to_string(r.values.size()) + " values");
  if (r.domain.empty()) fail("DomainMismatch", "radius function domain is empty");
  for (std::size_t a = 0; a < r.domain.size(); ++a) {
    const int p = r.domain[a];
    if (p < 0 || p >= s.point_count())
      fail("DomainMismatch", "domain point " + std::to_string(p) + " outside sample of size " +
                                 std::to_string(s.point_count()));
    if (!std::isfinite(r.values[a]) || r.values[a] < 0.0)
      fail("DomainMismatch", "radius values must be finite and nonnegative");
    for (std::size_t b = 0; b < a; ++b)
      if (r.domain[b] == p)
        fail("DomainMismatch", "domain point " + std::to_string(p) + " listed twice");
  }
}

}  // namespace

RadiusFunction RadiusFunction::over(std::vector<int> domain, std::vector<double> values) {
  RadiusFunction r;
  r.domain = std::move(domain);
  r.values = std::move(values);
  return r;
}

RadiusFunction RadiusFunction::constant(std::vector<int> domain, double value) {
  RadiusFunction r;
  r.values.assign(domain.size(), value);
  r.domain = std::move(domain);
  return r;
}

AdmissibilityReport is_admissible(const Space& s, const RadiusFunction& r) {
  check_domain(s, r);
  const std::size_t n = r.size();
  for (std::size_t a = 0; a + 1 < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double deficit = s.distance(r.domain[a], r.domain[b]) - r.values[a] - r.values[b];
      if (deficit > 1e-12) return {false, r.domain[a], r.domain[b], deficit};
    }
  return {};
}

bool is_extremal(const Space& s, const RadiusFunction& r, double tol) {
  const AdmissibilityReport adm = is_admissible(s, r);
  if (!adm.ok)
    fail("NotAdmissible", "pair (" + std::to_string(adm.i) + ", " + std::to_string(adm.j) +
                              ") violates r(x) + r(y) >= d(x,y) by " + std::to_string(adm.deficit));
  const std::size_t n = r.size();
  for (std::size_t a = 0; a < n; ++a) {
    double needed = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      needed = std::max(needed, s.distance(r.domain[a], r.domain[b]) - r.values[b]);
    }
    if (r.values[a] > needed + tol) return false;
  }
  return true;
}

MinorantResult extremal_minorant(const Space& s, const RadiusFunction& r0,
                                 std::span<const int> sweep_order, double tol) {
  const AdmissibilityReport adm = is_admissible(s, r0);
  if (!adm.ok)
    fail("NotAdmissible", "starting function violates admissibility at pair (" +
                              std::to_string(adm.i) + ", " + std::to_string(adm.j) + ")");
  const std::size_t n = r0.size();
  std::vector<int> order;
  if (sweep_order.empty()) {
    order.resize(n);
    for (std::size_t a = 0; a < n; ++a) order[a] = static_cast<int>(a);
  } else {
    if (sweep_order.size() != n)
      fail("DomainMismatch", "sweep order length differs from the domain size");
    order.assign(sweep_order.begin(), sweep_order.end());
    std::vector<bool> seen(n, false);
    for (int p : order) {
      if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)])
        fail("DomainMismatch", "sweep order is not a permutation of the domain positions");
      seen[static_cast<std::size_t>(p)] = true;
    }
  }

  MinorantResult res;
  res.r = r0;
  const int budget = 10 * static_cast<int>(n);
  for (int sweep = 0; sweep < budget; ++sweep) {
    double change = 0.0;
    for (int pos : order) {
      const std::size_t a = static_cast<std::size_t>(pos);
      double needed = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a) continue;
        needed = std::max(needed, s.distance(res.r.domain[a], res.r.domain[b]) - res.r.values[b]);
      }
      change = std::max(change, std::fabs(res.r.values[a] - needed));
      res.r.values[a] = needed;
    }
    res.sweeps = sweep + 1;
    if (change <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

RadiusFunction distance_radius_function(const Space& s, int x) {
  if (x < 0 || x >= s.point_count())
    fail("IndexOutOfRange", "point " + std::to_string(x) + " outside sample of size " +
                                std::to_string(s.point_count()));
  const std::size_t n = static_cast<std::size_t>(s.point_count());
  RadiusFunction r;
  r.domain.resize(n);
  r.values.resize(n);
  std::vector<double> scratch;
  auto row = s.distance_row(x, scratch);
  for (std::size_t y = 0; y < n; ++y) {
    r.domain[y] = static_cast<int>(y);
    r.values[y] = row[y];
  }
  return r;
}

}  // namespace mcurv
