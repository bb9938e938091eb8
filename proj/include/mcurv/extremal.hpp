#pragma once

#include <span>
#include <vector>

#include "mcurv/space.hpp"

namespace mcurv {

// A nonnegative radius assignment over a subset of a space's sample points.
// domain[i] is a point index; values[i] its radius. Serialized as a JSON
// array aligned with the domain order.
struct RadiusFunction {
  std::vector<int> domain;
  std::vector<double> values;

  static RadiusFunction over(std::vector<int> domain, std::vector<double> values);
  static RadiusFunction constant(std::vector<int> domain, double value);
  std::size_t size() const { return domain.size(); }
};

struct AdmissibilityReport {
  bool ok = true;
  // first violating pair as point indices, meaningful when !ok
  int i = -1;
  int j = -1;
  double deficit = 0.0;  // d(i,j) - r(i) - r(j)
};

// r(x) + r(y) >= d(x,y) - 1e-12 for all pairs of the domain.
AdmissibilityReport is_admissible(const Space& s, const RadiusFunction& r);

// r is admissible and no coordinate can be decreased: for every x,
// r(x) = max(0, max_y (d(x,y) - r(y))) within tol.
bool is_extremal(const Space& s, const RadiusFunction& r, double tol = 1e-10);

struct MinorantResult {
  RadiusFunction r;
  bool converged = false;  // a full sweep changed nothing by more than tol
  int sweeps = 0;
};

// Pointwise-minimal admissible function below r0: cyclic coordinate descent
// r(x) <- max(0, max_{y != x}(d(x,y) - r(y))) in sweep_order (positions into
// the domain; empty = index order). Each update keeps the function admissible
// and can only decrease it, so the iteration converges to an extremal
// function below r0. Sweep budget 10 * n; the best iterate is returned with
// converged = false when the budget runs out.
MinorantResult extremal_minorant(const Space& s, const RadiusFunction& r0,
                                 std::span<const int> sweep_order = {}, double tol = 1e-10);

// r(y) = d(x, y) over all sample points; always extremal.
RadiusFunction distance_radius_function(const Space& s, int x);

}  // namespace mcurv
