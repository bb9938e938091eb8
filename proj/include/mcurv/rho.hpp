#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mcurv/extremal.hpp"
#include "mcurv/triples.hpp"
#include "mcurv/witness.hpp"

namespace mcurv {

struct RhoResult {
  double rho = 1.0;
  Location witness;
  std::vector<double> radii;  // the scaled radii used: Gromov products or extremal values
  bool attained = false;      // true when an exact backend certified the witness
  nlohmann::ordered_json to_json(const Space& s) const;
};

// inf_x max_i d(x, x_i) / r_i with the Gromov products of the triple as r_i.
// Always >= 1 up to tolerance; equals 1 exactly on metric trees (ambient),
// where the witness is the median of the three points.
RhoResult rho_triple(const Space& s, int x1, int x2, int x3, WitnessMode mode);

// Closed form for triples on a circle, given the three pairwise central
// angles (shorter arcs, in [0, pi]): split them into per-point angles
// theta_i + theta_j = angle_ij, sort descending, return
// 2*pi / (theta_1 + theta_2) - 1.
double rho_circle_closed_form(double a12, double a13, double a23);

struct CircumcenterResult {
  std::array<double, 2> center{};
  double rho = 1.0;
  // defects of d_ij^2 = rho^2 (r_i^2 + r_j^2 - 2 r_i r_j cos angle_ij), with
  // the angles measured at the center; length^2 units
  std::array<double, 3> residuals{};
};

// The minimax witness for a plane triple with Gromov weights: the unique
// point equidistant from the three vertices in scaled-radius units.
CircumcenterResult weighted_circumcenter_euclidean(const std::array<double, 2>& x1,
                                                   const std::array<double, 2>& x2,
                                                   const std::array<double, 2>& x3);

// k-point generalization. radii = nullopt selects automatic radii: the Gromov
// products for k = 3; for k >= 4 the extremal minorants of the half-max start
// r0(x_i) = max_j d(x_i, x_j) / 2 under the identity sweep order plus four
// seeded random orders, keeping the candidate with the largest rho (extremal
// functions are not unique and the expansion constant is a supremum).
RhoResult rho_tuple(const Space& s, std::span<const int> pts,
                    const std::optional<RadiusFunction>& radii, WitnessMode mode,
                    std::uint64_t seed = 0);

struct ExpansionEstimate {
  double mu_hat = 1.0;
  int arity_max = 3;
  std::vector<int> argmax_tuple;
};

// Sampled lower bound for the expansion constant: sup of rho_tuple over
// n_tuples seeded random tuples of arity 3..arity_max drawn from `sample`.
ExpansionEstimate expansion_constant_estimate(const Space& s, std::span<const int> sample,
                                              int arity_max, int n_tuples, std::uint64_t seed,
                                              WitnessMode mode);

// Equilateral identity: (3 / r) * (unweighted 1-center value) with r the half
// perimeter; agrees with rho_triple within 1e-9 on equilateral triples.
double rho_profile_value_x2(const Space& s, int x1, int x2, int x3,
                            WitnessMode mode = WitnessMode::Ambient);

}  // namespace mcurv
