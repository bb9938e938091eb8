#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcurv/rho.hpp"
#include "mcurv/space.hpp"
#include "mcurv/triples.hpp"

namespace mcurv {

// One triple of sample points with its size/shape/curvature summary:
// r is half the perimeter, lambda the fatness measure, rho the minimax
// circumradius ratio.
struct ProfileRecord {
  std::array<int, 3> indices{};  // point indices, increasing
  TriangleSides sides;
  double r_half_perimeter = 0.0;  // computed as r1 + r2 + r3
  double lambda = 1.0;
  double rho = 1.0;
  std::optional<Location> witness;
  bool attained = false;
  std::optional<std::size_t> bin;  // index into the lambda bins, if any
};

struct ProfileResult {
  std::vector<ProfileRecord> records;  // sorted by (r, indices)
  // Flat triples (some Gromov product ~ 0, so lambda = 1 and rho is
  // undefined) are reported here instead of being dropped silently; on a
  // circle every triple short of the full circumference lands in this bucket.
  std::vector<ProfileRecord> flat;
  int degenerate_skipped = 0;  // flat triples plus hard skips
  std::vector<LambdaBin> bins;
};

// The example bin set: centers 5/4, 6/4, 7/4, 2, half-width 0.02.
std::vector<LambdaBin> default_lambda_bins();

// Enumerates triples of sample points (exhaustive when C(n,3) <= n_triples,
// else seeded uniform sampling without replacement) and computes one record
// per non-flat triple. Throws SampleTooSmall below 3 points.
ProfileResult curvature_profile(const Space& s, std::span<const int> sample,
                                std::span<const LambdaBin> bins, int n_triples,
                                WitnessMode mode, std::uint64_t seed);

// Header `i,j,k,d12,d13,d23,r,lambda,rho,attained`; rows sorted by r then
// indices; 17 significant digits so a re-read reproduces the values exactly.
// Throws DegenerateLeak if any numeric field is NaN.
void emit_profile_csv(std::span<const ProfileRecord> records, const std::string& path);
std::vector<ProfileRecord> read_profile_csv(const std::string& path);

struct ProfileSvgOptions {
  int width = 800;
  int height = 500;
  std::vector<LambdaBin> bins;  // legend labels; defaults when empty
};

// Standalone scatter of (r, rho) with horizontal reference lines at 1,
// 2/sqrt(3) and 2, points colored by lambda bin, empty bins left out of the
// legend.
void emit_profile_svg(std::span<const ProfileRecord> records, const std::string& path,
                      const ProfileSvgOptions& options = {});

}  // namespace mcurv
