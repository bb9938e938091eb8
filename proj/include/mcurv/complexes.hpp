#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcurv/extremal.hpp"
#include "mcurv/space.hpp"

namespace mcurv {

struct Simplex {
  std::vector<int> vertices;  // strictly increasing point indices
  int dim() const { return static_cast<int>(vertices.size()) - 1; }
  bool operator==(const Simplex& o) const { return vertices == o.vertices; }
};

// Order by dimension, then lexicographically; the tie order used everywhere.
bool simplex_less(const Simplex& a, const Simplex& b);

enum class ComplexFlavor { Cech, Vr };

// One slice of the ball complex: the nerve of {B(x_i, r(x_i))} (cech) or its
// flag relaxation built from edges only (vr), up to dim_cap.
struct SliceComplex {
  std::vector<int> base_points;
  RadiusFunction radius_fn;
  ComplexFlavor flavor = ComplexFlavor::Cech;
  int dim_cap = 2;
  std::vector<Simplex> simplices;  // sorted by simplex_less
  bool contains(const Simplex& sx) const;
};

// Nerve slice: sigma included iff the balls around its vertices with the
// given radii have a common point. base_points must be strictly increasing;
// r's domain must equal base_points.
SliceComplex cech_slice(const Space& s, std::span<const int> base_points,
                        const RadiusFunction& r, WitnessMode mode, int dim_cap);

// Flag slice from pairwise distances (indexed by position in base_points):
// edge (i,j) iff r_i + r_j >= d_ij, higher simplices by clique completion.
SliceComplex vr_slice(std::span<const int> base_points,
                      const std::vector<std::vector<double>>& distances, const RadiusFunction& r,
                      int dim_cap);

struct Schedule {
  enum class Kind { Uniform, Weighted };
  Kind kind = Kind::Uniform;
  RadiusFunction weights;  // Weighted only; strictly positive
  static Schedule uniform() { return {}; }
  static Schedule weighted(RadiusFunction w);
};

struct FilteredSimplex {
  Simplex simplex;
  double birth = 0.0;
};

// One-parameter filtration t -> slice with radii t (uniform) or t * w
// (weighted); simplices sorted by (birth, dimension, lexicographic).
struct FilteredComplex {
  std::vector<int> base_points;
  Schedule schedule;
  ComplexFlavor flavor = ComplexFlavor::Cech;
  int dim_cap = 2;
  double t_max = 0.0;
  std::vector<FilteredSimplex> simplices;
};

// Birth of sigma = minimax scaled distance of its vertices (clamped from
// below by its worst pair and its facets, which the exact value dominates
// mathematically). Simplices born after t_max are omitted. t_max defaults to
// the diameter (uniform) or max pair distance / min weight (weighted), beyond
// which the complex is complete up to dim_cap.
FilteredComplex cech_filtration(const Space& s, std::span<const int> base_points,
                                const Schedule& schedule, WitnessMode mode, int dim_cap,
                                std::optional<double> t_max = std::nullopt);

// Edge births d_ij / (w_i + w_j) (uniform: d_ij / 2); a higher simplex is
// born with its last edge (flag property).
FilteredComplex vr_filtration(std::span<const int> base_points,
                              const std::vector<std::vector<double>>& distances,
                              const Schedule& schedule, int dim_cap,
                              std::optional<double> t_max = std::nullopt);

// The slice at parameter t: simplices with birth <= t, radii from the
// schedule at t.
SliceComplex slice_at(const FilteredComplex& f, double t);

struct InclusionViolation {
  Simplex simplex;
  double birth_vr = 0.0;
  double birth_cech = 0.0;
};

struct InclusionReport {
  bool ok = true;
  double mu = 1.0;
  int compared = 0;
  std::vector<InclusionViolation> violations;
};

// Verifies birth_vr <= birth_cech <= mu * birth_vr + tol for every simplex
// present in both filtrations.
InclusionReport check_inclusions(const FilteredComplex& cech, const FilteredComplex& vr,
                                 double mu, double tol = 1e-9);

// CSV lines `dim,birth,v0,v1,...`, 17 significant digits, in filtration
// order; read_filtration_csv restores the combinatorial filtration.
void write_filtration_csv(const FilteredComplex& f, const std::string& path);
FilteredComplex read_filtration_csv(const std::string& path);

}  // namespace mcurv
