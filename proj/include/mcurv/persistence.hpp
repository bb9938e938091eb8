#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mcurv/complexes.hpp"

namespace mcurv {

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  Simplex creator;
  std::optional<Simplex> destroyer;  // empty for essential classes
  bool zero_length = false;
  bool finite() const { return destroyer.has_value(); }
};

struct Barcode {
  std::vector<int> base_points;
  ComplexFlavor flavor = ComplexFlavor::Cech;
  int dim_cap = 2;   // of the source filtration
  int max_dim = 1;   // highest homology dimension reported
  std::vector<PersistencePair> pairs;  // sorted by (dim, birth, death)

  // Number of classes alive at t (born by t, not yet dead), i.e. the Betti
  // number of the slice at t in the given dimension.
  int rank_at(int dim, double t) const;
};

// Boundary-matrix column reduction over GF(2) in filtration order, with the
// clearing optimization (dimensions processed top down). Pairs are reported
// for dimensions 0..max_dim; columns up to dimension max_dim + 1 are used.
// Zero-length bars are kept and flagged. Throws InvalidFiltration when a
// facet is missing or born after one of its cofacets.
Barcode compute_persistence(const FilteredComplex& f, int max_dim);

// Betti number of a single slice via dense GF(2) elimination:
// betti_d = n_d - rank B_d - rank B_{d+1}. Independent of the reduction
// above. Throws TooLarge past 5000 simplices.
int betti_bruteforce(const SliceComplex& s, int dim);

// True when betti_bruteforce vanishes for every 1 <= dim <= dim_cap - 1.
bool homology_trivial_above_dim0(const SliceComplex& s);

// Header `dim,birth,death`, `inf` for essential classes, rows in pair order.
void write_barcode_csv(const Barcode& b, const std::string& path);

}  // namespace mcurv
