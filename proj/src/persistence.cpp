#include "mcurv/persistence.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>

#include "mcurv/errors.hpp"

namespace mcurv {
namespace {

// Columns are sorted lists of row indices; GF(2) addition is xor-merge.
std::vector<int> xor_cols(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

}  // namespace

int Barcode::rank_at(int dim, double t) const {
  int n = 0;
  for (const auto& p : pairs)
    if (p.dim == dim && p.birth <= t && (!p.destroyer || t < p.death)) ++n;
  return n;
}

Barcode compute_persistence(const FilteredComplex& f, int max_dim) {
  if (max_dim < 0) fail("InvalidFiltration", "max_dim must be nonnegative");
  if (f.simplices.empty()) fail("InvalidFiltration", "empty filtration");
  const int use_top = std::min(max_dim + 1, f.dim_cap);

  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& fs : f.simplices) {
    if (!(fs.birth >= prev)) fail("InvalidFiltration", "births are not monotone");
    prev = fs.birth;
  }

  // Keep simplices of dimension <= use_top, in filtration order.
  std::vector<int> keep;
  std::map<std::vector<int>, int> pos;  // vertices -> position among kept
  for (int i = 0; i < static_cast<int>(f.simplices.size()); ++i) {
    const auto& fs = f.simplices[i];
    if (fs.simplex.dim() > use_top) continue;
    if (!pos.emplace(fs.simplex.vertices, static_cast<int>(keep.size())).second)
      fail("InvalidFiltration", "duplicate simplex in the filtration");
    keep.push_back(i);
  }
  const int n = static_cast<int>(keep.size());

  std::vector<std::vector<int>> boundary(n);
  std::vector<int> dim_of(n);
  for (int c = 0; c < n; ++c) {
    const auto& sx = f.simplices[static_cast<std::size_t>(keep[c])].simplex;
    dim_of[c] = sx.dim();
    if (sx.dim() == 0) continue;
    auto& col = boundary[static_cast<std::size_t>(c)];
    for (std::size_t drop = 0; drop < sx.vertices.size(); ++drop) {
      std::vector<int> facet = sx.vertices;
      facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
      auto it = pos.find(facet);
      if (it == pos.end() || it->second >= c)
        fail("InvalidFiltration", "facet missing or born after its cofacet");
      col.push_back(it->second);
    }
    std::sort(col.begin(), col.end());
  }

  // Reduction with clearing: top dimension first; every pivot row found in
  // dimension d is a (d-1)-creator whose own column would reduce to zero, so
  // it is skipped on the next pass.
  std::vector<char> cleared(static_cast<std::size_t>(n), 0);
  std::vector<char> is_destroyer(static_cast<std::size_t>(n), 0);
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> reduced(static_cast<std::size_t>(n));
  struct RawPair {
    int creator;
    int destroyer;
  };
  std::vector<RawPair> raw;

  for (int d = use_top; d >= 1; --d) {
    for (int c = 0; c < n; ++c) {
      if (dim_of[static_cast<std::size_t>(c)] != d || cleared[static_cast<std::size_t>(c)])
        continue;
      std::vector<int> col = boundary[static_cast<std::size_t>(c)];
      while (!col.empty()) {
        const int r = col.back();
        if (owner[static_cast<std::size_t>(r)] < 0) break;
        col = xor_cols(col, reduced[static_cast<std::size_t>(owner[static_cast<std::size_t>(r)])]);
      }
      if (col.empty()) continue;  // creator column
      const int r = col.back();
      owner[static_cast<std::size_t>(r)] = c;
      reduced[static_cast<std::size_t>(c)] = std::move(col);
      is_destroyer[static_cast<std::size_t>(c)] = 1;
      cleared[static_cast<std::size_t>(r)] = 1;
      raw.push_back({r, c});
    }
  }

  Barcode out;
  out.base_points = f.base_points;
  out.flavor = f.flavor;
  out.dim_cap = f.dim_cap;
  out.max_dim = max_dim;

  std::vector<char> destroyed(static_cast<std::size_t>(n), 0);
  for (const auto& rp : raw) destroyed[static_cast<std::size_t>(rp.creator)] = 1;

  for (const auto& rp : raw) {
    const auto& cs = f.simplices[static_cast<std::size_t>(keep[rp.creator])];
    const auto& ds = f.simplices[static_cast<std::size_t>(keep[rp.destroyer])];
    PersistencePair p;
    p.dim = cs.simplex.dim();
    p.birth = cs.birth;
    p.death = ds.birth;
    p.creator = cs.simplex;
    p.destroyer = ds.simplex;
    p.zero_length = (p.birth == p.death);
    out.pairs.push_back(std::move(p));
  }
  for (int c = 0; c < n; ++c) {
    if (is_destroyer[static_cast<std::size_t>(c)] || destroyed[static_cast<std::size_t>(c)])
      continue;
    const auto& cs = f.simplices[static_cast<std::size_t>(keep[c])];
    if (cs.simplex.dim() > max_dim) continue;  // top columns only pair downward
    PersistencePair p;
    p.dim = cs.simplex.dim();
    p.birth = cs.birth;
    p.creator = cs.simplex;
    out.pairs.push_back(std::move(p));
  }

  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const PersistencePair& a, const PersistencePair& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.birth != b.birth) return a.birth < b.birth;
              if (a.death != b.death) return a.death < b.death;
              return simplex_less(a.creator, b.creator);
            });
  return out;
}

namespace {

using BitCol = std::vector<std::uint64_t>;

int bit_rank(std::vector<BitCol>& cols) {
  std::vector<std::pair<int, int>> pivots;  // (row, column index)
  for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
    auto& cur = cols[static_cast<std::size_t>(c)];
    for (const auto& [pr, pc] : pivots) {
      if ((cur[static_cast<std::size_t>(pr >> 6)] >> (pr & 63)) & 1u) {
        const auto& pv = cols[static_cast<std::size_t>(pc)];
        for (std::size_t w = 0; w < cur.size(); ++w) cur[w] ^= pv[w];
      }
    }
    int row = -1;
    for (std::size_t w = 0; w < cur.size() && row < 0; ++w)
      if (cur[w]) row = static_cast<int>(w * 64) + std::countr_zero(cur[w]);
    if (row >= 0) pivots.emplace_back(row, c);
  }
  return static_cast<int>(pivots.size());
}

}  // namespace

int betti_bruteforce(const SliceComplex& s, int dim) {
  if (dim < 0) fail("IndexOutOfRange", "negative homology dimension");
  if (s.simplices.size() > 5000)
    fail("TooLarge", "slice has more than 5000 simplices");

  std::map<int, std::map<std::vector<int>, int>> by_dim;
  for (const auto& sx : s.simplices) {
    auto& level = by_dim[sx.dim()];
    const int idx = static_cast<int>(level.size());
    level.emplace(sx.vertices, idx);
  }

  auto rank_boundary = [&](int d) -> int {
    if (d <= 0) return 0;
    auto itc = by_dim.find(d);
    auto itr = by_dim.find(d - 1);
    if (itc == by_dim.end() || itr == by_dim.end()) return 0;
    const int rows = static_cast<int>(itr->second.size());
    const std::size_t words = static_cast<std::size_t>((rows + 63) / 64);
    std::vector<BitCol> cols;
    cols.reserve(itc->second.size());
    for (const auto& [verts, unused] : itc->second) {
      BitCol col(words, 0);
      for (std::size_t drop = 0; drop < verts.size(); ++drop) {
        std::vector<int> facet = verts;
        facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
        auto it = itr->second.find(facet);
        if (it == itr->second.end())
          fail("InvalidSlice", "slice is not closed under facets");
        col[static_cast<std::size_t>(it->second >> 6)] |= 1ull << (it->second & 63);
      }
      cols.push_back(std::move(col));
    }
    return bit_rank(cols);
  };

  const auto it = by_dim.find(dim);
  const int nd = it == by_dim.end() ? 0 : static_cast<int>(it->second.size());
  return nd - rank_boundary(dim) - rank_boundary(dim + 1);
}

bool homology_trivial_above_dim0(const SliceComplex& s) {
  for (int d = 1; d <= s.dim_cap - 1; ++d)
    if (betti_bruteforce(s, d) != 0) return false;
  return true;
}

void write_barcode_csv(const Barcode& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot open " + path + " for writing");
  out << "dim,birth,death\n";
  char buf[64];
  for (const auto& p : b.pairs) {
    std::snprintf(buf, sizeof(buf), "%.17g", p.birth);
    out << p.dim << ',' << buf << ',';
    if (p.destroyer) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.death);
      out << buf;
    } else {
      out << "inf";
    }
    out << '\n';
  }
  if (!out) fail("IoError", "failed writing " + path);
}

}  // namespace mcurv
