#include "mcurv/euclid_minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcurv::detail {
namespace {

double sq(double x) { return x * x; }

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += sq(a[k] - b[k]);
  return std::sqrt(s);
}

double eval_ratio(const std::vector<std::vector<double>>& c, std::span<const double> inv_w,
                  std::span<const double> x) {
  double m = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, dist(c[i], x) * inv_w[i]);
  return m;
}

double eval_offset(const std::vector<std::vector<double>>& c, std::span<const double> r,
                   std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, dist(c[i], x) - r[i]);
  return m;
}

// Solves the (m x m) system in place; returns false when near-singular.
bool gauss_solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  int m = static_cast<int>(a.size());
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return false;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-12 * scale) return false;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < m; ++r) {
      double f = a[r][col] / a[col][col];
      for (int cc = col; cc < m; ++cc) a[r][cc] -= f * a[col][cc];
      b[r] -= f * b[col];
    }
  }
  for (int col = m - 1; col >= 0; --col) {
    double s = b[col];
    for (int cc = col + 1; cc < m; ++cc) s -= a[col][cc] * b[cc];
    b[col] = s / a[col][col];
  }
  return true;
}

struct Frame {
  std::vector<double> origin;
  std::vector<std::vector<double>> basis;     // orthonormal
  std::vector<std::vector<double>> hull;      // subset centers in frame coords
  bool ok = false;
};

// Orthonormal frame for the affine hull of the chosen centers. Fails (ok =
// false) when the centers are affinely dependent; such subsets are covered by
// their proper subsets and can be skipped.
Frame make_frame(const std::vector<std::vector<double>>& c, std::span<const int> subset) {
  Frame f;
  std::size_t dim = c[subset[0]].size();
  f.origin = c[subset[0]];
  double scale = 0.0;
  for (std::size_t j = 1; j < subset.size(); ++j)
    for (std::size_t k = 0; k < dim; ++k)
      scale = std::max(scale, std::fabs(c[subset[j]][k] - f.origin[k]));
  if (scale == 0.0) return f;
  for (std::size_t j = 1; j < subset.size(); ++j) {
    std::vector<double> v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = c[subset[j]][k] - f.origin[k];
    for (const auto& e : f.basis) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k) d += v[k] * e[k];
      for (std::size_t k = 0; k < dim; ++k) v[k] -= d * e[k];
    }
    double nv = norm(v);
    if (nv < 1e-10 * scale) return f;  // affinely dependent
    for (double& x : v) x /= nv;
    f.basis.push_back(std::move(v));
  }
  f.hull.assign(subset.size(), std::vector<double>(f.basis.size(), 0.0));
  for (std::size_t j = 0; j < subset.size(); ++j)
    for (std::size_t e = 0; e < f.basis.size(); ++e) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        d += (c[subset[j]][k] - f.origin[k]) * f.basis[e][k];
      f.hull[j][e] = d;
    }
  f.ok = true;
  return f;
}

std::vector<double> from_frame(const Frame& f, std::span<const double> y) {
  std::vector<double> x = f.origin;
  for (std::size_t e = 0; e < f.basis.size(); ++e)
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += y[e] * f.basis[e][k];
  return x;
}

// Candidate equal-value points of one subset; pushed into `out`.
// Ratio form: ||y - h_j||^2 = s * w_j^2 with s = t^2, linear in (y, s).
void ratio_subset_candidates(const Frame& f, std::span<const int> subset,
                             std::span<const double> w, std::vector<std::vector<double>>& out) {
  int m1 = static_cast<int>(f.basis.size());  // = |subset| - 1
  double w0 = w[subset[0]];
  std::vector<std::vector<double>> a(m1, std::vector<double>(m1));
  std::vector<double> b0(m1), b1(m1);
  for (int j = 0; j < m1; ++j) {
    const auto& h = f.hull[j + 1];
    double h2 = 0.0;
    for (int e = 0; e < m1; ++e) {
      a[j][e] = 2.0 * h[e];
      h2 += h[e] * h[e];
    }
    b0[j] = h2;
    b1[j] = -(sq(w[subset[j + 1]]) - sq(w0));
  }
  auto ac = a;
  std::vector<double> p = b0;
  if (!gauss_solve(ac, p)) return;
  ac = a;
  std::vector<double> q = b1;
  if (!gauss_solve(ac, q)) return;
  double qq = 0.0, pq = 0.0, pp = 0.0;
  for (int e = 0; e < m1; ++e) {
    qq += q[e] * q[e];
    pq += p[e] * q[e];
    pp += p[e] * p[e];
  }
  double alpha = qq, beta = 2.0 * pq - sq(w0), gamma = pp;
  std::vector<double> roots;
  if (std::fabs(alpha) < 1e-14 * (std::fabs(beta) + std::fabs(gamma) + 1.0)) {
    if (beta != 0.0) roots.push_back(-gamma / beta);
  } else {
    double disc = beta * beta - 4.0 * alpha * gamma;
    if (disc < 0.0) return;
    double rd = std::sqrt(disc);
    roots.push_back((-beta - rd) / (2.0 * alpha));
    roots.push_back((-beta + rd) / (2.0 * alpha));
  }
  for (double s : roots) {
    if (!(s >= 0.0) || !std::isfinite(s)) continue;
    std::vector<double> y(m1);
    for (int e = 0; e < m1; ++e) y[e] = p[e] + s * q[e];
    out.push_back(from_frame(f, y));
  }
}

// Offset form: ||y - h_j|| = v + r_j, linear in (y, v).
void offset_subset_candidates(const Frame& f, std::span<const int> subset,
                              std::span<const double> r, std::vector<std::vector<double>>& out) {
  int m1 = static_cast<int>(f.basis.size());
  double r0 = r[subset[0]];
  std::vector<std::vector<double>> a(m1, std::vector<double>(m1));
  std::vector<double> b0(m1), b1(m1);
  for (int j = 0; j < m1; ++j) {
    const auto& h = f.hull[j + 1];
    double h2 = 0.0;
    for (int e = 0; e < m1; ++e) {
      a[j][e] = 2.0 * h[e];
      h2 += h[e] * h[e];
    }
    double rj = r[subset[j + 1]];
    b0[j] = h2 - rj * rj + r0 * r0;
    b1[j] = -2.0 * (rj - r0);
  }
  auto ac = a;
  std::vector<double> p = b0;
  if (!gauss_solve(ac, p)) return;
  ac = a;
  std::vector<double> q = b1;
  if (!gauss_solve(ac, q)) return;
  double qq = 0.0, pq = 0.0, pp = 0.0;
  for (int e = 0; e < m1; ++e) {
    qq += q[e] * q[e];
    pq += p[e] * q[e];
    pp += p[e] * p[e];
  }
  double alpha = qq - 1.0, beta = 2.0 * pq - 2.0 * r0, gamma = pp - r0 * r0;
  std::vector<double> roots;
  if (std::fabs(alpha) < 1e-14 * (std::fabs(beta) + std::fabs(gamma) + 1.0)) {
    if (beta != 0.0) roots.push_back(-gamma / beta);
  } else {
    double disc = beta * beta - 4.0 * alpha * gamma;
    if (disc < 0.0) return;
    double rd = std::sqrt(disc);
    roots.push_back((-beta - rd) / (2.0 * alpha));
    roots.push_back((-beta + rd) / (2.0 * alpha));
  }
  for (double v : roots) {
    if (!std::isfinite(v)) continue;
    if (v + r0 < 0.0) continue;  // ||y|| can't be negative
    std::vector<double> y(m1);
    for (int e = 0; e < m1; ++e) y[e] = p[e] + v * q[e];
    out.push_back(from_frame(f, y));
  }
}

// Enumerates subsets of size 2..max_size in lexicographic order.
template <typename Fn>
void for_each_subset(int k, int max_size, Fn&& fn) {
  std::vector<int> idx;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(idx.size()) >= 2) fn(std::span<const int>(idx));
    if (static_cast<int>(idx.size()) == max_size) return;
    for (int i = start; i < k; ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
}

double subset_count(int k, int max_size) {
  double total = 0.0, binom = 1.0;
  for (int m = 1; m <= max_size; ++m) {
    binom = binom * (k - m + 1) / m;
    if (m >= 2) total += binom;
  }
  return total;
}

template <typename SubsetFn, typename EvalFn>
std::optional<MinimaxPoint> run_enumeration(const std::vector<std::vector<double>>& c,
                                            SubsetFn&& subset_fn, EvalFn&& eval) {
  int k = static_cast<int>(c.size());
  int dim = static_cast<int>(c[0].size());
  int max_size = std::min(dim + 1, k);
  if (subset_count(k, max_size) > 200000.0) return std::nullopt;

  MinimaxPoint best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& x) {
    double v = eval(x);
    if (v < best.value) {
      best.value = v;
      best.point = x;
    }
  };
  for (const auto& ci : c) consider(ci);
  std::vector<std::vector<double>> cands;
  for_each_subset(k, max_size, [&](std::span<const int> subset) {
    Frame f = make_frame(c, subset);
    if (!f.ok) return;
    cands.clear();
    subset_fn(f, subset, cands);
    for (const auto& x : cands) consider(x);
  });
  return best;
}

}  // namespace

std::optional<MinimaxPoint> euclid_ratio_minimax(const std::vector<std::vector<double>>& centers,
                                                 std::span<const double> weights) {
  std::vector<double> inv_w(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) inv_w[i] = 1.0 / weights[i];
  return run_enumeration(
      centers,
      [&](const Frame& f, std::span<const int> subset, std::vector<std::vector<double>>& out) {
        ratio_subset_candidates(f, subset, weights, out);
      },
      [&](const std::vector<double>& x) { return eval_ratio(centers, inv_w, x); });
}

std::optional<MinimaxPoint> euclid_offset_minimax(const std::vector<std::vector<double>>& centers,
                                                  std::span<const double> radii) {
  return run_enumeration(
      centers,
      [&](const Frame& f, std::span<const int> subset, std::vector<std::vector<double>>& out) {
        offset_subset_candidates(f, subset, radii, out);
      },
      [&](const std::vector<double>& x) { return eval_offset(centers, radii, x); });
}

namespace {

template <typename EvalFn, typename ArgmaxFn>
MinimaxPoint descend(const std::vector<std::vector<double>>& c, EvalFn&& eval,
                     ArgmaxFn&& argmax, int iterations) {
  std::size_t dim = c[0].size();
  std::vector<std::vector<double>> starts;
  std::vector<double> centroid(dim, 0.0);
  for (const auto& ci : c)
    for (std::size_t k = 0; k < dim; ++k) centroid[k] += ci[k] / static_cast<double>(c.size());
  starts.push_back(centroid);
  for (const auto& ci : c) starts.push_back(ci);

  MinimaxPoint best;
  best.value = std::numeric_limits<double>::infinity();
  for (auto x : starts) {
    for (int t = 0; t < iterations; ++t) {
      std::size_t worst = argmax(x);
      double step = 1.0 / static_cast<double>(t + 2);
      for (std::size_t k = 0; k < dim; ++k) x[k] += step * (c[worst][k] - x[k]);
    }
    double v = eval(x);
    if (v < best.value) {
      best.value = v;
      best.point = x;
    }
  }
  return best;
}

}  // namespace

MinimaxPoint euclid_ratio_descent(const std::vector<std::vector<double>>& centers,
                                  std::span<const double> weights, int iterations) {
  std::vector<double> inv_w(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) inv_w[i] = 1.0 / weights[i];
  auto argmax = [&](const std::vector<double>& x) {
    std::size_t w = 0;
    double m = -1.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double v = dist(centers[i], x) * inv_w[i];
      if (v > m) {
        m = v;
        w = i;
      }
    }
    return w;
  };
  return descend(centers, [&](const std::vector<double>& x) { return eval_ratio(centers, inv_w, x); },
                 argmax, iterations);
}

MinimaxPoint euclid_offset_descent(const std::vector<std::vector<double>>& centers,
                                   std::span<const double> radii, int iterations) {
  auto argmax = [&](const std::vector<double>& x) {
    std::size_t w = 0;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double v = dist(centers[i], x) - radii[i];
      if (v > m) {
        m = v;
        w = i;
      }
    }
    return w;
  };
  return descend(centers,
                 [&](const std::vector<double>& x) { return eval_offset(centers, radii, x); },
                 argmax, iterations);
}

}  // namespace mcurv::detail
