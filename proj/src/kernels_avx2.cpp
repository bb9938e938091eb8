// AVX2 variants of the batch kernels. Compiled with -mavx2 on x86_64 only;
// selection happens at runtime in kernels_dispatch.cpp. Each loop performs
// the same per-element operations in the same order as the scalar reference
// so results are bit-identical.

#include "mcurv/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace mcurv::kernels {
namespace {

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

void sqdist_avx2(const double* q, const double* soa, std::size_t stride,
                 std::size_t dim, std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      __m256d p = _mm256_loadu_pd(soa + k * stride + j);
      __m256d d = _mm256_sub_pd(_mm256_set1_pd(q[k]), p);
      s = _mm256_add_pd(s, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(out + j, s);
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double d = q[k] - soa[k * stride + j];
      s = s + d * d;
    }
    out[j] = s;
  }
}

void absmax_avx2(const double* q, const double* soa, std::size_t stride,
                 std::size_t dim, std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d m = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      __m256d p = _mm256_loadu_pd(soa + k * stride + j);
      __m256d d = abs_pd(_mm256_sub_pd(_mm256_set1_pd(q[k]), p));
      m = _mm256_max_pd(m, d);
    }
    _mm256_storeu_pd(out + j, m);
  }
  for (; j < n; ++j) {
    double m = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double d = std::fabs(q[k] - soa[k * stride + j]);
      if (d > m) m = d;
    }
    out[j] = m;
  }
}

void circle_avx2(double q, const double* pos, std::size_t n, double circumference,
                 double* out) {
  __m256d qq = _mm256_set1_pd(q);
  __m256d cc = _mm256_set1_pd(circumference);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d u = abs_pd(_mm256_sub_pd(qq, _mm256_loadu_pd(pos + j)));
    __m256d v = _mm256_sub_pd(cc, u);
    _mm256_storeu_pd(out + j, _mm256_min_pd(u, v));
  }
  for (; j < n; ++j) {
    double u = std::fabs(q - pos[j]);
    double v = circumference - u;
    out[j] = u < v ? u : v;
  }
}

void dot3_avx2(const double* q, const double* soa, std::size_t stride, std::size_t n,
               double* out) {
  __m256d q0 = _mm256_set1_pd(q[0]);
  __m256d q1 = _mm256_set1_pd(q[1]);
  __m256d q2 = _mm256_set1_pd(q[2]);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s = _mm256_mul_pd(q0, _mm256_loadu_pd(soa + j));
    s = _mm256_add_pd(s, _mm256_mul_pd(q1, _mm256_loadu_pd(soa + stride + j)));
    s = _mm256_add_pd(s, _mm256_mul_pd(q2, _mm256_loadu_pd(soa + 2 * stride + j)));
    _mm256_storeu_pd(out + j, s);
  }
  for (; j < n; ++j) {
    double s = q[0] * soa[j];
    s = s + q[1] * soa[stride + j];
    s = s + q[2] * soa[2 * stride + j];
    out[j] = s;
  }
}

void poincare_arg_avx2(double qx, double qy, const double* soa, std::size_t stride,
                       std::size_t n, double* out) {
  double qn_s = 1.0 - (qx * qx + qy * qy);
  __m256d qn = _mm256_set1_pd(qn_s);
  __m256d vqx = _mm256_set1_pd(qx);
  __m256d vqy = _mm256_set1_pd(qy);
  __m256d one = _mm256_set1_pd(1.0);
  __m256d two = _mm256_set1_pd(2.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d px = _mm256_loadu_pd(soa + j);
    __m256d py = _mm256_loadu_pd(soa + stride + j);
    __m256d dx = _mm256_sub_pd(vqx, px);
    __m256d dy = _mm256_sub_pd(vqy, py);
    __m256d e = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    __m256d pn = _mm256_sub_pd(one, _mm256_add_pd(_mm256_mul_pd(px, px), _mm256_mul_pd(py, py)));
    __m256d r = _mm256_div_pd(_mm256_mul_pd(two, e), _mm256_mul_pd(qn, pn));
    _mm256_storeu_pd(out + j, _mm256_add_pd(one, r));
  }
  for (; j < n; ++j) {
    double px = soa[j];
    double py = soa[stride + j];
    double dx = qx - px;
    double dy = qy - py;
    double e = dx * dx + dy * dy;
    double pn = 1.0 - (px * px + py * py);
    out[j] = 1.0 + (2.0 * e) / (qn_s * pn);
  }
}

void scale_max_avx2(double* acc, const double* dist, double inv_w, std::size_t n) {
  __m256d w = _mm256_set1_pd(inv_w);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(dist + j), w);
    _mm256_storeu_pd(acc + j, _mm256_max_pd(_mm256_loadu_pd(acc + j), v));
  }
  for (; j < n; ++j) {
    double v = dist[j] * inv_w;
    if (v > acc[j]) acc[j] = v;
  }
}

void offset_max_avx2(double* acc, const double* dist, double radius, std::size_t n) {
  __m256d r = _mm256_set1_pd(radius);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(dist + j), r);
    _mm256_storeu_pd(acc + j, _mm256_max_pd(_mm256_loadu_pd(acc + j), v));
  }
  for (; j < n; ++j) {
    double v = dist[j] - radius;
    if (v > acc[j]) acc[j] = v;
  }
}

std::size_t argmin_avx2(const double* v, std::size_t n) {
  if (n < 8) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (v[j] < v[best]) best = j;
    return best;
  }
  __m256d m = _mm256_loadu_pd(v);
  std::size_t j = 4;
  for (; j + 4 <= n; j += 4) m = _mm256_min_pd(m, _mm256_loadu_pd(v + j));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double mn = lanes[0];
  for (int k = 1; k < 4; ++k)
    if (lanes[k] < mn) mn = lanes[k];
  for (; j < n; ++j)
    if (v[j] < mn) mn = v[j];
  // First index attaining the global minimum, matching the scalar tie-break.
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] == mn) return i;
  return 0;
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable t = {
      sqdist_avx2, absmax_avx2, circle_avx2,    dot3_avx2,
      poincare_arg_avx2, scale_max_avx2, offset_max_avx2, argmin_avx2,
  };
  return &t;
}

}  // namespace mcurv::kernels
