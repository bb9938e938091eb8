#pragma once

#include <cstddef>

namespace mcurv::kernels {

// Batch kernels over arrays of candidate points. Point clouds are stored in
// coordinate-major (SoA) layout: coordinate k of point j lives at
// soa[k * stride + j]. Every kernel writes out[j] for j in [0, n).
//
// The scalar table is the reference implementation; the AVX2 table must be
// bit-identical to it (same operation order per element, no FMA). Divisions
// by weights are expressed as multiplication by a precomputed reciprocal so
// both backends round identically.

using BatchSqDistFn = void (*)(const double* q, const double* soa, std::size_t stride,
                               std::size_t dim, std::size_t n, double* out);
using BatchAbsMaxFn = void (*)(const double* q, const double* soa, std::size_t stride,
                               std::size_t dim, std::size_t n, double* out);
using BatchCircleFn = void (*)(double q, const double* pos, std::size_t n,
                               double circumference, double* out);
using BatchDot3Fn = void (*)(const double* q, const double* soa, std::size_t stride,
                             std::size_t n, double* out);
using BatchPoincareArgFn = void (*)(double qx, double qy, const double* soa,
                                    std::size_t stride, std::size_t n, double* out);
using ScaleMaxFn = void (*)(double* acc, const double* dist, double inv_w, std::size_t n);
using OffsetMaxFn = void (*)(double* acc, const double* dist, double radius, std::size_t n);
using ArgMinFn = std::size_t (*)(const double* v, std::size_t n);

struct KernelTable {
  BatchSqDistFn batch_sqdist;        // out[j] = sum_k (q[k] - p_j[k])^2
  BatchAbsMaxFn batch_absmax;        // out[j] = max_k |q[k] - p_j[k]|
  BatchCircleFn batch_circle;        // out[j] = min(|q - pos[j]|, C - |q - pos[j]|)
  BatchDot3Fn batch_dot3;            // out[j] = <q, p_j>, 3-dimensional
  BatchPoincareArgFn batch_poincare_arg;  // out[j] = 1 + 2|q-p_j|^2 / ((1-|q|^2)(1-|p_j|^2))
  ScaleMaxFn scale_max;              // acc[j] = max(acc[j], dist[j] * inv_w)
  OffsetMaxFn offset_max;            // acc[j] = max(acc[j], dist[j] - radius)
  ArgMinFn argmin;                   // first index attaining the minimum; n > 0
};

enum class Backend { Auto, Scalar, Avx2 };

bool avx2_supported();
void set_backend(Backend b);   // Avx2 falls back to Scalar when unsupported
Backend active_backend();      // resolved backend, never Auto
const KernelTable& table();

extern const KernelTable scalar_table;
const KernelTable* avx2_table_or_null();

}  // namespace mcurv::kernels
