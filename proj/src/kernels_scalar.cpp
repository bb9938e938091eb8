#include "mcurv/kernels.hpp"

#include <cmath>

namespace mcurv::kernels {
namespace {

void sqdist_scalar(const double* q, const double* soa, std::size_t stride,
                   std::size_t dim, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double d = q[k] - soa[k * stride + j];
      s = s + d * d;
    }
    out[j] = s;
  }
}

void absmax_scalar(const double* q, const double* soa, std::size_t stride,
                   std::size_t dim, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double m = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double d = std::fabs(q[k] - soa[k * stride + j]);
      if (d > m) m = d;
    }
    out[j] = m;
  }
}

void circle_scalar(double q, const double* pos, std::size_t n, double circumference,
                   double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double u = std::fabs(q - pos[j]);
    double v = circumference - u;
    out[j] = u < v ? u : v;
  }
}

void dot3_scalar(const double* q, const double* soa, std::size_t stride, std::size_t n,
                 double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double s = q[0] * soa[j];
    s = s + q[1] * soa[stride + j];
    s = s + q[2] * soa[2 * stride + j];
    out[j] = s;
  }
}

void poincare_arg_scalar(double qx, double qy, const double* soa, std::size_t stride,
                         std::size_t n, double* out) {
  double qn = 1.0 - (qx * qx + qy * qy);
  for (std::size_t j = 0; j < n; ++j) {
    double px = soa[j];
    double py = soa[stride + j];
    double dx = qx - px;
    double dy = qy - py;
    double e = dx * dx + dy * dy;
    double pn = 1.0 - (px * px + py * py);
    out[j] = 1.0 + (2.0 * e) / (qn * pn);
  }
}

void scale_max_scalar(double* acc, const double* dist, double inv_w, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double v = dist[j] * inv_w;
    if (v > acc[j]) acc[j] = v;
  }
}

void offset_max_scalar(double* acc, const double* dist, double radius, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double v = dist[j] - radius;
    if (v > acc[j]) acc[j] = v;
  }
}

std::size_t argmin_scalar(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (v[j] < v[best]) best = j;
  }
  return best;
}

}  // namespace

const KernelTable scalar_table = {
    sqdist_scalar, absmax_scalar, circle_scalar,    dot3_scalar,
    poincare_arg_scalar, scale_max_scalar, offset_max_scalar, argmin_scalar,
};

}  // namespace mcurv::kernels
