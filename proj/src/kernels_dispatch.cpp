#include "mcurv/kernels.hpp"

#include <atomic>

namespace mcurv::kernels {

#if MCURV_HAVE_AVX2
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table_or_null() {
#if MCURV_HAVE_AVX2
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool avx2_supported() {
#if MCURV_HAVE_AVX2
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve_auto() {
  if (avx2_supported()) {
    if (const KernelTable* t = avx2_table_or_null()) return t;
  }
  return &scalar_table;
}

std::atomic<const KernelTable*> g_table{nullptr};

}  // namespace

void set_backend(Backend b) {
  switch (b) {
    case Backend::Scalar:
      g_table.store(&scalar_table, std::memory_order_relaxed);
      break;
    case Backend::Avx2: {
      const KernelTable* t = avx2_supported() ? avx2_table_or_null() : nullptr;
      g_table.store(t ? t : &scalar_table, std::memory_order_relaxed);
      break;
    }
    case Backend::Auto:
      g_table.store(resolve_auto(), std::memory_order_relaxed);
      break;
  }
}

const KernelTable& table() {
  const KernelTable* t = g_table.load(std::memory_order_relaxed);
  if (!t) {
    t = resolve_auto();
    g_table.store(t, std::memory_order_relaxed);
  }
  return *t;
}

Backend active_backend() {
  return &table() == &scalar_table ? Backend::Scalar : Backend::Avx2;
}

}  // namespace mcurv::kernels
