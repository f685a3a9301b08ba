#include "adpt/kernels.hpp"

#include <atomic>
#include <string>

#include "adpt/errors.hpp"

namespace adpt::kernels {
namespace {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* table_for(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return detail::scalar_ops_table();
    case Backend::Avx2:
      return cpu_supports_avx2() ? detail::avx2_ops_table() : nullptr;
    case Backend::Neon:
      return detail::neon_ops_table();
  }
  return nullptr;
}

Backend pick_default() {
  if (table_for(Backend::Avx2)) return Backend::Avx2;
  if (table_for(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const Ops* ensure_initialized() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops) return ops;
  const Backend def = pick_default();
  const Ops* table = table_for(def);
  g_backend.store(def, std::memory_order_relaxed);
  g_active.store(table, std::memory_order_release);
  return table;
}

}  // namespace

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "?";
}

bool backend_available(Backend backend) { return table_for(backend) != nullptr; }

Backend active_backend() {
  ensure_initialized();
  return g_backend.load(std::memory_order_relaxed);
}

void set_backend(Backend backend) {
  const Ops* table = table_for(backend);
  if (!table)
    throw InputError(std::string("kernel backend '") + backend_name(backend) +
                     "' is not available on this machine");
  g_backend.store(backend, std::memory_order_relaxed);
  g_active.store(table, std::memory_order_release);
}

const Ops& active_ops() { return *ensure_initialized(); }

const Ops& ops_for(Backend backend) {
  const Ops* table = table_for(backend);
  if (!table)
    throw InputError(std::string("kernel backend '") + backend_name(backend) +
                     "' is not available on this machine");
  return *table;
}

void rank1_update(double w, const double* u, std::size_t rows, const double* v,
                  std::size_t cols, double* a) {
  if (rows < 8) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double s = w * v[j];
      double* col = a + j * rows;
      for (std::size_t i = 0; i < rows; ++i) col[i] += s * u[i];
    }
    return;
  }
  const Ops& ops = active_ops();
  for (std::size_t j = 0; j < cols; ++j) ops.axpy(w * v[j], u, a + j * rows, rows);
}

void rank1_write(double w, const double* u, std::size_t rows, const double* v,
                 std::size_t cols, double* out) {
  if (rows < 8) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double s = w * v[j];
      double* col = out + j * rows;
      for (std::size_t i = 0; i < rows; ++i) col[i] = s * u[i];
    }
    return;
  }
  const Ops& ops = active_ops();
  for (std::size_t j = 0; j < cols; ++j)
    ops.scale_copy(w * v[j], u, out + j * rows, rows);
}

}  // namespace adpt::kernels
