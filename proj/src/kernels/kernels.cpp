#include "vsumm/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernel_tables.hpp"

namespace vsumm::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(VSUMM_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa pick_default() {
  if (const char* env = std::getenv("VSUMM_ISA")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const KernelTable& current() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    const Isa isa = pick_default();
    t = &table_for(isa);
    g_isa.store(isa, std::memory_order_relaxed);
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("instruction set not available: " +
                                std::string(isa_name(isa)));
#if defined(VSUMM_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

Isa active_isa() {
  current();
  return g_isa.load(std::memory_order_relaxed);
}

void set_isa(Isa isa) {
  const KernelTable* t = &table_for(isa);
  g_isa.store(isa, std::memory_order_relaxed);
  g_table.store(t, std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return current().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return current().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  current().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  assert(a.size() == rows * cols && x.size() == cols && y.size() == rows);
  current().gemv(a.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  assert(a.size() == rows * cols && x.size() == rows && y.size() == cols);
  current().gemv_t(a.data(), rows, cols, x.data(), y.data());
}

void rank1_update(std::span<double> a, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> x,
                  std::span<const double> y) {
  assert(a.size() == rows * cols && x.size() == rows && y.size() == cols);
  current().rank1_update(a.data(), rows, cols, alpha, x.data(), y.data());
}

}  // namespace vsumm::kernels
