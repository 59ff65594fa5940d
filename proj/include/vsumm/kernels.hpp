#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops shared by the policy network, the reward
// tables and kernel temporal segmentation. Every kernel has a portable scalar
// reference and, on x86-64, an AVX2+FMA variant picked at runtime.
namespace vsumm::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when `isa` was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Instruction set currently used by the free functions below. Chosen on
/// first use: the best available one, unless VSUMM_ISA=scalar is set.
Isa active_isa();

/// Force a particular instruction set. Throws std::invalid_argument if the
/// CPU cannot run it.
void set_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// y += A x, A row-major rows x cols
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

// y += A^T x
void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);

// A += alpha * x y^T
void rank1_update(std::span<double> a, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> x,
                  std::span<const double> y);

/// Function table for one instruction set. Exposed so tests can run two
/// variants side by side without touching the global selection.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
  void (*rank1_update)(double* a, std::size_t rows, std::size_t cols,
                       double alpha, const double* x, const double* y);
};

/// Table for `isa`; throws std::invalid_argument if unavailable.
const KernelTable& table_for(Isa isa);

}  // namespace vsumm::kernels
