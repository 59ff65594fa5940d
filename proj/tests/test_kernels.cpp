#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vsumm/kernels.hpp"

using namespace vsumm;
using kernels::Isa;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

void check_close(double a, double b, double scale) {
  CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, scale));
}

}  // namespace

TEST_CASE("scalar kernels match textbook loops") {
  const auto& k = kernels::table_for(Isa::scalar);
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, -5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
  CHECK(k.squared_distance(a.data(), b.data(), 3) == doctest::Approx(9 + 49 + 9));

  std::vector<double> y{1, 1, 1};
  k.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});

  // A = [[1,2,3],[4,5,6]]
  const std::vector<double> m{1, 2, 3, 4, 5, 6};
  std::vector<double> out{10, 20};
  k.gemv(m.data(), 2, 3, a.data(), out.data());
  CHECK(out == std::vector<double>{24, 52});

  std::vector<double> out_t{0, 0, 0};
  const std::vector<double> x2{1, -1};
  k.gemv_t(m.data(), 2, 3, x2.data(), out_t.data());
  CHECK(out_t == std::vector<double>{-3, -3, -3});

  std::vector<double> r{0, 0, 0, 0, 0, 0};
  k.rank1_update(r.data(), 2, 3, 0.5, x2.data(), a.data());
  CHECK(r == std::vector<double>{0.5, 1, 1.5, -0.5, -1, -1.5});
}

TEST_CASE("every available SIMD variant agrees with the scalar reference") {
  const auto& ref = kernels::table_for(Isa::scalar);
  Rng rng(7);
  for (Isa isa : {Isa::avx2}) {
    if (!kernels::isa_available(isa)) {
      MESSAGE("skipping unavailable isa " << kernels::isa_name(isa));
      continue;
    }
    const auto& simd = kernels::table_for(isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto a = random_vec(n, rng);
      const auto b = random_vec(n, rng);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
      check_close(simd.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), scale);
      check_close(simd.squared_distance(a.data(), b.data(), n),
                  ref.squared_distance(a.data(), b.data(), n), 16.0 * static_cast<double>(n));

      auto y1 = random_vec(n, rng);
      auto y2 = y1;
      simd.axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], 4.0);
    }
    for (std::size_t rows : {1u, 3u, 8u, 13u}) {
      for (std::size_t cols : {1u, 4u, 7u, 33u}) {
        const auto m = random_vec(rows * cols, rng);
        const auto x = random_vec(cols, rng);
        const auto xr = random_vec(rows, rng);
        std::vector<double> y1(rows, 0.5), y2(rows, 0.5);
        simd.gemv(m.data(), rows, cols, x.data(), y1.data());
        ref.gemv(m.data(), rows, cols, x.data(), y2.data());
        for (std::size_t i = 0; i < rows; ++i) check_close(y1[i], y2[i], 4.0 * static_cast<double>(cols));

        std::vector<double> z1(cols, 0.0), z2(cols, 0.0);
        simd.gemv_t(m.data(), rows, cols, xr.data(), z1.data());
        ref.gemv_t(m.data(), rows, cols, xr.data(), z2.data());
        for (std::size_t i = 0; i < cols; ++i) check_close(z1[i], z2[i], 4.0 * static_cast<double>(rows));

        auto r1 = m;
        auto r2 = m;
        simd.rank1_update(r1.data(), rows, cols, -1.5, xr.data(), x.data());
        ref.rank1_update(r2.data(), rows, cols, -1.5, xr.data(), x.data());
        for (std::size_t i = 0; i < r1.size(); ++i) check_close(r1[i], r2[i], 8.0);
      }
    }
  }
}

TEST_CASE("dispatch can be forced to scalar and back") {
  const Isa before = kernels::active_isa();
  kernels::set_isa(Isa::scalar);
  CHECK(kernels::active_isa() == Isa::scalar);
  const std::vector<double> a{1, 2};
  CHECK(kernels::dot(a, a) == 5.0);
  kernels::set_isa(before);
  CHECK(kernels::active_isa() == before);
  if (!kernels::isa_available(Isa::avx2)) CHECK_THROWS(kernels::set_isa(Isa::avx2));
}
