#pragma once

// Independent reference computations for the unit and acceptance tests.
// Deliberately naive: plain loops, no kernels, no shared code paths with the
// library beyond the data types.

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "vsumm/matrix.hpp"
#include "vsumm/rng.hpp"

namespace oracle {

inline vsumm::Matrix random_matrix(std::size_t rows, std::size_t cols, vsumm::Rng& rng,
                                   double lo = -1.0, double hi = 1.0) {
  vsumm::Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

inline double cosine_dissim(const vsumm::Matrix& x, std::size_t a, std::size_t b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    dot += x(a, j) * x(b, j);
    na += x(a, j) * x(a, j);
    nb += x(b, j) * x(b, j);
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Mean of d over ordered pairs (t, t'), t != t'. `lambda` empty = no window.
inline double diversity(const vsumm::Matrix& x, const std::vector<std::size_t>& sel,
                        std::optional<std::size_t> lambda) {
  const std::size_t k = sel.size();
  if (k < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const std::size_t a = sel[i], b = sel[j];
      const std::size_t gap = a > b ? a - b : b - a;
      sum += (lambda && gap > *lambda) ? 1.0 : cosine_dissim(x, a, b);
    }
  }
  return sum / static_cast<double>(k * (k - 1));
}

inline double euclid(const vsumm::Matrix& x, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) s += (x(a, j) - x(b, j)) * (x(a, j) - x(b, j));
  return std::sqrt(s);
}

inline double representativeness(const vsumm::Matrix& x, const std::vector<std::size_t>& sel) {
  double total = 0.0;
  for (std::size_t t = 0; t < x.rows(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (auto s : sel) best = std::min(best, euclid(x, t, s));
    total += best;
  }
  return std::exp(-total / static_cast<double>(x.rows()));
}

struct KnapsackBest {
  double value = 0.0;
  std::uint32_t subset = 0;
};

/// Exhaustive 0/1 knapsack; values summed in increasing index order.
inline KnapsackBest knapsack(const std::vector<double>& values,
                             const std::vector<std::size_t>& lengths, std::size_t budget) {
  KnapsackBest best;
  const std::size_t n = values.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::size_t len = 0;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        len += lengths[i];
        v += values[i];
      }
    if (len <= budget && v > best.value) best = {v, mask};
  }
  return best;
}

inline double subset_value(const std::vector<double>& values, const std::vector<std::size_t>& idx) {
  double v = 0.0;
  for (auto i : idx) v += values[i];
  return v;
}

/// Direct within-segment scatter of [begin, end) for the cosine kernel.
inline double direct_scatter(const vsumm::Matrix& x, std::size_t begin, std::size_t end) {
  auto k = [&](std::size_t a, std::size_t b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      dot += x(a, j) * x(b, j);
      na += x(a, j) * x(a, j);
      nb += x(b, j) * x(b, j);
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  };
  double diag = 0.0, all = 0.0;
  for (std::size_t a = begin; a < end; ++a) {
    diag += k(a, a);
    for (std::size_t b = begin; b < end; ++b) all += k(a, b);
  }
  return diag - all / static_cast<double>(end - begin);
}

struct SegmentationBest {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> change_points;
};

/// Minimum total scatter over every placement of exactly m change points.
inline SegmentationBest exhaustive_segmentation(const vsumm::Matrix& x, std::size_t m) {
  const std::size_t n = x.rows();
  SegmentationBest best;
  std::vector<std::size_t> cps(m);
  // Enumerate increasing sequences in [1, n-1] of length m.
  auto rec = [&](auto&& self, std::size_t pos, std::size_t from) -> void {
    if (pos == m) {
      double cost = 0.0;
      std::size_t start = 0;
      for (auto c : cps) {
        cost += direct_scatter(x, start, c);
        start = c;
      }
      cost += direct_scatter(x, start, n);
      if (cost < best.cost - 1e-12) best = {cost, cps};
      return;
    }
    for (std::size_t c = from; c + (m - pos) <= n; ++c) {
      cps[pos] = c;
      self(self, pos + 1, c + 1);
    }
  };
  rec(rec, 0, 1);
  return best;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    vsumm::Rng rng(std::hash<std::string>{}(tag) ^
                   static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    path = std::filesystem::temp_directory_path() /
           ("vsumm_" + tag + "_" + std::to_string(rng.next_u64() % 1000000000ULL));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace oracle
