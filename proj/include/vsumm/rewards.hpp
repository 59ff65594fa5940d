#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vsumm/matrix.hpp"

namespace vsumm {

struct RewardConfig {
  /// Frame pairs further apart than this are treated as fully dissimilar.
  std::size_t lambda_window = 20;
  /// When false the window is infinite.
  bool use_lambda = true;

  static RewardConfig unlimited() { return {0, false}; }
};

struct RewardValue {
  double r_div = 0.0;
  double r_rep = 0.0;
  double total = 0.0;
};

/// 1 - cosine similarity, in [0, 2]. A zero-norm argument gives 1.
double dissimilarity(std::span<const double> x, std::span<const double> y);

/// Mean dissimilarity over ordered pairs of distinct selected frames, with
/// pairs more than lambda_window steps apart counted as 1. Returns 0 for
/// fewer than two selected frames.
double diversity_reward(const Matrix& features, std::span<const std::size_t> selected,
                        const RewardConfig& cfg);

/// exp(-(1/T) sum_t min_{s in selected} ||x_t - x_s||). `selected` must be
/// nonempty.
double representativeness_reward(const Matrix& features,
                                 std::span<const std::size_t> selected);

/// Both rewards for the frames with a_t = 1; all zeros when nothing is
/// selected.
RewardValue total_reward(const Matrix& features, std::span<const std::uint8_t> actions,
                         const RewardConfig& cfg);

std::vector<std::size_t> selected_indices(std::span<const std::uint8_t> actions);

/// Pairwise dissimilarity and Euclidean distance tables for one video, so
/// that rewards for many episodes cost O(|Y|^2 + T|Y|) lookups each.
class RewardTables {
 public:
  explicit RewardTables(const Matrix& features);

  std::size_t length() const noexcept { return n_; }
  double dissimilarity(std::size_t a, std::size_t b) const { return dissim_[a * n_ + b]; }
  double distance(std::size_t a, std::size_t b) const { return dist_[a * n_ + b]; }

  double diversity(std::span<const std::size_t> selected, const RewardConfig& cfg) const;
  double representativeness(std::span<const std::size_t> selected) const;
  RewardValue total(std::span<const std::uint8_t> actions, const RewardConfig& cfg) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> dissim_;
  std::vector<double> dist_;
};

}  // namespace vsumm
