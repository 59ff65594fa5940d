#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vsumm/dataio.hpp"

namespace vsumm {

struct Shot {
  Interval frames;
  double score = 0.0;

  std::size_t length() const noexcept { return frames.length(); }
};

using ShotTable = std::vector<Shot>;

struct SummaryMask {
  std::vector<std::uint8_t> mask;  // one entry per original frame
  std::vector<std::size_t> selected_shots;
  std::size_t total_length = 0;
  std::size_t budget = 0;
};

inline constexpr double kDefaultBudgetFraction = 0.15;

/// Per-original-frame scores: frame f takes the score of the last pick at or
/// before f (frames before the first pick take the first score).
std::vector<double> upsample_scores(std::span<const double> step_scores,
                                    std::span<const std::size_t> picks,
                                    std::size_t n_frames_original);

/// Mean upsampled score of each shot.
ShotTable shot_scores(std::span<const double> frame_probs, std::span<const std::size_t> picks,
                      std::span<const Interval> segments);

/// 0/1 knapsack over shots by dynamic programming on integer capacity.
/// Returns shot indices in increasing order. When taking a shot ties with
/// leaving it out, it is left out.
std::vector<std::size_t> knapsack_select(const ShotTable& shots, std::size_t budget);

/// floor(budget_fraction * n_frames_original) frames of shots chosen by
/// knapsack over shot scores. Shots come from the record's change points, or
/// KTS when it has none.
SummaryMask generate_summary(const VideoRecord& record, std::span<const double> frame_probs,
                             double budget_fraction = kDefaultBudgetFraction);

/// Same, with an explicit shot list.
SummaryMask generate_summary(const VideoRecord& record, std::span<const double> frame_probs,
                             std::span<const Interval> shots, double budget_fraction);

/// Maximal runs of ones in a binary mask, as inclusive intervals.
std::vector<Interval> mask_runs(std::span<const std::uint8_t> mask);

}  // namespace vsumm
