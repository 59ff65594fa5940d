#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsumm/dataio.hpp"
#include "vsumm/policy_net.hpp"

namespace vsumm {

/// Precision, recall and F-measure as fractions in [0, 1].
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

/// Overlap-based P/R/F of two binary frame masks of equal length. Any zero
/// denominator yields 0 for that quantity.
Prf fscore(std::span<const std::uint8_t> machine, std::span<const std::uint8_t> user);

enum class Aggregation { average, max };

std::string_view aggregation_name(Aggregation mode);

/// Conventional choice per benchmark: max for SumMe-like datasets (name
/// contains "summe", any case), average otherwise.
Aggregation default_aggregation(std::string_view dataset_name);

/// F against several annotators. average: mean of each of P, R, F over
/// users. max: the P/R/F of the user with the highest F (first on ties).
Prf multi_user_fscore(std::span<const std::uint8_t> machine,
                      const std::vector<std::vector<std::uint8_t>>& users, Aggregation mode);

/// Zero-lag normalized cross-correlation of the mean-centered inputs, in
/// [-1, 1]; 0 when either input is constant.
double xcorr(std::span<const double> pred, std::span<const double> gt);

struct VideoScore {
  std::string video_id;
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  double f_score = 0.0;    // percent
};

struct EvalResult {
  std::vector<VideoScore> videos;
  double mean_f = 0.0;  // percent
  Aggregation mode = Aggregation::average;
};

/// Forward pass, keyshot summary at `budget_fraction` and multi-user F for
/// each video. Throws DataError if a video lacks user summaries.
EvalResult evaluate_fold(const PolicyParams& params, std::span<const VideoRecord> test_videos,
                         Aggregation mode, double budget_fraction = 0.15);

/// Mean of per-fold mean F.
double cross_validation_score(std::span<const EvalResult> folds);

}  // namespace vsumm
