#include "vsumm/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vsumm/errors.hpp"
#include "vsumm/segmentation.hpp"

namespace vsumm {

std::vector<double> upsample_scores(std::span<const double> step_scores,
                                    std::span<const std::size_t> picks,
                                    std::size_t n_frames_original) {
  if (step_scores.size() != picks.size() || picks.empty())
    throw std::invalid_argument("upsample_scores: scores and picks differ in length");
  std::vector<double> out(n_frames_original);
  std::size_t k = 0;
  for (std::size_t f = 0; f < n_frames_original; ++f) {
    while (k + 1 < picks.size() && picks[k + 1] <= f) ++k;
    out[f] = step_scores[k];
  }
  return out;
}

ShotTable shot_scores(std::span<const double> frame_probs, std::span<const std::size_t> picks,
                      std::span<const Interval> segments) {
  if (segments.empty()) return {};
  const std::size_t n = segments.back().end + 1;
  const auto frame_scores = upsample_scores(frame_probs, picks, n);
  ShotTable shots;
  shots.reserve(segments.size());
  for (const auto& seg : segments) {
    if (seg.end < seg.start || seg.end >= n) throw std::invalid_argument("shot_scores: bad segment");
    double sum = 0.0;
    for (std::size_t f = seg.start; f <= seg.end; ++f) sum += frame_scores[f];
    shots.push_back({seg, sum / static_cast<double>(seg.length())});
  }
  return shots;
}

std::vector<std::size_t> knapsack_select(const ShotTable& shots, std::size_t budget) {
  const std::size_t n = shots.size();
  const std::size_t w = budget + 1;
  // best[i][c]: best value over the first i shots with capacity c.
  std::vector<double> best((n + 1) * w, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t len = shots[i - 1].length();
    const double value = shots[i - 1].score;
    const double* prev = best.data() + (i - 1) * w;
    double* cur = best.data() + i * w;
    for (std::size_t c = 0; c < w; ++c) {
      cur[c] = prev[c];
      if (len <= c) {
        const double take = prev[c - len] + value;
        if (take > cur[c]) cur[c] = take;
      }
    }
  }
  std::vector<std::size_t> chosen;
  std::size_t c = budget;
  for (std::size_t i = n; i > 0; --i) {
    if (best[i * w + c] != best[(i - 1) * w + c]) {
      chosen.push_back(i - 1);
      c -= shots[i - 1].length();
    }
  }
  std::reverse(chosen.begin(), chosen.end());
  return chosen;
}

SummaryMask generate_summary(const VideoRecord& record, std::span<const double> frame_probs,
                             std::span<const Interval> shots, double budget_fraction) {
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0))
    throw ConfigError("budget fraction must lie in (0, 1]");
  if (frame_probs.size() != record.num_steps())
    throw std::invalid_argument("generate_summary: one score per subsampled frame required");
  const ShotTable table = shot_scores(frame_probs, record.picks, shots);
  if (!shots.empty() && shots.back().end + 1 != record.n_frames_original)
    throw DataError("video '" + record.video_id + "': shots do not cover the video");

  SummaryMask out;
  out.budget = static_cast<std::size_t>(
      std::floor(budget_fraction * static_cast<double>(record.n_frames_original)));
  out.selected_shots = knapsack_select(table, out.budget);
  out.mask.assign(record.n_frames_original, 0);
  for (auto s : out.selected_shots) {
    const auto& iv = table[s].frames;
    std::fill(out.mask.begin() + static_cast<std::ptrdiff_t>(iv.start),
              out.mask.begin() + static_cast<std::ptrdiff_t>(iv.end + 1), std::uint8_t{1});
    out.total_length += iv.length();
  }
  return out;
}

SummaryMask generate_summary(const VideoRecord& record, std::span<const double> frame_probs,
                             double budget_fraction) {
  const auto shots = shots_for(record);
  return generate_summary(record, frame_probs, shots, budget_fraction);
}

std::vector<Interval> mask_runs(std::span<const std::uint8_t> mask) {
  std::vector<Interval> runs;
  std::size_t f = 0;
  while (f < mask.size()) {
    if (!mask[f]) {
      ++f;
      continue;
    }
    const std::size_t start = f;
    while (f < mask.size() && mask[f]) ++f;
    runs.push_back({start, f - 1});
  }
  return runs;
}

}  // namespace vsumm
