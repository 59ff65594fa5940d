#include "vsumm/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vsumm/errors.hpp"
#include "vsumm/kernels.hpp"

namespace vsumm {

SegmentationResult segments_from_change_points(std::vector<std::size_t> change_points,
                                               std::size_t length) {
  if (length == 0) throw std::invalid_argument("segmentation over an empty range");
  SegmentationResult r;
  r.change_points = std::move(change_points);
  std::size_t start = 0;
  for (auto cp : r.change_points) {
    if (cp <= start || cp >= length)
      throw std::invalid_argument("change points must be increasing and inside the range");
    r.segments.push_back({start, cp - 1});
    start = cp;
  }
  r.segments.push_back({start, length - 1});
  return r;
}

KernelScatter::KernelScatter(const Matrix& features) : n_(features.rows()) {
  const std::size_t d = features.cols();
  Matrix unit(n_, d);
  for (std::size_t t = 0; t < n_; ++t) {
    const double norm = std::sqrt(kernels::dot(features.row(t), features.row(t)));
    if (norm > 0.0) kernels::axpy(1.0 / norm, features.row(t), unit.row(t));
  }
  const std::size_t w = n_ + 1;
  diag_prefix_.assign(w, 0.0);
  prefix_.assign(w * w, 0.0);
  std::vector<double> gram_row(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) gram_row[j] = kernels::dot(unit.row(i), unit.row(j));
    diag_prefix_[i + 1] = diag_prefix_[i] + gram_row[i];
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      row_sum += gram_row[j];
      prefix_[(i + 1) * w + (j + 1)] = prefix_[i * w + (j + 1)] + row_sum;
    }
  }
}

double KernelScatter::block(std::size_t begin, std::size_t end) const {
  const std::size_t w = n_ + 1;
  return prefix_[end * w + end] - prefix_[begin * w + end] - prefix_[end * w + begin] +
         prefix_[begin * w + begin];
}

double KernelScatter::scatter(std::size_t begin, std::size_t end) const {
  if (!(begin < end && end <= n_)) throw std::out_of_range("scatter: bad segment");
  const double len = static_cast<double>(end - begin);
  return (diag_prefix_[end] - diag_prefix_[begin]) - block(begin, end) / len;
}

double change_point_penalty(std::size_t m, std::size_t length) {
  if (m == 0) return 0.0;
  const double mm = static_cast<double>(m);
  return mm * (std::log(static_cast<double>(length) / mm) + 1.0);
}

ScatterPath optimal_scatter_paths(const KernelScatter& scatter, std::size_t max_change_points) {
  const std::size_t n = scatter.length();
  if (n < 2) throw std::invalid_argument("segmentation needs at least 2 frames");
  if (max_change_points >= n)
    throw std::invalid_argument("max_change_points must be smaller than the sequence length");
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t levels = max_change_points + 1;

  // cost[m][j]: best scatter of [0, j) split into m+1 segments.
  std::vector<std::vector<double>> cost(levels, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> from(levels, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t j = 1; j <= n; ++j) cost[0][j] = scatter.scatter(0, j);
  for (std::size_t m = 1; m < levels; ++m) {
    for (std::size_t j = m + 1; j <= n; ++j) {
      double best = inf;
      std::size_t arg = 0;
      for (std::size_t i = m; i < j; ++i) {
        const double c = cost[m - 1][i] + scatter.scatter(i, j);
        if (c < best) {
          best = c;
          arg = i;
        }
      }
      cost[m][j] = best;
      from[m][j] = arg;
    }
  }

  ScatterPath path;
  for (std::size_t m = 0; m < levels; ++m) {
    path.cost.push_back(cost[m][n]);
    std::vector<std::size_t> cps(m);
    std::size_t j = n;
    for (std::size_t k = m; k > 0; --k) {
      j = from[k][j];
      cps[k - 1] = j;
    }
    path.change_points.push_back(std::move(cps));
  }
  return path;
}

SegmentationResult kts_segment(const Matrix& features, std::size_t max_change_points,
                               double penalty_weight) {
  const std::size_t n = features.rows();
  if (n < 2) throw DataError("kts_segment: need at least 2 frames");
  if (max_change_points >= n) throw ConfigError("kts_segment: max_change_points must be < T");
  if (!(penalty_weight >= 0.0) || !std::isfinite(penalty_weight))
    throw ConfigError("kts_segment: penalty weight must be finite and >= 0");
  const KernelScatter scatter(features);
  const ScatterPath path = optimal_scatter_paths(scatter, max_change_points);
  std::size_t best_m = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < path.cost.size(); ++m) {
    const double objective = path.cost[m] + penalty_weight * change_point_penalty(m, n);
    if (objective < best) {
      best = objective;
      best_m = m;
    }
  }
  return segments_from_change_points(path.change_points[best_m], n);
}

std::size_t default_max_change_points(std::size_t num_steps, std::size_t n_frames_original,
                                      double fps) {
  if (num_steps < 2) return 0;
  std::size_t m = num_steps / 4;
  if (fps > 0.0) {
    const double seconds = static_cast<double>(n_frames_original) / fps;
    m = static_cast<std::size_t>(seconds / 2.0);
  }
  return std::clamp<std::size_t>(m, 1, num_steps - 1);
}

SegmentationResult map_segments_to_original(const SegmentationResult& result,
                                            std::span<const std::size_t> picks,
                                            std::size_t n_frames_original) {
  std::vector<std::size_t> original;
  original.reserve(result.change_points.size());
  for (auto cp : result.change_points) {
    if (cp >= picks.size()) throw std::out_of_range("change point beyond picks");
    if (picks[cp] > 0 && (original.empty() || picks[cp] > original.back()))
      original.push_back(picks[cp]);
  }
  return segments_from_change_points(std::move(original), n_frames_original);
}

std::vector<Interval> shots_for(const VideoRecord& record, double penalty_weight) {
  if (!record.change_points.empty()) return record.change_points;
  const std::size_t max_cp = default_max_change_points(record.num_steps(),
                                                       record.n_frames_original, record.fps);
  const auto sub = kts_segment(record.features, max_cp, penalty_weight);
  return map_segments_to_original(sub, record.picks, record.n_frames_original).segments;
}

}  // namespace vsumm
