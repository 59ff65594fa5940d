#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vsumm/dataio.hpp"
#include "vsumm/matrix.hpp"

namespace vsumm {

/// A partition of a frame range into contiguous segments. Each change point
/// is the first index of a segment other than the first.
struct SegmentationResult {
  std::vector<std::size_t> change_points;
  std::vector<Interval> segments;
};

/// Builds segments from change points over [0, length).
SegmentationResult segments_from_change_points(std::vector<std::size_t> change_points,
                                               std::size_t length);

/// Within-segment scatter of the cosine kernel, answered in O(1) per segment
/// from cumulative sums of the Gram matrix of L2-normalized features.
class KernelScatter {
 public:
  explicit KernelScatter(const Matrix& features);

  std::size_t length() const noexcept { return n_; }

  /// Scatter of the half-open segment [begin, end):
  ///   sum_i K(i,i) - (1/len) sum_{i,j} K(i,j).
  double scatter(std::size_t begin, std::size_t end) const;

 private:
  double block(std::size_t begin, std::size_t end) const;

  std::size_t n_ = 0;
  std::vector<double> diag_prefix_;  // n+1
  std::vector<double> prefix_;       // (n+1) x (n+1)
};

/// m * (log(T / m) + 1), and 0 for m = 0.
double change_point_penalty(std::size_t m, std::size_t length);

/// Minimum total scatter with exactly m change points, for m = 0..max, and
/// the boundaries that achieve it.
struct ScatterPath {
  std::vector<double> cost;
  std::vector<std::vector<std::size_t>> change_points;
};
ScatterPath optimal_scatter_paths(const KernelScatter& scatter, std::size_t max_change_points);

/// Kernel temporal segmentation: picks m minimizing
///   scatter_m + penalty_weight * change_point_penalty(m, T)
/// (smallest m on ties). Requires T >= 2 and max_change_points < T.
SegmentationResult kts_segment(const Matrix& features, std::size_t max_change_points,
                               double penalty_weight = 1.0);

/// One change point per two seconds of source video, clamped to [1, T-1].
/// Falls back to T/4 when the frame rate is unknown.
std::size_t default_max_change_points(std::size_t num_steps, std::size_t n_frames_original,
                                      double fps);

/// Maps a segmentation over subsampled steps to original frames: a boundary
/// before step t lands on original frame picks[t]; the first segment starts
/// at 0 and the last ends at n_frames_original - 1.
SegmentationResult map_segments_to_original(const SegmentationResult& result,
                                            std::span<const std::size_t> picks,
                                            std::size_t n_frames_original);

/// Original-frame shots for a record: its stored change points if present,
/// otherwise KTS over its features.
std::vector<Interval> shots_for(const VideoRecord& record, double penalty_weight = 1.0);

}  // namespace vsumm
