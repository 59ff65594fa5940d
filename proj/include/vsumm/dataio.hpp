#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vsumm/matrix.hpp"

namespace vsumm {

/// Inclusive frame interval [start, end].
struct Interval {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start + 1; }
  bool operator==(const Interval&) const = default;
};

/// Everything the engine knows about one video.
///
/// Features are T x D, one row per subsampled frame. `picks[t]` is the
/// original-frame index of row t. Ground-truth data (change points, user
/// summaries) lives in original-frame space. Optional fields are empty when
/// absent.
struct VideoRecord {
  std::string video_id;
  Matrix features;
  std::size_t n_frames_original = 0;
  std::vector<std::size_t> picks;
  std::vector<Interval> change_points;
  std::vector<std::vector<std::uint8_t>> user_summaries;
  std::vector<std::size_t> keyframe_indices;
  std::vector<double> gt_importance;
  /// Original frame rate; 0 when unknown.
  double fps = 0.0;

  std::size_t num_steps() const noexcept { return features.rows(); }
  std::size_t feature_dim() const noexcept { return features.cols(); }

  bool operator==(const VideoRecord&) const = default;
};

/// Throws DataError naming the first violated field.
void validate(const VideoRecord& record);

/// Sidecar path for a feature file: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& feature_path);

/// Reads "<stem>.fvs" plus its JSON sidecar. Feature values are stored as
/// 32-bit floats and widened to double.
VideoRecord load_video(const std::filesystem::path& path);

/// Validates, then writes the feature file and sidecar. Features are
/// narrowed to 32-bit floats.
void write_video(const VideoRecord& record, const std::filesystem::path& path);

/// All "*.fvs" files in a directory, sorted by video id.
std::vector<VideoRecord> load_dataset(const std::filesystem::path& dir);

struct Fold {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  bool operator==(const Fold&) const = default;
};

struct SplitSpec {
  std::string name = "custom";
  std::vector<Fold> folds;
  bool operator==(const SplitSpec&) const = default;
};

/// Throws ConfigError if any fold's train and test sets intersect or a fold
/// has an empty test set.
void validate(const SplitSpec& split);

/// k-fold split: ids are shuffled with `seed` and cut into k contiguous test
/// blocks whose sizes differ by at most one; each fold trains on the rest.
SplitSpec make_folds(const std::vector<std::string>& video_ids, std::size_t k,
                     std::uint64_t seed);

/// k-fold split over `target_ids` with every id of `extra_ids` added to each
/// fold's training set.
SplitSpec make_augmented_split(const std::vector<std::string>& target_ids,
                               const std::vector<std::string>& extra_ids,
                               std::size_t k, std::uint64_t seed);

/// Single fold: train on `source_ids`, test on `target_ids`.
SplitSpec make_transfer_split(const std::vector<std::string>& target_ids,
                              const std::vector<std::string>& source_ids);

// Split files are JSON. save_split writes {"name": ..., "folds": [...]} with
// each fold as {"train": [...], "test": [...]}; load_split also accepts a
// bare list of folds.
void save_split(const SplitSpec& split, const std::filesystem::path& path);
SplitSpec load_split(const std::filesystem::path& path);

}  // namespace vsumm
