#include "vsumm/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "binary_io.hpp"
#include "vsumm/errors.hpp"
#include "vsumm/rng.hpp"

namespace vsumm {

using nlohmann::json;

namespace {

constexpr char kFeatureMagic[4] = {'F', 'V', 'S', '1'};
constexpr std::uint32_t kFeatureVersion = 1;

[[noreturn]] void fail(const std::string& id, const std::string& field,
                       const std::string& what) {
  throw DataError("video '" + id + "': " + field + ": " + what);
}

}  // namespace

void validate(const VideoRecord& r) {
  const std::string& id = r.video_id;
  if (id.empty()) fail(id, "video_id", "empty");
  const std::size_t t_steps = r.features.rows();
  if (t_steps < 2) fail(id, "features", "need at least 2 frames, got " + std::to_string(t_steps));
  if (r.features.cols() < 1) fail(id, "features", "feature dimension is 0");
  for (std::size_t t = 0; t < t_steps; ++t)
    for (double v : r.features.row(t))
      if (!std::isfinite(v)) fail(id, "features", "non-finite value in row " + std::to_string(t));

  if (r.n_frames_original == 0) fail(id, "n_frames_original", "must be positive");
  if (r.picks.size() != t_steps)
    fail(id, "picks", "expected " + std::to_string(t_steps) + " entries, got " +
                          std::to_string(r.picks.size()));
  for (std::size_t t = 0; t < r.picks.size(); ++t) {
    if (r.picks[t] >= r.n_frames_original) fail(id, "picks", "index out of range");
    if (t > 0 && r.picks[t] <= r.picks[t - 1]) fail(id, "picks", "picks not increasing");
  }

  if (!r.change_points.empty()) {
    std::size_t expected_start = 0;
    for (const auto& seg : r.change_points) {
      if (seg.start != expected_start)
        fail(id, "change_points", "segments must be sorted, disjoint and contiguous");
      if (seg.end < seg.start) fail(id, "change_points", "segment end before start");
      expected_start = seg.end + 1;
    }
    if (expected_start != r.n_frames_original)
      fail(id, "change_points", "segments do not cover all original frames");
  }

  for (std::size_t u = 0; u < r.user_summaries.size(); ++u) {
    const auto& row = r.user_summaries[u];
    if (row.size() != r.n_frames_original)
      fail(id, "user_summaries", "row " + std::to_string(u) + " has wrong length");
    for (auto v : row)
      if (v > 1) fail(id, "user_summaries", "entries must be 0 or 1");
  }

  for (auto k : r.keyframe_indices)
    if (k >= t_steps) fail(id, "keyframe_indices", "index out of range");

  if (!r.gt_importance.empty()) {
    if (r.gt_importance.size() != t_steps)
      fail(id, "gt_importance", "expected one score per subsampled frame");
    for (double v : r.gt_importance)
      if (!std::isfinite(v)) fail(id, "gt_importance", "non-finite value");
  }
  if (!std::isfinite(r.fps) || r.fps < 0.0) fail(id, "fps", "must be finite and non-negative");
}

std::filesystem::path sidecar_path(const std::filesystem::path& feature_path) {
  auto p = feature_path;
  p.replace_extension(".json");
  return p;
}

namespace {

json to_json(const VideoRecord& r) {
  json j;
  j["video_id"] = r.video_id;
  j["n_frames_original"] = r.n_frames_original;
  j["picks"] = r.picks;
  if (r.fps > 0.0) j["fps"] = r.fps;
  if (!r.change_points.empty()) {
    json cps = json::array();
    for (const auto& s : r.change_points) cps.push_back({s.start, s.end});
    j["change_points"] = std::move(cps);
  }
  if (!r.user_summaries.empty()) j["user_summaries"] = r.user_summaries;
  if (!r.keyframe_indices.empty()) j["keyframe_indices"] = r.keyframe_indices;
  if (!r.gt_importance.empty()) j["gt_importance"] = r.gt_importance;
  return j;
}

template <typename T>
T field(const json& j, const char* name, const std::string& id) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    fail(id, name, e.what());
  }
}

void from_json_sidecar(const json& j, VideoRecord& r) {
  const std::string id = j.contains("video_id") && j["video_id"].is_string()
                             ? j["video_id"].get<std::string>()
                             : std::string("?");
  r.video_id = field<std::string>(j, "video_id", id);
  r.n_frames_original = field<std::size_t>(j, "n_frames_original", id);
  r.picks = field<std::vector<std::size_t>>(j, "picks", id);
  if (j.contains("fps")) r.fps = field<double>(j, "fps", id);
  if (j.contains("change_points")) {
    const auto raw = field<std::vector<std::vector<std::size_t>>>(j, "change_points", id);
    r.change_points.clear();
    for (const auto& seg : raw) {
      if (seg.size() != 2) fail(id, "change_points", "each entry must be [start, end]");
      r.change_points.push_back({seg[0], seg[1]});
    }
  }
  if (j.contains("user_summaries")) {
    const auto raw = field<std::vector<std::vector<int>>>(j, "user_summaries", id);
    r.user_summaries.clear();
    for (const auto& row : raw) {
      std::vector<std::uint8_t> bits(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] != 0 && row[i] != 1) fail(id, "user_summaries", "entries must be 0 or 1");
        bits[i] = static_cast<std::uint8_t>(row[i]);
      }
      r.user_summaries.push_back(std::move(bits));
    }
  }
  if (j.contains("keyframe_indices"))
    r.keyframe_indices = field<std::vector<std::size_t>>(j, "keyframe_indices", id);
  if (j.contains("gt_importance"))
    r.gt_importance = field<std::vector<double>>(j, "gt_importance", id);
}

}  // namespace

VideoRecord load_video(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file: " + path.string());
  const std::string where = "feature file " + path.string();

  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kFeatureMagic))
    throw DataError(where + ": magic: expected FVS1");
  std::uint32_t version = 0, rows = 0, cols = 0;
  if (!detail::get_u32(in, version)) throw DataError(where + ": version: truncated header");
  if (version != kFeatureVersion)
    throw DataError(where + ": version: unsupported version " + std::to_string(version));
  if (!detail::get_u32(in, rows) || !detail::get_u32(in, cols))
    throw DataError(where + ": header: truncated shape");

  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  std::vector<double> values;
  values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    float v;
    if (!detail::get_f32(in, v))
      throw DataError(where + ": payload: shape mismatch, header says " +
                      std::to_string(rows) + "x" + std::to_string(cols) +
                      " but payload is shorter");
    values.push_back(static_cast<double>(v));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw DataError(where + ": payload: shape mismatch, trailing bytes after " +
                    std::to_string(rows) + "x" + std::to_string(cols) + " values");

  const auto side = sidecar_path(path);
  std::ifstream sin(side);
  if (!sin) throw DataError("cannot open sidecar: " + side.string());
  json j;
  try {
    sin >> j;
  } catch (const json::exception& e) {
    throw DataError("sidecar " + side.string() + ": " + e.what());
  }

  VideoRecord r;
  r.features = Matrix(rows, cols, std::move(values));
  from_json_sidecar(j, r);
  validate(r);
  return r;
}

void write_video(const VideoRecord& record, const std::filesystem::path& path) {
  validate(record);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(kFeatureMagic, 4);
    detail::put_u32(out, kFeatureVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(record.features.rows()));
    detail::put_u32(out, static_cast<std::uint32_t>(record.features.cols()));
    for (double v : record.features.data()) detail::put_f32(out, static_cast<float>(v));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  const auto side = sidecar_path(path);
  std::ofstream sout(side, std::ios::trunc);
  if (!sout) throw std::runtime_error("cannot open for writing: " + side.string());
  sout << to_json(record).dump() << '\n';
  if (!sout) throw std::runtime_error("write failed: " + side.string());
}

std::vector<VideoRecord> load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw DataError("dataset directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".fvs")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<VideoRecord> videos;
  videos.reserve(files.size());
  for (const auto& f : files) videos.push_back(load_video(f));
  std::sort(videos.begin(), videos.end(),
            [](const VideoRecord& a, const VideoRecord& b) { return a.video_id < b.video_id; });
  for (std::size_t i = 1; i < videos.size(); ++i)
    if (videos[i].video_id == videos[i - 1].video_id)
      throw DataError("duplicate video id in " + dir.string() + ": " + videos[i].video_id);
  return videos;
}

void validate(const SplitSpec& split) {
  if (split.folds.empty()) throw ConfigError("split '" + split.name + "' has no folds");
  for (std::size_t f = 0; f < split.folds.size(); ++f) {
    const auto& fold = split.folds[f];
    if (fold.test_ids.empty())
      throw ConfigError("split '" + split.name + "' fold " + std::to_string(f) + " has no test videos");
    const std::set<std::string> test(fold.test_ids.begin(), fold.test_ids.end());
    for (const auto& id : fold.train_ids)
      if (test.count(id))
        throw ConfigError("split '" + split.name + "' fold " + std::to_string(f) +
                          ": video '" + id + "' is in both train and test");
  }
}

SplitSpec make_folds(const std::vector<std::string>& video_ids, std::size_t k,
                     std::uint64_t seed) {
  if (k < 2) throw ConfigError("need at least 2 folds");
  if (video_ids.size() < k)
    throw ConfigError("too few videos (" + std::to_string(video_ids.size()) +
                      ") for " + std::to_string(k) + " folds");
  std::vector<std::string> order = video_ids;
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  SplitSpec split;
  split.name = "canonical";
  const std::size_t n = order.size();
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t lo = f * n / k;
    const std::size_t hi = (f + 1) * n / k;
    Fold fold;
    fold.test_ids.assign(order.begin() + static_cast<std::ptrdiff_t>(lo),
                         order.begin() + static_cast<std::ptrdiff_t>(hi));
    const std::set<std::string> test(fold.test_ids.begin(), fold.test_ids.end());
    for (const auto& id : video_ids)
      if (!test.count(id)) fold.train_ids.push_back(id);
    split.folds.push_back(std::move(fold));
  }
  return split;
}

SplitSpec make_augmented_split(const std::vector<std::string>& target_ids,
                               const std::vector<std::string>& extra_ids,
                               std::size_t k, std::uint64_t seed) {
  SplitSpec split = make_folds(target_ids, k, seed);
  split.name = "augmented";
  for (auto& fold : split.folds)
    fold.train_ids.insert(fold.train_ids.end(), extra_ids.begin(), extra_ids.end());
  validate(split);
  return split;
}

SplitSpec make_transfer_split(const std::vector<std::string>& target_ids,
                              const std::vector<std::string>& source_ids) {
  if (source_ids.empty()) throw ConfigError("transfer split needs source videos");
  SplitSpec split;
  split.name = "transfer";
  split.folds.push_back(Fold{source_ids, target_ids});
  validate(split);
  return split;
}

void save_split(const SplitSpec& split, const std::filesystem::path& path) {
  json folds = json::array();
  for (const auto& f : split.folds) folds.push_back({{"train", f.train_ids}, {"test", f.test_ids}});
  json j{{"name", split.name}, {"folds", std::move(folds)}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

SplitSpec load_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open split file: " + path.string());
  SplitSpec split;
  try {
    json j;
    in >> j;
    const json* folds = &j;
    if (j.is_object()) {
      split.name = j.value("name", std::string("custom"));
      folds = &j.at("folds");
    }
    for (const auto& f : *folds) {
      Fold fold;
      fold.train_ids = f.at("train").get<std::vector<std::string>>();
      fold.test_ids = f.at("test").get<std::vector<std::string>>();
      split.folds.push_back(std::move(fold));
    }
  } catch (const json::exception& e) {
    throw ConfigError("split file " + path.string() + ": " + e.what());
  }
  validate(split);
  return split;
}

}  // namespace vsumm
