#include <doctest.h>

#include <fstream>
#include <set>

#include <json.hpp>

#include "oracles.hpp"
#include "vsumm/dataio.hpp"
#include "vsumm/errors.hpp"

using namespace vsumm;
namespace fs = std::filesystem;

namespace {

VideoRecord small_record() {
  VideoRecord r;
  r.video_id = "v0";
  r.features = Matrix(4, 2, std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7});
  r.n_frames_original = 40;
  r.picks = {0, 10, 20, 30};
  r.change_points = {{0, 19}, {20, 39}};
  return r;
}

VideoRecord random_record(Rng& rng, const std::string& id) {
  VideoRecord r;
  r.video_id = id;
  const std::size_t steps = 2 + rng.below(20);
  const std::size_t dim = 1 + rng.below(9);
  r.features = Matrix(steps, dim);
  for (auto& v : r.features.data()) v = static_cast<float>(rng.uniform(-10, 10));
  std::size_t frame = rng.below(3);
  for (std::size_t t = 0; t < steps; ++t) {
    r.picks.push_back(frame);
    frame += 1 + rng.below(20);
  }
  r.n_frames_original = frame;
  std::size_t start = 0;
  while (start < r.n_frames_original) {
    const std::size_t end = std::min(r.n_frames_original - 1, start + rng.below(30));
    r.change_points.push_back({start, end});
    start = end + 1;
  }
  if (rng.bernoulli(0.7)) {
    const std::size_t users = 1 + rng.below(4);
    for (std::size_t u = 0; u < users; ++u) {
      std::vector<std::uint8_t> row(r.n_frames_original);
      for (auto& b : row) b = rng.bernoulli(0.3);
      r.user_summaries.push_back(std::move(row));
    }
  }
  if (rng.bernoulli(0.5))
    for (std::size_t i = 0; i < 3; ++i) r.keyframe_indices.push_back(rng.below(steps));
  if (rng.bernoulli(0.5))
    for (std::size_t t = 0; t < steps; ++t) r.gt_importance.push_back(rng.uniform01());
  if (rng.bernoulli(0.5)) r.fps = 30.0;
  return r;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_raw(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string header(std::uint32_t version, std::uint32_t rows, std::uint32_t cols) {
  std::string s = "FVS1";
  for (std::uint32_t v : {version, rows, cols})
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  return s;
}

}  // namespace

TEST_CASE("load_video decodes a 4x2 feature file") {
  oracle::TempDir dir("load");
  const auto r = small_record();
  write_video(r, dir.path / "v0.fvs");
  const auto back = load_video(dir.path / "v0.fvs");
  CHECK(back.features.rows() == 4);
  CHECK(back.features.cols() == 2);
  CHECK(back.features(3, 1) == 7.0);
  CHECK(back == r);
}

TEST_CASE("write_video payload is little-endian float32, row-major") {
  oracle::TempDir dir("payload");
  VideoRecord r;
  r.video_id = "tiny";
  r.features = Matrix(2, 1, std::vector<double>{0.0, 1.0});
  r.n_frames_original = 2;
  r.picks = {0, 1};
  write_video(r, dir.path / "tiny.fvs");
  const std::string bytes = read_bytes(dir.path / "tiny.fvs");
  const std::string expected = header(1, 2, 1) + std::string("\x00\x00\x00\x00", 4) +
                               std::string("\x00\x00\x80\x3f", 4);
  CHECK(bytes == expected);
}

TEST_CASE("roundtrip identity over random records") {
  oracle::TempDir dir("roundtrip");
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    const auto r = random_record(rng, "r" + std::to_string(i));
    const auto path = dir.path / (r.video_id + ".fvs");
    write_video(r, path);
    const auto back = load_video(path);
    CHECK(back == r);
    const std::string before = read_bytes(path);
    write_video(back, path);
    CHECK(read_bytes(path) == before);
  }
}

TEST_CASE("invariant violations are reported with the field name") {
  oracle::TempDir dir("invalid");
  auto r = small_record();
  r.picks = {5, 3, 20, 30};
  try {
    write_video(r, dir.path / "v0.fvs");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("picks not increasing") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(dir.path / "v0.fvs"));

  auto gap = small_record();
  gap.change_points = {{0, 10}, {12, 39}};
  CHECK_THROWS_WITH_AS(validate(gap), doctest::Contains("change_points"), DataError);

  auto short_cover = small_record();
  short_cover.change_points = {{0, 38}};
  CHECK_THROWS_AS(validate(short_cover), DataError);

  auto key = small_record();
  key.keyframe_indices = {4};
  CHECK_THROWS_WITH_AS(validate(key), doctest::Contains("keyframe_indices"), DataError);

  auto users = small_record();
  users.user_summaries = {std::vector<std::uint8_t>(40, 0)};
  users.user_summaries[0][3] = 2;
  CHECK_THROWS_WITH_AS(validate(users), doctest::Contains("user_summaries"), DataError);

  auto nan = small_record();
  nan.features(1, 1) = std::nan("");
  CHECK_THROWS_WITH_AS(validate(nan), doctest::Contains("features"), DataError);

  auto one = small_record();
  one.features = Matrix(1, 2);
  one.picks = {0};
  CHECK_THROWS_AS(validate(one), DataError);
}

TEST_CASE("malformed feature files are rejected") {
  oracle::TempDir dir("malformed");
  write_video(small_record(), dir.path / "v0.fvs");
  const std::string good = read_bytes(dir.path / "v0.fvs");

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  write_raw(dir.path / "v0.fvs", bad_magic);
  CHECK_THROWS_WITH_AS(load_video(dir.path / "v0.fvs"), doctest::Contains("magic"), DataError);

  write_raw(dir.path / "v0.fvs", header(2, 4, 2) + good.substr(16));
  CHECK_THROWS_WITH_AS(load_video(dir.path / "v0.fvs"), doctest::Contains("version"), DataError);

  write_raw(dir.path / "v0.fvs", good.substr(0, good.size() - 4));
  CHECK_THROWS_WITH_AS(load_video(dir.path / "v0.fvs"), doctest::Contains("shape mismatch"), DataError);

  write_raw(dir.path / "v0.fvs", good + "xxxx");
  CHECK_THROWS_WITH_AS(load_video(dir.path / "v0.fvs"), doctest::Contains("shape mismatch"), DataError);

  // Header and sidecar disagree on T.
  write_raw(dir.path / "v0.fvs", header(1, 2, 4) + good.substr(16));
  CHECK_THROWS_WITH_AS(load_video(dir.path / "v0.fvs"), doctest::Contains("picks"), DataError);

  write_raw(dir.path / "v0.fvs", good);
  fs::remove(dir.path / "v0.json");
  CHECK_THROWS_WITH_AS(load_video(dir.path / "v0.fvs"), doctest::Contains("sidecar"), DataError);
}

TEST_CASE("load_dataset reads every feature file sorted by id") {
  oracle::TempDir dir("dataset");
  for (const char* id : {"b", "a", "c"}) {
    auto r = small_record();
    r.video_id = id;
    write_video(r, dir.path / (std::string(id) + ".fvs"));
  }
  const auto videos = load_dataset(dir.path);
  REQUIRE(videos.size() == 3);
  CHECK(videos[0].video_id == "a");
  CHECK(videos[2].video_id == "c");
}

TEST_CASE("make_folds partitions ids into seeded test blocks") {
  std::vector<std::string> ids;
  for (int i = 0; i < 25; ++i) ids.push_back("video_" + std::to_string(i));
  const auto split = make_folds(ids, 5, 1);
  REQUIRE(split.folds.size() == 5);
  std::multiset<std::string> seen;
  for (const auto& f : split.folds) {
    CHECK(f.test_ids.size() == 5);
    CHECK(f.train_ids.size() == 20);
    const std::set<std::string> test(f.test_ids.begin(), f.test_ids.end());
    for (const auto& id : f.train_ids) CHECK(test.count(id) == 0);
    seen.insert(f.test_ids.begin(), f.test_ids.end());
  }
  CHECK(seen == std::multiset<std::string>(ids.begin(), ids.end()));

  const std::vector<std::string> ten(ids.begin(), ids.begin() + 10);
  CHECK(make_folds(ten, 5, 99) == make_folds(ten, 5, 99));
  CHECK_FALSE(make_folds(ids, 5, 1) == make_folds(ids, 5, 2));

  CHECK_THROWS_AS(make_folds({"a", "b"}, 5, 0), ConfigError);
  CHECK_THROWS_AS(make_folds(ids, 1, 0), ConfigError);
}

TEST_CASE("augmented and transfer splits") {
  const std::vector<std::string> target{"t0", "t1", "t2", "t3", "t4"};
  const std::vector<std::string> extra{"x0", "x1"};
  const auto aug = make_augmented_split(target, extra, 5, 3);
  CHECK(aug.name == "augmented");
  for (const auto& f : aug.folds) {
    CHECK(f.test_ids.size() == 1);
    CHECK(f.train_ids.size() == 6);
    CHECK(std::count(f.train_ids.begin(), f.train_ids.end(), "x1") == 1);
  }
  const auto tr = make_transfer_split(target, extra);
  REQUIRE(tr.folds.size() == 1);
  CHECK(tr.folds[0].train_ids == extra);
  CHECK(tr.folds[0].test_ids == target);
}

TEST_CASE("split files roundtrip and bare fold lists are accepted") {
  oracle::TempDir dir("split");
  const auto split = make_folds({"a", "b", "c", "d"}, 2, 7);
  save_split(split, dir.path / "s.json");
  CHECK(load_split(dir.path / "s.json") == split);

  {
    std::ofstream out(dir.path / "bare.json");
    out << R"([{"train": ["a", "b"], "test": ["c"]}])";
  }
  const auto bare = load_split(dir.path / "bare.json");
  CHECK(bare.name == "custom");
  CHECK(bare.folds.size() == 1);

  {
    std::ofstream out(dir.path / "overlap.json");
    out << R"([{"train": ["a", "c"], "test": ["c"]}])";
  }
  CHECK_THROWS_AS(load_split(dir.path / "overlap.json"), ConfigError);
}
