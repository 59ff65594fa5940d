#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vsumm/dataio.hpp"
#include "vsumm/trainer.hpp"

namespace vsumm::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDataError = 3 };

struct SynthConfig {
  std::size_t videos = 5;
  std::size_t clusters = 3;
  std::size_t frames_per_cluster = 10;
  std::size_t dim = 8;
  double noise = 0.05;
};

/// Fully resolved settings for one command.
struct RunConfig {
  std::string command;
  std::vector<std::filesystem::path> data_dirs;
  std::filesystem::path split_file;
  std::string setting = "canonical";
  /// Dataset evaluated under augmented/transfer settings; defaults to the
  /// first --data directory.
  std::string target;
  std::size_t folds = 5;
  TrainConfig train{};
  double budget = 0.15;
  std::filesystem::path out_dir = "out";
  std::filesystem::path checkpoint;
  /// auto, average or max.
  std::string eval_mode = "auto";
  SynthConfig synth{};
  bool quiet = false;
};

/// A directory of videos; its name is the directory's last component.
struct Dataset {
  std::string name;
  std::vector<VideoRecord> videos;
};

std::vector<Dataset> load_datasets(const std::vector<std::filesystem::path>& dirs);

/// The split named by --split, or one generated from --setting.
SplitSpec resolve_split(const RunConfig& cfg, const std::vector<Dataset>& datasets);

/// Trains one policy per fold. Writes <out>/split.json and, per fold k,
/// <out>/fold_k/checkpoint.fvsp and <out>/fold_k/rewards.csv.
void cmd_train(const RunConfig& cfg, std::ostream& log);

/// Writes <out>/summaries/<video_id>.json for every video in --data using
/// the policy in --checkpoint (a checkpoint file).
void cmd_summarize(const RunConfig& cfg, std::ostream& log);

/// Evaluates trained folds. --checkpoint is a training output directory
/// (fold_k/checkpoint.fvsp per fold) or a single checkpoint file used for
/// every fold. Writes <out>/report.csv and <out>/report.json.
void cmd_eval(const RunConfig& cfg, std::ostream& log);

/// Writes the resolved split to <out>/split.json.
void cmd_split(const RunConfig& cfg, std::ostream& log);

/// Writes a synthetic clustered corpus (FVS1 + JSON) into <out>.
void cmd_synth(const RunConfig& cfg, std::ostream& log);

/// Parses arguments and dispatches; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace vsumm::cli
