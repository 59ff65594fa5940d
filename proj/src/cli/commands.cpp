#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "vsumm/cli.hpp"
#include "vsumm/errors.hpp"
#include "vsumm/evaluation.hpp"
#include "vsumm/segmentation.hpp"
#include "vsumm/summarizer.hpp"
#include "vsumm/synthgen.hpp"

namespace vsumm::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> ids_of(const Dataset& d) {
  std::vector<std::string> ids;
  for (const auto& v : d.videos) ids.push_back(v.video_id);
  return ids;
}

const Dataset& find_target(const RunConfig& cfg, const std::vector<Dataset>& datasets) {
  if (datasets.empty()) throw ConfigError("no dataset given (use --data)");
  if (cfg.target.empty()) return datasets.front();
  for (const auto& d : datasets)
    if (d.name == cfg.target) return d;
  throw ConfigError("target dataset '" + cfg.target + "' is not among --data directories");
}

// Index of every video across datasets, with its dataset name.
struct Catalog {
  std::map<std::string, const VideoRecord*> videos;
  std::map<std::string, std::string> dataset_of;

  explicit Catalog(const std::vector<Dataset>& datasets) {
    for (const auto& d : datasets) {
      for (const auto& v : d.videos) {
        if (!videos.emplace(v.video_id, &v).second)
          throw DataError("video id '" + v.video_id + "' appears in more than one dataset");
        dataset_of[v.video_id] = d.name;
      }
    }
  }

  std::vector<VideoRecord> collect(const std::vector<std::string>& ids) const {
    std::vector<VideoRecord> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
      const auto it = videos.find(id);
      if (it == videos.end()) throw DataError("split refers to unknown video '" + id + "'");
      out.push_back(*it->second);
    }
    return out;
  }
};

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

fs::path fold_dir(const fs::path& out, std::size_t fold) {
  return out / ("fold_" + std::to_string(fold));
}

Aggregation resolve_mode(const RunConfig& cfg, const std::string& dataset) {
  if (cfg.eval_mode == "average") return Aggregation::average;
  if (cfg.eval_mode == "max") return Aggregation::max;
  if (cfg.eval_mode == "auto") return default_aggregation(dataset);
  throw ConfigError("unknown evaluation mode '" + cfg.eval_mode + "'");
}

PolicyParams load_policy(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw DataError("checkpoint not found: " + path.string());
  return PolicyParams::from_tensors(load_checkpoint(path));
}

}  // namespace

std::vector<Dataset> load_datasets(const std::vector<fs::path>& dirs) {
  std::vector<Dataset> out;
  for (const auto& dir : dirs) {
    Dataset d;
    d.name = fs::path(dir).lexically_normal().filename().string();
    if (d.name.empty()) d.name = fs::path(dir).lexically_normal().parent_path().filename().string();
    d.videos = load_dataset(dir);
    if (d.videos.empty()) throw DataError("no .fvs files in " + dir.string());
    out.push_back(std::move(d));
  }
  return out;
}

SplitSpec resolve_split(const RunConfig& cfg, const std::vector<Dataset>& datasets) {
  if (!cfg.split_file.empty()) return load_split(cfg.split_file);
  const Dataset& target = find_target(cfg, datasets);
  std::vector<std::string> others;
  for (const auto& d : datasets)
    if (&d != &target)
      for (const auto& v : d.videos) others.push_back(v.video_id);

  if (cfg.setting == "canonical") return make_folds(ids_of(target), cfg.folds, cfg.train.seed);
  if (cfg.setting == "augmented")
    return make_augmented_split(ids_of(target), others, cfg.folds, cfg.train.seed);
  if (cfg.setting == "transfer") return make_transfer_split(ids_of(target), others);
  throw ConfigError("unknown setting '" + cfg.setting + "'");
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  validate(cfg.train);
  const auto datasets = load_datasets(cfg.data_dirs);
  const Catalog catalog(datasets);
  const SplitSpec split = resolve_split(cfg, datasets);
  ensure_dir(cfg.out_dir);
  save_split(split, cfg.out_dir / "split.json");

  for (std::size_t f = 0; f < split.folds.size(); ++f) {
    const auto train = catalog.collect(split.folds[f].train_ids);
    if (train.empty()) throw ConfigError("fold " + std::to_string(f) + " has no training videos");
    TrainConfig tc = cfg.train;
    tc.seed = cfg.train.seed + f;
    auto init = PolicyParams::initialize(train.front().feature_dim(), tc.hidden, tc.seed);
    const FitResult result = fit(std::move(init), train, tc);

    const fs::path dir = ensure_dir(fold_dir(cfg.out_dir, f));
    save_checkpoint(result.params.tensors(), dir / "checkpoint.fvsp");
    write_rewards_csv(result.log, dir / "rewards.csv");
    if (!cfg.quiet) {
      log << "fold " << f << ": " << result.log.size() << " epochs, best epoch "
          << result.best_epoch << ", reward " << std::setprecision(4)
          << result.log[result.best_epoch - 1].mean_reward
          << (result.stopped_early ? " (early stop)" : "") << '\n';
    }
  }
}

void cmd_summarize(const RunConfig& cfg, std::ostream& log) {
  if (cfg.checkpoint.empty()) throw ConfigError("summarize needs --checkpoint");
  if (!(cfg.budget > 0.0 && cfg.budget <= 1.0)) throw ConfigError("--budget must lie in (0, 1]");
  const PolicyParams params = load_policy(cfg.checkpoint);
  const auto datasets = load_datasets(cfg.data_dirs);
  const fs::path dir = ensure_dir(cfg.out_dir / "summaries");

  for (const auto& d : datasets) {
    for (const auto& video : d.videos) {
      const ForwardTrace trace = forward(params, video.features);
      const auto shots = shots_for(video);
      const SummaryMask summary = generate_summary(video, trace.probs, shots, cfg.budget);

      json selected = json::array();
      for (auto s : summary.selected_shots) selected.push_back({shots[s].start, shots[s].end});
      json rle = json::array();
      for (const auto& run : mask_runs(summary.mask)) rle.push_back({run.start, run.length()});
      json j{{"video_id", video.video_id},
             {"n_frames_original", video.n_frames_original},
             {"budget_fraction", cfg.budget},
             {"budget_frames", summary.budget},
             {"summary_length", summary.total_length},
             {"selected_shots", std::move(selected)},
             {"mask_rle", std::move(rle)},
             {"step_scores", trace.probs},
             {"frame_scores", upsample_scores(trace.probs, video.picks, video.n_frames_original)}};
      std::ofstream out(dir / (video.video_id + ".json"), std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write summary for " + video.video_id);
      out << j.dump() << '\n';
      if (!cfg.quiet)
        log << video.video_id << ": " << summary.selected_shots.size() << " shots, "
            << summary.total_length << "/" << summary.budget << " frames\n";
    }
  }
}

void cmd_eval(const RunConfig& cfg, std::ostream& log) {
  if (cfg.checkpoint.empty()) throw ConfigError("eval needs --checkpoint");
  if (!(cfg.budget > 0.0 && cfg.budget <= 1.0)) throw ConfigError("--budget must lie in (0, 1]");
  const auto datasets = load_datasets(cfg.data_dirs);
  const Catalog catalog(datasets);

  const bool run_dir = fs::is_directory(cfg.checkpoint);
  RunConfig effective = cfg;
  if (run_dir && cfg.split_file.empty() && fs::exists(cfg.checkpoint / "split.json"))
    effective.split_file = cfg.checkpoint / "split.json";
  const SplitSpec split = resolve_split(effective, datasets);

  std::vector<EvalResult> folds;
  std::vector<std::string> fold_modes;
  for (std::size_t f = 0; f < split.folds.size(); ++f) {
    const fs::path ckpt = run_dir ? fold_dir(cfg.checkpoint, f) / "checkpoint.fvsp" : cfg.checkpoint;
    const PolicyParams params = load_policy(ckpt);
    const auto test = catalog.collect(split.folds[f].test_ids);
    const Aggregation mode = resolve_mode(cfg, catalog.dataset_of.at(test.front().video_id));
    folds.push_back(evaluate_fold(params, test, mode, cfg.budget));
    fold_modes.emplace_back(aggregation_name(mode));
  }

  ensure_dir(cfg.out_dir);
  {
    std::ofstream csv(cfg.out_dir / "report.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write report.csv");
    csv << "fold,video_id,precision,recall,f_score\n" << std::setprecision(17);
    for (std::size_t f = 0; f < folds.size(); ++f)
      for (const auto& v : folds[f].videos)
        csv << f << ',' << v.video_id << ',' << v.precision << ',' << v.recall << ','
            << v.f_score << '\n';
  }
  const double overall = cross_validation_score(folds);
  json jfolds = json::array();
  for (std::size_t f = 0; f < folds.size(); ++f)
    jfolds.push_back({{"fold", f},
                      {"mean_f", folds[f].mean_f},
                      {"videos", folds[f].videos.size()},
                      {"aggregation", fold_modes[f]}});
  json report{{"split", split.name},
              {"budget_fraction", cfg.budget},
              {"eval_mode", cfg.eval_mode},
              {"folds", std::move(jfolds)},
              {"mean_f", overall}};
  std::ofstream jout(cfg.out_dir / "report.json", std::ios::trunc);
  if (!jout) throw std::runtime_error("cannot write report.json");
  jout << report.dump(2) << '\n';
  if (!cfg.quiet) {
    for (std::size_t f = 0; f < folds.size(); ++f)
      log << "fold " << f << " (" << fold_modes[f] << "): F = " << std::fixed
          << std::setprecision(1) << folds[f].mean_f << '\n';
    log << "mean F = " << std::fixed << std::setprecision(1) << overall << '\n';
  }
}

void cmd_split(const RunConfig& cfg, std::ostream& log) {
  const auto datasets = load_datasets(cfg.data_dirs);
  const SplitSpec split = resolve_split(cfg, datasets);
  ensure_dir(cfg.out_dir);
  save_split(split, cfg.out_dir / "split.json");
  if (!cfg.quiet)
    log << split.name << ": " << split.folds.size() << " folds -> "
        << (cfg.out_dir / "split.json").string() << '\n';
}

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  const auto& s = cfg.synth;
  const auto corpus = make_clustered_corpus(s.videos, s.clusters, s.frames_per_cluster, s.dim,
                                            s.noise, cfg.train.seed);
  ensure_dir(cfg.out_dir);
  for (const auto& v : corpus) write_video(v, cfg.out_dir / (v.video_id + ".fvs"));
  if (!cfg.quiet) log << "wrote " << corpus.size() << " videos to " << cfg.out_dir.string() << '\n';
}

}  // namespace vsumm::cli
