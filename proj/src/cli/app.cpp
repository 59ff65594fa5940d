#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vsumm/cli.hpp"
#include "vsumm/errors.hpp"

namespace vsumm::cli {
namespace {

struct RawFlags {
  std::string lambda = "20";
  std::string mode = "unsup";
};

void add_data_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--data", cfg.data_dirs, "Dataset directory of .fvs + .json files (repeatable)")
      ->required();
  sub.add_option("--out", cfg.out_dir, "Output directory");
  sub.add_flag("--quiet", cfg.quiet, "Suppress progress output");
}

void add_split_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--split", cfg.split_file, "Split file (JSON list of folds)");
  sub.add_option("--setting", cfg.setting, "Split setting when no --split is given")
      ->check(CLI::IsMember({"canonical", "augmented", "transfer"}));
  sub.add_option("--target", cfg.target, "Evaluated dataset for generated splits");
  sub.add_option("--folds", cfg.folds, "Number of folds for generated splits")
      ->check(CLI::Range(2, 1000));
  sub.add_option("--seed", cfg.train.seed, "Random seed");
}

void add_train_options(CLI::App& sub, RunConfig& cfg, RawFlags& raw) {
  auto& t = cfg.train;
  sub.add_option("--mode", raw.mode, "Training objective")
      ->check(CLI::IsMember({"unsup", "sup"}));
  sub.add_option("--lambda", raw.lambda, "Temporal window for the diversity reward, or 'inf'");
  sub.add_option("--epsilon", t.epsilon, "Target fraction of selected frames");
  sub.add_option("--episodes", t.episodes, "Episodes per video per epoch");
  sub.add_option("--hidden", t.hidden, "LSTM hidden size");
  sub.add_option("--epochs", t.max_epochs, "Maximum number of epochs");
  sub.add_option("--patience", t.patience, "Early-stopping patience in epochs");
  sub.add_option("--lr", t.learning_rate, "Adam learning rate");
  sub.add_option("--beta1", t.pct_weight, "Weight of the selection-percentage penalty");
  sub.add_option("--beta2", t.weight_decay, "Weight of the squared-weight penalty");
  sub.add_option("--mle-weight", t.mle_weight, "Weight of the keyframe log-likelihood (sup mode)");
  sub.add_option("--baseline-decay", t.baseline_decay, "Decay of the moving-average baseline");
}

void finish_train_flags(RunConfig& cfg, const RawFlags& raw) {
  cfg.train.mode = raw.mode == "sup" ? TrainMode::supervised : TrainMode::unsupervised;
  if (raw.lambda == "inf") {
    cfg.train.reward.use_lambda = false;
    return;
  }
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(raw.lambda, &pos);
    if (pos != raw.lambda.size() || v < 0) throw std::invalid_argument(raw.lambda);
    cfg.train.reward.lambda_window = static_cast<std::size_t>(v);
    cfg.train.reward.use_lambda = true;
  } catch (const std::exception&) {
    throw ConfigError("--lambda must be a non-negative integer or 'inf'");
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Unsupervised video summarization with a diversity-representativeness reward"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
  app.require_subcommand(1);

  RunConfig cfg;
  RawFlags raw;

  auto* train = app.add_subcommand("train", "Train one policy per fold");
  add_data_options(*train, cfg);
  add_split_options(*train, cfg);
  add_train_options(*train, cfg, raw);

  auto* summarize = app.add_subcommand("summarize", "Write keyshot summaries for every video");
  add_data_options(*summarize, cfg);
  summarize->add_option("--checkpoint", cfg.checkpoint, "Policy checkpoint file")->required();
  summarize->add_option("--budget", cfg.budget, "Summary length as a fraction of the video");

  auto* eval = app.add_subcommand("eval", "F-score evaluation of trained folds");
  add_data_options(*eval, cfg);
  add_split_options(*eval, cfg);
  eval->add_option("--checkpoint", cfg.checkpoint, "Training output directory or checkpoint file")
      ->required();
  eval->add_option("--budget", cfg.budget, "Summary length as a fraction of the video");
  eval->add_option("--eval-mode", cfg.eval_mode, "Multi-annotator aggregation")
      ->check(CLI::IsMember({"auto", "average", "max"}));

  auto* split = app.add_subcommand("split", "Write a train/test split file");
  add_data_options(*split, cfg);
  add_split_options(*split, cfg);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic clustered corpus");
  synth->add_option("--out", cfg.out_dir, "Output directory");
  synth->add_option("--seed", cfg.train.seed, "Random seed");
  synth->add_option("--videos", cfg.synth.videos, "Number of videos");
  synth->add_option("--clusters", cfg.synth.clusters, "Clusters per video");
  synth->add_option("--frames-per-cluster", cfg.synth.frames_per_cluster, "Steps per cluster");
  synth->add_option("--dim", cfg.synth.dim, "Feature dimension");
  synth->add_option("--noise", cfg.synth.noise, "Gaussian noise level");
  synth->add_flag("--quiet", cfg.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    finish_train_flags(cfg, raw);
    if (train->parsed()) {
      cfg.command = "train";
      cmd_train(cfg, std::cerr);
    } else if (summarize->parsed()) {
      cfg.command = "summarize";
      cmd_summarize(cfg, std::cerr);
    } else if (eval->parsed()) {
      cfg.command = "eval";
      cmd_eval(cfg, std::cerr);
    } else if (split->parsed()) {
      cfg.command = "split";
      cmd_split(cfg, std::cerr);
    } else if (synth->parsed()) {
      cfg.command = "synth";
      cmd_synth(cfg, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace vsumm::cli
