#include "vsumm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vsumm/errors.hpp"

namespace vsumm {

void validate(const TrainConfig& cfg) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!non_negative(cfg.learning_rate)) throw ConfigError("learning rate must be >= 0");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (cfg.patience < 1) throw ConfigError("patience must be >= 1");
  if (cfg.max_epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.hidden < 1) throw ConfigError("hidden size must be >= 1");
  if (!non_negative(cfg.pct_weight) || !non_negative(cfg.weight_decay) ||
      !non_negative(cfg.mle_weight))
    throw ConfigError("regularizer weights must be >= 0");
  if (!(cfg.baseline_decay >= 0.0 && cfg.baseline_decay < 1.0))
    throw ConfigError("baseline decay must lie in [0, 1)");
  if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0) ||
      !(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0) || !positive(cfg.adam_epsilon))
    throw ConfigError("invalid Adam hyperparameters");
}

const std::string& BaselineState::key(const std::string& video_id) const {
  static const std::string shared;
  return scope_ == BaselineScope::global ? shared : video_id;
}

double BaselineState::value(const std::string& video_id) const {
  const auto it = values_.find(key(video_id));
  return it == values_.end() ? 0.0 : it->second;
}

void update_baseline(BaselineState& state, const std::string& video_id, double mean_reward) {
  double& b = state.values_[state.key(video_id)];
  b = state.decay_ * b + (1.0 - state.decay_) * mean_reward;
}

PenaltyValue percentage_penalty(std::span<const double> probs, double epsilon) {
  if (probs.empty()) throw std::invalid_argument("percentage_penalty: empty input");
  const double n = static_cast<double>(probs.size());
  const double mean = std::accumulate(probs.begin(), probs.end(), 0.0) / n;
  const double diff = mean - epsilon;
  PenaltyValue out;
  out.value = diff * diff;
  out.grad.assign(probs.size(), 2.0 * diff / n);
  return out;
}

WeightPenalty weight_penalty(const ParamSet& params) {
  WeightPenalty out;
  out.grads.reserve(params.size());
  for (const auto& t : params.tensors()) {
    std::vector<double> g(t.size(), 0.0);
    if (t.kind == ParamKind::weight) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        out.value += t.values[i] * t.values[i];
        g[i] = 2.0 * t.values[i];
      }
    }
    out.grads.push_back(std::move(g));
  }
  return out;
}

PenaltyValue supervised_loss(const ForwardTrace& trace,
                             std::span<const std::size_t> keyframes) {
  if (keyframes.empty()) throw std::invalid_argument("supervised_loss: no keyframes");
  PenaltyValue out;
  out.grad.assign(trace.length(), 0.0);
  for (auto t : keyframes) {
    if (t >= trace.length()) throw std::invalid_argument("supervised_loss: keyframe out of range");
    const double p = std::clamp(trace.probs[t], kProbFloor, 1.0 - kProbFloor);
    out.value += std::log(p);
    out.grad[t] += 1.0 - trace.probs[t];
  }
  return out;
}

namespace {

std::vector<double> flatten_grads(const ParamSet& set) {
  std::vector<double> flat;
  flat.reserve(set.total_elements());
  for (const auto& t : set.tensors()) flat.insert(flat.end(), t.grad.begin(), t.grad.end());
  return flat;
}

struct SampledEpisodes {
  std::vector<Episode> episodes;
  std::vector<RewardValue> rewards;
};

SampledEpisodes sample_episodes(const ForwardTrace& trace, const RewardTables& tables,
                                const RewardConfig& reward, std::size_t count, Rng& rng) {
  SampledEpisodes out;
  out.episodes.reserve(count);
  out.rewards.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    auto actions = sample_actions(trace, rng);
    out.rewards.push_back(tables.total(actions, reward));
    out.episodes.push_back({std::move(actions), 0.0});
  }
  return out;
}

}  // namespace

std::vector<double> estimate_policy_gradient(const PolicyParams& params,
                                             const Matrix& features,
                                             const RewardTables& tables,
                                             const RewardConfig& reward,
                                             std::size_t episodes, double baseline,
                                             Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("estimate_policy_gradient: episodes < 1");
  PolicyParams work = params;
  work.tensors().zero_grad();
  const ForwardTrace trace = forward(work, features);
  auto sampled = sample_episodes(trace, tables, reward, episodes, rng);
  const double inv_n = 1.0 / static_cast<double>(episodes);
  for (std::size_t n = 0; n < episodes; ++n)
    sampled.episodes[n].weight = (sampled.rewards[n].total - baseline) * inv_n;
  backward_reinforce(work, features, trace, sampled.episodes);
  return flatten_grads(work.tensors());
}

EpochStats train_epoch(PolicyParams& params, std::span<const VideoRecord> videos,
                       const TrainConfig& cfg, BaselineState& baseline, AdamState& adam,
                       Rng& rng) {
  if (videos.empty()) throw std::invalid_argument("train_epoch: no videos");
  std::vector<std::size_t> order(videos.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());

  EpochStats stats;
  std::size_t episode_count = 0;
  const double inv_n = 1.0 / static_cast<double>(cfg.episodes);

  for (auto idx : order) {
    const VideoRecord& video = videos[idx];
    const Matrix& x = video.features;
    const RewardTables tables(x);
    params.tensors().zero_grad();
    const ForwardTrace trace = forward(params, x);

    auto sampled = sample_episodes(trace, tables, cfg.reward, cfg.episodes, rng);
    const double b = baseline.value(video.video_id);
    double reward_sum = 0.0;
    for (std::size_t n = 0; n < cfg.episodes; ++n) {
      const auto& r = sampled.rewards[n];
      // Minimizing -J: each episode's log-prob is weighted by -(R_n - b)/N.
      sampled.episodes[n].weight = -(r.total - b) * inv_n;
      reward_sum += r.total;
      stats.mean_reward += r.total;
      stats.r_div += r.r_div;
      stats.r_rep += r.r_rep;
    }
    episode_count += cfg.episodes;

    RegularizerGrads reg;
    const auto pct = percentage_penalty(trace.probs, cfg.epsilon);
    stats.pct_loss += pct.value;
    reg.dprobs = pct.grad;
    for (auto& g : reg.dprobs) g *= cfg.pct_weight;

    auto wt = weight_penalty(params.tensors());
    stats.wt_loss += wt.value;
    for (auto& g : wt.grads)
      for (auto& v : g) v *= cfg.weight_decay;
    reg.param_grads = std::move(wt.grads);

    if (cfg.mode == TrainMode::supervised) {
      if (video.keyframe_indices.empty())
        throw DataError("video '" + video.video_id + "': keyframe_indices required in supervised mode");
      const auto mle = supervised_loss(trace, video.keyframe_indices);
      stats.mle_loss += mle.value;
      reg.dlogits = mle.grad;
      for (auto& g : reg.dlogits) g *= -cfg.mle_weight;
    }

    backward_reinforce(params, x, trace, sampled.episodes, reg);
    try {
      adam_step(params.tensors(), adam);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " (video '" + video.video_id + "')");
    }
    update_baseline(baseline, video.video_id, reward_sum * inv_n);
  }

  const double nv = static_cast<double>(videos.size());
  const double ne = static_cast<double>(episode_count);
  stats.mean_reward /= ne;
  stats.r_div /= ne;
  stats.r_rep /= ne;
  stats.pct_loss /= nv;
  stats.wt_loss /= nv;
  stats.mle_loss /= nv;
  if (!std::isfinite(stats.mean_reward) || !std::isfinite(stats.pct_loss) ||
      !std::isfinite(stats.wt_loss) || !std::isfinite(stats.mle_loss))
    throw NumericError("train_epoch: non-finite epoch statistics");
  return stats;
}

FitResult fit(PolicyParams params, std::span<const VideoRecord> train_videos,
              const TrainConfig& cfg) {
  validate(cfg);
  if (train_videos.empty()) throw ConfigError("fit: empty training corpus");
  for (const auto& v : train_videos)
    if (v.feature_dim() != params.input_dim())
      throw DataError("video '" + v.video_id + "': feature dimension " +
                      std::to_string(v.feature_dim()) + " does not match policy input " +
                      std::to_string(params.input_dim()));

  AdamState adam(params.tensors(), AdamConfig{cfg.learning_rate, cfg.adam_beta1,
                                              cfg.adam_beta2, cfg.adam_epsilon});
  BaselineState baseline(cfg.baseline_decay, cfg.baseline_scope);
  Rng rng(cfg.seed);

  FitResult result;
  result.params = params;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochStats stats = train_epoch(params, train_videos, cfg, baseline, adam, rng);
    stats.epoch = epoch;
    result.log.push_back(stats);
    if (stats.mean_reward > best) {
      best = stats.mean_reward;
      result.params = params;
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      result.stopped_early = epoch < cfg.max_epochs;
      break;
    }
  }
  result.params.tensors().zero_grad();
  return result;
}

void write_rewards_csv(std::span<const EpochStats> log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "epoch,mean_reward,r_div,r_rep,pct_loss,wt_loss\n";
  out << std::setprecision(17);
  for (const auto& s : log)
    out << s.epoch << ',' << s.mean_reward << ',' << s.r_div << ',' << s.r_rep << ','
        << s.pct_loss << ',' << s.wt_loss << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace vsumm
