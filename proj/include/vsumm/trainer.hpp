#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vsumm/dataio.hpp"
#include "vsumm/optim.hpp"
#include "vsumm/policy_net.hpp"
#include "vsumm/rewards.hpp"
#include "vsumm/rng.hpp"

namespace vsumm {

enum class TrainMode { unsupervised, supervised };
enum class BaselineScope { per_video, global };

struct TrainConfig {
  double learning_rate = 1e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Weight on the selection-percentage penalty.
  double pct_weight = 0.01;
  /// Weight on the squared-weight penalty.
  double weight_decay = 1e-5;
  /// Target fraction of selected frames.
  double epsilon = 0.5;
  std::size_t episodes = 5;
  RewardConfig reward{};
  std::size_t hidden = 256;
  std::size_t max_epochs = 60;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::unsupervised;
  /// Weight on the keyframe log-likelihood in supervised mode.
  double mle_weight = 1.0;
  double baseline_decay = 0.9;
  BaselineScope baseline_scope = BaselineScope::per_video;
};

/// Throws ConfigError on out-of-range values.
void validate(const TrainConfig& cfg);

/// Moving-average reward baseline, one value per video (or one shared value
/// under BaselineScope::global). Unseen keys start at 0.
class BaselineState {
 public:
  explicit BaselineState(double decay = 0.9, BaselineScope scope = BaselineScope::per_video)
      : decay_(decay), scope_(scope) {}

  double value(const std::string& video_id) const;
  double decay() const noexcept { return decay_; }
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  friend void update_baseline(BaselineState& state, const std::string& video_id,
                              double mean_reward);
  const std::string& key(const std::string& video_id) const;

  double decay_;
  BaselineScope scope_;
  std::map<std::string, double> values_;
};

/// b <- decay * b + (1 - decay) * mean_reward.
void update_baseline(BaselineState& state, const std::string& video_id, double mean_reward);

struct PenaltyValue {
  double value = 0.0;
  std::vector<double> grad;
};

/// ((1/T) sum_t p_t - epsilon)^2 and its gradient with respect to p.
PenaltyValue percentage_penalty(std::span<const double> probs, double epsilon);

struct WeightPenalty {
  double value = 0.0;
  /// One vector per tensor; zero for bias tensors.
  std::vector<std::vector<double>> grads;
};

/// Sum of squared entries of every weight tensor (biases excluded).
WeightPenalty weight_penalty(const ParamSet& params);

/// sum_{t in keyframes} log p_t (clamped) and its gradient with respect to
/// the logits, 1 - p_t on keyframes. Throws std::invalid_argument on an empty
/// or out-of-range keyframe set.
PenaltyValue supervised_loss(const ForwardTrace& trace,
                             std::span<const std::size_t> keyframes);

struct EpochStats {
  std::size_t epoch = 0;
  double mean_reward = 0.0;
  double r_div = 0.0;
  double r_rep = 0.0;
  double pct_loss = 0.0;
  double wt_loss = 0.0;
  double mle_loss = 0.0;
};

/// One pass over `videos` in an rng-shuffled order. Per video: one forward
/// pass, `episodes` action samples from that trace, episode weights
/// -(R_n - b)/N, percentage/weight penalties (and -mle_weight * L_MLE in
/// supervised mode), one Adam step, then a baseline update with the mean
/// episode reward.
EpochStats train_epoch(PolicyParams& params, std::span<const VideoRecord> videos,
                       const TrainConfig& cfg, BaselineState& baseline, AdamState& adam,
                       Rng& rng);

/// Monte-Carlo estimate (1/N) sum_n (R_n - b) grad log pi(a_n), flattened in
/// tensor order. b = 0 gives the plain REINFORCE estimate.
std::vector<double> estimate_policy_gradient(const PolicyParams& params,
                                             const Matrix& features,
                                             const RewardTables& tables,
                                             const RewardConfig& reward,
                                             std::size_t episodes, double baseline,
                                             Rng& rng);

struct FitResult {
  PolicyParams params;  // parameters after the best-reward epoch
  std::vector<EpochStats> log;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
};

/// Runs up to max_epochs epochs, stopping once the best mean reward has not
/// improved for `patience` consecutive epochs.
FitResult fit(PolicyParams params, std::span<const VideoRecord> train_videos,
              const TrainConfig& cfg);

/// Writes epoch,mean_reward,r_div,r_rep,pct_loss,wt_loss.
void write_rewards_csv(std::span<const EpochStats> log, const std::filesystem::path& path);

}  // namespace vsumm
