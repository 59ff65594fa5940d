#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vsumm/matrix.hpp"
#include "vsumm/params.hpp"
#include "vsumm/rng.hpp"

namespace vsumm {

/// Trainable weights of the frame-selection head: a bidirectional LSTM over
/// the feature sequence and a sigmoid output layer on the concatenated
/// hidden state.
///
/// Tensors (gate order i, f, g, o):
///   fwd.w_ih [4H x D]  fwd.w_hh [4H x H]  fwd.b [4H]
///   bwd.w_ih [4H x D]  bwd.w_hh [4H x H]  bwd.b [4H]
///   out.w    [2H]      out.b    [1]
class PolicyParams {
 public:
  PolicyParams() = default;

  /// Uniform(-0.05, 0.05) weights, zero biases, forget-gate bias 1.
  static PolicyParams initialize(std::size_t input_dim, std::size_t hidden,
                                 std::uint64_t seed, const InitOptions& options = {});

  /// Wraps a loaded tensor set; throws DataError on an inconsistent layout.
  static PolicyParams from_tensors(ParamSet tensors);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t hidden() const noexcept { return hidden_; }

  ParamSet& tensors() noexcept { return tensors_; }
  const ParamSet& tensors() const noexcept { return tensors_; }

  bool operator==(const PolicyParams&) const = default;

 private:
  std::size_t input_dim_ = 0;
  std::size_t hidden_ = 0;
  ParamSet tensors_;
};

/// Cached activations of one LSTM direction, indexed by original time step.
struct LstmTrace {
  Matrix gates;   // T x 4H, post-activation (i, f, g, o)
  Matrix cell;    // T x H
  Matrix hidden;  // T x H
};

struct ForwardTrace {
  LstmTrace forward;
  LstmTrace backward;
  Matrix concat;               // T x 2H, [h_fwd ; h_bwd]
  std::vector<double> logits;  // z_t
  std::vector<double> probs;   // sigmoid(z_t)

  std::size_t length() const noexcept { return probs.size(); }
};

/// p_t = sigmoid(w . [h_fwd_t ; h_bwd_t] + b). Throws NumericError on a
/// non-finite activation.
ForwardTrace forward(const PolicyParams& params, const Matrix& features);

/// Independent Bernoulli(p_t) draws.
std::vector<std::uint8_t> sample_actions(const ForwardTrace& trace, Rng& rng);
std::vector<std::uint8_t> sample_actions(const ForwardTrace& trace, std::uint64_t seed);

/// Clamp applied to probabilities inside every log term.
inline constexpr double kProbFloor = 1e-7;

/// sum_t a_t log p_t + (1 - a_t) log(1 - p_t), p clamped to
/// [kProbFloor, 1 - kProbFloor].
double log_prob_of(const ForwardTrace& trace, std::span<const std::uint8_t> actions);

struct Episode {
  std::vector<std::uint8_t> actions;
  double weight = 0.0;
};

/// Extra terms added to the differentiated scalar: a gradient with respect to
/// the probabilities, one with respect to the logits, and direct gradients on
/// the tensors (one vector per tensor, in tensor order). Empty means absent.
struct RegularizerGrads {
  std::vector<double> dprobs;
  std::vector<double> dlogits;
  std::vector<std::vector<double>> param_grads;
};

/// Backpropagates an arbitrary gradient on the logits through the output
/// layer and both LSTM directions, accumulating into params.tensors() grads.
void backward_from_logits(PolicyParams& params, const Matrix& features,
                          const ForwardTrace& trace, std::span<const double> dlogits);

/// Accumulates the gradient of
///   sum_n w_n log pi(a_n) + (terms described by `reg`)
/// into params.tensors() grads. Since d log pi / d z_t = a_t - p_t, episode
/// terms enter the logits as sum_n w_n (a_nt - p_t). The log-prob clamp is
/// ignored for the gradient.
void backward_reinforce(PolicyParams& params, const Matrix& features,
                        const ForwardTrace& trace, std::span<const Episode> episodes,
                        const RegularizerGrads& reg = {});

}  // namespace vsumm
