#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vsumm/params.hpp"

namespace vsumm {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment estimates for one ParamSet layout.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const ParamSet& params, AdamConfig config);

  const AdamConfig& config() const noexcept { return config_; }
  void set_learning_rate(double lr) noexcept { config_.learning_rate = lr; }
  std::uint64_t step_count() const noexcept { return step_; }

  const std::vector<std::vector<double>>& first_moment() const { return m_; }
  const std::vector<std::vector<double>>& second_moment() const { return v_; }

 private:
  friend void adam_step(ParamSet& params, AdamState& state);

  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

/// One bias-corrected Adam update on every tensor, then zeroes gradients.
/// Throws NumericError naming the tensor if any gradient is non-finite; in
/// that case no tensor is modified.
void adam_step(ParamSet& params, AdamState& state);

/// Maximum over all coordinates of
///   |analytic - central_difference| / max(1, |analytic|)
/// where `analytic` is read from each tensor's grad field and the central
/// difference uses step h. Values are restored afterwards.
double grad_check(const std::function<double(const ParamSet&)>& f,
                  ParamSet& params, double h);

/// Same measure for a function of a plain vector.
double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> x, std::span<const double> analytic,
                  double h);

}  // namespace vsumm
