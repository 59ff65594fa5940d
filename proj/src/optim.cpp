#include "vsumm/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vsumm/errors.hpp"

namespace vsumm {

AdamState::AdamState(const ParamSet& params, AdamConfig config)
    : config_(config) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const auto& t : params.tensors()) {
    m_.emplace_back(t.size(), 0.0);
    v_.emplace_back(t.size(), 0.0);
  }
}

void adam_step(ParamSet& params, AdamState& state) {
  auto& tensors = params.tensors();
  if (tensors.size() != state.m_.size())
    throw std::invalid_argument("adam state does not match parameter set");
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    const auto& t = tensors[k];
    if (t.size() != state.m_[k].size())
      throw std::invalid_argument("adam state shape mismatch for " + t.name);
    for (double g : t.grad)
      if (!std::isfinite(g)) throw NumericError("non-finite gradient in " + t.name);
  }

  const AdamConfig& c = state.config_;
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t k = 0; k < tensors.size(); ++k) {
    auto& tensor = tensors[k];
    auto& m = state.m_[k];
    auto& v = state.v_[k];
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double g = tensor.grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      tensor.values[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
    tensor.zero_grad();
  }
}

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw NumericError("grad_check: objective is not finite");
  return v;
}

}  // namespace

double grad_check(const std::function<double(const ParamSet&)>& f,
                  ParamSet& params, double h) {
  double worst = 0.0;
  for (auto& t : params.tensors()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double saved = t.values[i];
      t.values[i] = saved + h;
      const double up = checked(f(params));
      t.values[i] = saved - h;
      const double down = checked(f(params));
      t.values[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = t.grad[i];
      worst = std::max(worst, std::abs(analytic - numeric) /
                                  std::max(1.0, std::abs(analytic)));
    }
  }
  return worst;
}

double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> x, std::span<const double> analytic,
                  double h) {
  if (x.size() != analytic.size())
    throw std::invalid_argument("grad_check: gradient size mismatch");
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double up = checked(f(probe));
    probe[i] = saved - h;
    const double down = checked(f(probe));
    probe[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(analytic[i] - numeric) /
                                std::max(1.0, std::abs(analytic[i])));
  }
  return worst;
}

}  // namespace vsumm
