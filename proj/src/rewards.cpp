#include "vsumm/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vsumm/kernels.hpp"

namespace vsumm {
namespace {

bool too_far(std::size_t a, std::size_t b, const RewardConfig& cfg) {
  if (!cfg.use_lambda) return false;
  const std::size_t gap = a > b ? a - b : b - a;
  return gap > cfg.lambda_window;
}

void check_indices(std::span<const std::size_t> selected, std::size_t length) {
  for (auto s : selected)
    if (s >= length) throw std::out_of_range("selected frame index out of range");
}

// Cosine dissimilarity from a dot product and the two norms.
double cosine_dissim(double dot, double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 1.0;
  const double cos = std::clamp(dot / (norm_a * norm_b), -1.0, 1.0);
  return 1.0 - cos;
}

}  // namespace

double dissimilarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dissimilarity: dimension mismatch");
  return cosine_dissim(kernels::dot(x, y), std::sqrt(kernels::dot(x, x)),
                       std::sqrt(kernels::dot(y, y)));
}

double diversity_reward(const Matrix& features, std::span<const std::size_t> selected,
                        const RewardConfig& cfg) {
  check_indices(selected, features.rows());
  const std::size_t k = selected.size();
  if (k < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::size_t a = selected[i];
      const std::size_t b = selected[j];
      sum += too_far(a, b, cfg) ? 1.0 : dissimilarity(features.row(a), features.row(b));
    }
  }
  return 2.0 * sum / static_cast<double>(k * (k - 1));
}

double representativeness_reward(const Matrix& features,
                                 std::span<const std::size_t> selected) {
  if (selected.empty()) throw std::invalid_argument("representativeness_reward: empty selection");
  check_indices(selected, features.rows());
  const std::size_t length = features.rows();
  double total = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (auto s : selected)
      best = std::min(best, kernels::squared_distance(features.row(t), features.row(s)));
    total += std::sqrt(best);
  }
  return std::exp(-total / static_cast<double>(length));
}

std::vector<std::size_t> selected_indices(std::span<const std::uint8_t> actions) {
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < actions.size(); ++t)
    if (actions[t]) idx.push_back(t);
  return idx;
}

RewardValue total_reward(const Matrix& features, std::span<const std::uint8_t> actions,
                         const RewardConfig& cfg) {
  if (actions.size() != features.rows())
    throw std::invalid_argument("total_reward: action length mismatch");
  const auto selected = selected_indices(actions);
  if (selected.empty()) return {};
  RewardValue v;
  v.r_div = diversity_reward(features, selected, cfg);
  v.r_rep = representativeness_reward(features, selected);
  v.total = v.r_div + v.r_rep;
  return v;
}

RewardTables::RewardTables(const Matrix& features)
    : n_(features.rows()), dissim_(n_ * n_, 0.0), dist_(n_ * n_, 0.0) {
  std::vector<double> norms(n_);
  for (std::size_t a = 0; a < n_; ++a)
    norms[a] = std::sqrt(kernels::dot(features.row(a), features.row(a)));
  for (std::size_t a = 0; a < n_; ++a) {
    dissim_[a * n_ + a] = cosine_dissim(norms[a] * norms[a], norms[a], norms[a]);
    for (std::size_t b = a + 1; b < n_; ++b) {
      const double d = cosine_dissim(kernels::dot(features.row(a), features.row(b)),
                                     norms[a], norms[b]);
      const double e = std::sqrt(kernels::squared_distance(features.row(a), features.row(b)));
      dissim_[a * n_ + b] = dissim_[b * n_ + a] = d;
      dist_[a * n_ + b] = dist_[b * n_ + a] = e;
    }
  }
}

double RewardTables::diversity(std::span<const std::size_t> selected,
                               const RewardConfig& cfg) const {
  check_indices(selected, n_);
  const std::size_t k = selected.size();
  if (k < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t a = selected[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::size_t b = selected[j];
      sum += too_far(a, b, cfg) ? 1.0 : dissim_[a * n_ + b];
    }
  }
  return 2.0 * sum / static_cast<double>(k * (k - 1));
}

double RewardTables::representativeness(std::span<const std::size_t> selected) const {
  if (selected.empty()) throw std::invalid_argument("representativeness: empty selection");
  check_indices(selected, n_);
  double total = 0.0;
  for (std::size_t t = 0; t < n_; ++t) {
    double best = std::numeric_limits<double>::infinity();
    const double* row = dist_.data() + t * n_;
    for (auto s : selected) best = std::min(best, row[s]);
    total += best;
  }
  return std::exp(-total / static_cast<double>(n_));
}

RewardValue RewardTables::total(std::span<const std::uint8_t> actions,
                                const RewardConfig& cfg) const {
  if (actions.size() != n_) throw std::invalid_argument("reward: action length mismatch");
  const auto selected = selected_indices(actions);
  if (selected.empty()) return {};
  RewardValue v;
  v.r_div = diversity(selected, cfg);
  v.r_rep = representativeness(selected);
  v.total = v.r_div + v.r_rep;
  return v;
}

}  // namespace vsumm
