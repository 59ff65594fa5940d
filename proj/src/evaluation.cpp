#include "vsumm/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vsumm/errors.hpp"
#include "vsumm/summarizer.hpp"

namespace vsumm {

Prf fscore(std::span<const std::uint8_t> machine, std::span<const std::uint8_t> user) {
  if (machine.size() != user.size())
    throw std::invalid_argument("fscore: masks differ in length (" +
                                std::to_string(machine.size()) + " vs " +
                                std::to_string(user.size()) + ")");
  std::size_t overlap = 0, m = 0, u = 0;
  for (std::size_t i = 0; i < machine.size(); ++i) {
    const bool a = machine[i] != 0;
    const bool b = user[i] != 0;
    m += a;
    u += b;
    overlap += a && b;
  }
  Prf r;
  if (m > 0) r.precision = static_cast<double>(overlap) / static_cast<double>(m);
  if (u > 0) r.recall = static_cast<double>(overlap) / static_cast<double>(u);
  if (r.precision + r.recall > 0.0)
    r.f = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

std::string_view aggregation_name(Aggregation mode) {
  return mode == Aggregation::max ? "max" : "average";
}

Aggregation default_aggregation(std::string_view dataset_name) {
  std::string lower(dataset_name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.find("summe") != std::string::npos ? Aggregation::max : Aggregation::average;
}

Prf multi_user_fscore(std::span<const std::uint8_t> machine,
                      const std::vector<std::vector<std::uint8_t>>& users, Aggregation mode) {
  if (users.empty()) throw std::invalid_argument("multi_user_fscore: no user summaries");
  Prf acc;
  Prf best{0.0, 0.0, -1.0};
  for (const auto& user : users) {
    const Prf r = fscore(machine, user);
    acc.precision += r.precision;
    acc.recall += r.recall;
    acc.f += r.f;
    if (r.f > best.f) best = r;
  }
  if (mode == Aggregation::max) return best;
  const double n = static_cast<double>(users.size());
  return {acc.precision / n, acc.recall / n, acc.f / n};
}

double xcorr(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) throw std::invalid_argument("xcorr: length mismatch");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (pred.empty() || constant(pred) || constant(gt)) return 0.0;
  const double n = static_cast<double>(pred.size());
  const double mp = std::accumulate(pred.begin(), pred.end(), 0.0) / n;
  const double mg = std::accumulate(gt.begin(), gt.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double a = pred[i] - mp;
    const double b = gt[i] - mg;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

EvalResult evaluate_fold(const PolicyParams& params, std::span<const VideoRecord> test_videos,
                         Aggregation mode, double budget_fraction) {
  EvalResult result;
  result.mode = mode;
  for (const auto& video : test_videos) {
    if (video.user_summaries.empty())
      throw DataError("video '" + video.video_id + "': user_summaries missing, cannot evaluate");
    const ForwardTrace trace = forward(params, video.features);
    const SummaryMask summary = generate_summary(video, trace.probs, budget_fraction);
    const Prf prf = multi_user_fscore(summary.mask, video.user_summaries, mode);
    result.videos.push_back({video.video_id, 100.0 * prf.precision, 100.0 * prf.recall,
                             100.0 * prf.f});
  }
  if (!result.videos.empty()) {
    double sum = 0.0;
    for (const auto& v : result.videos) sum += v.f_score;
    result.mean_f = sum / static_cast<double>(result.videos.size());
  }
  return result;
}

double cross_validation_score(std::span<const EvalResult> folds) {
  if (folds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : folds) sum += f.mean_f;
  return sum / static_cast<double>(folds.size());
}

}  // namespace vsumm
