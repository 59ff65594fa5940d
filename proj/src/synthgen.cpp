#include "vsumm/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vsumm/errors.hpp"
#include "vsumm/kernels.hpp"
#include "vsumm/rng.hpp"

namespace vsumm {

VideoRecord make_clustered_video(std::size_t n_clusters, std::size_t frames_per_cluster,
                                 std::size_t dim, double noise, std::uint64_t seed,
                                 const SynthOptions& options) {
  if (n_clusters == 0 || frames_per_cluster == 0)
    throw ConfigError("synthgen: need at least one cluster and one frame per cluster");
  if (dim < n_clusters) throw ConfigError("synthgen: dimension must be >= number of clusters");
  if (n_clusters * frames_per_cluster < 2) throw ConfigError("synthgen: need at least 2 frames");
  if (options.frame_stride == 0) throw ConfigError("synthgen: frame stride must be positive");
  if (options.shot_steps == 0) throw ConfigError("synthgen: shot length must be positive");
  if (!(noise >= 0.0)) throw ConfigError("synthgen: noise must be >= 0");

  Rng rng(seed);
  const std::size_t steps = n_clusters * frames_per_cluster;
  VideoRecord r;
  char id[32];
  std::snprintf(id, sizeof id, "synth_%llu", static_cast<unsigned long long>(seed));
  r.video_id = id;
  r.features = Matrix(steps, dim);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t k = t / frames_per_cluster;
    auto row = r.features.row(t);
    for (std::size_t j = 0; j < dim; ++j) row[j] = (j == k ? 1.0 : 0.0) + noise * rng.normal();
  }
  r.n_frames_original = steps * options.frame_stride;
  r.fps = options.fps;
  r.picks.resize(steps);
  for (std::size_t t = 0; t < steps; ++t) r.picks[t] = t * options.frame_stride;

  for (std::size_t k = 0; k < n_clusters; ++k) {
    const std::size_t lo = k * frames_per_cluster;
    const std::size_t hi = lo + frames_per_cluster;  // exclusive
    std::size_t medoid = lo;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = lo; a < hi; ++a) {
      double cost = 0.0;
      for (std::size_t b = lo; b < hi; ++b)
        cost += std::sqrt(kernels::squared_distance(r.features.row(a), r.features.row(b)));
      if (cost < best) {
        best = cost;
        medoid = a;
      }
    }
    r.keyframe_indices.push_back(medoid);
    for (std::size_t s = lo; s < hi; s += options.shot_steps)
      r.change_points.push_back(
          {s * options.frame_stride, std::min(s + options.shot_steps, hi) * options.frame_stride - 1});
  }

  r.user_summaries.assign(options.annotators, std::vector<std::uint8_t>(r.n_frames_original, 0));
  std::vector<double> votes(steps, 0.0);
  for (std::size_t u = 0; u < options.annotators; ++u) {
    const auto shift = static_cast<std::ptrdiff_t>(u % 3) - 1;
    for (std::size_t k = 0; k < n_clusters; ++k) {
      const auto lo = static_cast<std::ptrdiff_t>(k * frames_per_cluster);
      const auto hi = lo + static_cast<std::ptrdiff_t>(frames_per_cluster) - 1;
      const auto centre = static_cast<std::ptrdiff_t>(r.keyframe_indices[k]) + shift;
      for (auto s = centre - 1; s <= centre + 1; ++s) {
        if (s < lo || s > hi) continue;
        const auto step = static_cast<std::size_t>(s);
        votes[step] += 1.0;
        const std::size_t f0 = step * options.frame_stride;
        std::fill_n(r.user_summaries[u].begin() + static_cast<std::ptrdiff_t>(f0),
                    options.frame_stride, std::uint8_t{1});
      }
    }
  }
  if (options.annotators > 0) {
    r.gt_importance = votes;
    for (auto& v : r.gt_importance) v /= static_cast<double>(options.annotators);
  }
  validate(r);
  return r;
}

std::vector<VideoRecord> make_clustered_corpus(std::size_t count, std::size_t n_clusters,
                                               std::size_t frames_per_cluster, std::size_t dim,
                                               double noise, std::uint64_t seed,
                                               const SynthOptions& options) {
  std::vector<VideoRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    VideoRecord r = make_clustered_video(n_clusters, frames_per_cluster, dim, noise, seed + i, options);
    char id[32];
    std::snprintf(id, sizeof id, "synth_%03zu", i);
    r.video_id = id;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace vsumm
