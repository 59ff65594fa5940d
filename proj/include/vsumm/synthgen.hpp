#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vsumm/dataio.hpp"

namespace vsumm {

struct SynthOptions {
  std::size_t frame_stride = 15;  // original frames per subsampled step
  double fps = 30.0;
  std::size_t annotators = 3;
  std::size_t shot_steps = 3;  // shots never straddle a cluster boundary
};

/// Video whose steps form `n_clusters` contiguous temporal clusters. Cluster
/// k is centered on unit axis e_k with N(0, noise^2) jitter per coordinate.
/// Keyframes are the cluster medoids. Each cluster is cut into shots of
/// shot_steps steps (the last one may be shorter). Annotator u marks the
/// three steps around each medoid, shifted by u - 1 and clipped to the
/// cluster.
VideoRecord make_clustered_video(std::size_t n_clusters, std::size_t frames_per_cluster,
                                 std::size_t dim, double noise, std::uint64_t seed,
                                 const SynthOptions& options = {});

/// `count` videos from seeds seed, seed+1, ...; ids "synth_000", "synth_001", ...
std::vector<VideoRecord> make_clustered_corpus(std::size_t count, std::size_t n_clusters,
                                               std::size_t frames_per_cluster, std::size_t dim,
                                               double noise, std::uint64_t seed,
                                               const SynthOptions& options = {});

}  // namespace vsumm
