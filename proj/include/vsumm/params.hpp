#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vsumm {

enum class ParamKind { weight, bias };

/// A named trainable tensor with its gradient accumulator.
struct ParamTensor {
  std::string name;
  std::vector<std::size_t> shape;
  ParamKind kind = ParamKind::weight;
  std::vector<double> values;
  std::vector<double> grad;

  ParamTensor() = default;
  ParamTensor(std::string name, std::vector<std::size_t> shape, ParamKind kind);

  std::size_t size() const noexcept { return values.size(); }
  void zero_grad();
};

std::size_t shape_size(std::span<const std::size_t> shape);

/// Ordered collection of tensors, looked up by name.
class ParamSet {
 public:
  ParamSet() = default;

  ParamTensor& add(ParamTensor tensor);

  ParamTensor& at(std::string_view name);
  const ParamTensor& at(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::vector<ParamTensor>& tensors() noexcept { return tensors_; }
  const std::vector<ParamTensor>& tensors() const noexcept { return tensors_; }
  std::size_t size() const noexcept { return tensors_.size(); }

  std::size_t total_elements() const;
  void zero_grad();

  /// Same names and shapes, in the same order.
  bool same_layout(const ParamSet& other) const;

  bool operator==(const ParamSet& other) const;

 private:
  std::vector<ParamTensor> tensors_;
};

/// How a tensor is initialized by init_params.
enum class InitRule { uniform, zero, lstm_bias };

struct ParamSpec {
  std::string name;
  std::vector<std::size_t> shape;
  ParamKind kind = ParamKind::weight;
  InitRule rule = InitRule::uniform;
};

struct InitOptions {
  double uniform_bound = 0.05;
  double forget_bias = 1.0;
};

/// Deterministic initialization. Uniform tensors draw from
/// U(-bound, bound); lstm_bias tensors (length 4H, gate order i,f,g,o) are
/// zero except the forget slice [H, 2H), which is set to forget_bias.
ParamSet init_params(std::span<const ParamSpec> specs, std::uint64_t seed,
                     const InitOptions& options = {});

// Checkpoint file: "FVSP", then per tensor until EOF:
//   u32 name length, name bytes, u32 rank, u32 dims[rank],
//   f64 values[prod(dims)], all little-endian.
// Parameter kind is not stored; load_checkpoint marks tensors whose name ends
// in ".b" (or "_b") as biases.
void save_checkpoint(const ParamSet& params, const std::filesystem::path& path);
ParamSet load_checkpoint(const std::filesystem::path& path);

}  // namespace vsumm
