#include "vsumm/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "binary_io.hpp"
#include "vsumm/errors.hpp"
#include "vsumm/rng.hpp"

namespace vsumm {

std::size_t shape_size(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

ParamTensor::ParamTensor(std::string n, std::vector<std::size_t> s,
                         ParamKind k)
    : name(std::move(n)), shape(std::move(s)), kind(k) {
  const std::size_t count = shape_size(shape);
  values.assign(count, 0.0);
  grad.assign(count, 0.0);
}

void ParamTensor::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

ParamTensor& ParamSet::add(ParamTensor tensor) {
  if (contains(tensor.name))
    throw std::invalid_argument("duplicate parameter name: " + tensor.name);
  if (tensor.values.size() != shape_size(tensor.shape) ||
      tensor.grad.size() != tensor.values.size())
    throw std::invalid_argument("parameter shape mismatch: " + tensor.name);
  tensors_.push_back(std::move(tensor));
  return tensors_.back();
}

ParamTensor& ParamSet::at(std::string_view name) {
  for (auto& t : tensors_)
    if (t.name == name) return t;
  throw std::out_of_range("no parameter named " + std::string(name));
}

const ParamTensor& ParamSet::at(std::string_view name) const {
  for (const auto& t : tensors_)
    if (t.name == name) return t;
  throw std::out_of_range("no parameter named " + std::string(name));
}

bool ParamSet::contains(std::string_view name) const {
  return std::any_of(tensors_.begin(), tensors_.end(),
                     [&](const ParamTensor& t) { return t.name == name; });
}

std::size_t ParamSet::total_elements() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& t : tensors_) t.zero_grad();
}

bool ParamSet::same_layout(const ParamSet& other) const {
  if (tensors_.size() != other.tensors_.size()) return false;
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    if (tensors_[i].name != other.tensors_[i].name ||
        tensors_[i].shape != other.tensors_[i].shape)
      return false;
  }
  return true;
}

bool ParamSet::operator==(const ParamSet& other) const {
  if (!same_layout(other)) return false;
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    if (tensors_[i].values != other.tensors_[i].values) return false;
  return true;
}

ParamSet init_params(std::span<const ParamSpec> specs, std::uint64_t seed,
                     const InitOptions& options) {
  Rng rng(seed);
  ParamSet set;
  for (const auto& spec : specs) {
    ParamTensor t(spec.name, spec.shape, spec.kind);
    switch (spec.rule) {
      case InitRule::uniform:
        for (auto& v : t.values)
          v = rng.uniform(-options.uniform_bound, options.uniform_bound);
        break;
      case InitRule::zero:
        break;
      case InitRule::lstm_bias: {
        if (t.size() % 4 != 0)
          throw std::invalid_argument("lstm bias length must be 4H: " + spec.name);
        const std::size_t h = t.size() / 4;
        std::fill(t.values.begin() + static_cast<std::ptrdiff_t>(h),
                  t.values.begin() + static_cast<std::ptrdiff_t>(2 * h),
                  options.forget_bias);
        break;
      }
    }
    set.add(std::move(t));
  }
  return set;
}

namespace {

constexpr char kCheckpointMagic[4] = {'F', 'V', 'S', 'P'};

bool is_bias_name(const std::string& name) {
  auto ends_with = [&](std::string_view s) {
    return name.size() >= s.size() &&
           name.compare(name.size() - s.size(), s.size(), s) == 0;
  };
  return ends_with(".b") || ends_with("_b");
}

}  // namespace

void save_checkpoint(const ParamSet& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  out.write(kCheckpointMagic, 4);
  for (const auto& t : params.tensors()) {
    detail::put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    detail::put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (auto d : t.shape) detail::put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : t.values) detail::put_f64(out, v);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ParamSet load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kCheckpointMagic))
    throw DataError("checkpoint " + path.string() + ": bad magic");

  ParamSet set;
  while (in.peek() != std::char_traits<char>::eof()) {
    std::uint32_t name_len = 0;
    if (!detail::get_u32(in, name_len) || name_len > 4096)
      throw DataError("checkpoint " + path.string() + ": bad tensor name length");
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len))
      throw DataError("checkpoint " + path.string() + ": truncated name");
    std::uint32_t rank = 0;
    if (!detail::get_u32(in, rank) || rank > 8)
      throw DataError("checkpoint " + path.string() + ": bad rank for " + name);
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) {
      std::uint32_t v = 0;
      if (!detail::get_u32(in, v))
        throw DataError("checkpoint " + path.string() + ": truncated dims for " + name);
      d = v;
    }
    ParamTensor t(name, shape, is_bias_name(name) ? ParamKind::bias : ParamKind::weight);
    for (auto& v : t.values) {
      if (!detail::get_f64(in, v))
        throw DataError("checkpoint " + path.string() + ": truncated values for " + name);
      if (!std::isfinite(v))
        throw DataError("checkpoint " + path.string() + ": non-finite value in " + name);
    }
    set.add(std::move(t));
  }
  return set;
}

}  // namespace vsumm
