#include "vsumm/policy_net.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vsumm/errors.hpp"
#include "vsumm/kernels.hpp"

namespace vsumm {
namespace {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct DirectionNames {
  const char* w_ih;
  const char* w_hh;
  const char* b;
};

constexpr DirectionNames kForward{"fwd.w_ih", "fwd.w_hh", "fwd.b"};
constexpr DirectionNames kBackward{"bwd.w_ih", "bwd.w_hh", "bwd.b"};

std::vector<ParamSpec> policy_specs(std::size_t d, std::size_t h) {
  std::vector<ParamSpec> specs;
  for (const auto& dir : {kForward, kBackward}) {
    specs.push_back({dir.w_ih, {4 * h, d}, ParamKind::weight, InitRule::uniform});
    specs.push_back({dir.w_hh, {4 * h, h}, ParamKind::weight, InitRule::uniform});
    specs.push_back({dir.b, {4 * h}, ParamKind::bias, InitRule::lstm_bias});
  }
  specs.push_back({"out.w", {2 * h}, ParamKind::weight, InitRule::uniform});
  specs.push_back({"out.b", {1}, ParamKind::bias, InitRule::zero});
  return specs;
}

// Step order: 0..T-1 for the forward direction, T-1..0 for the backward one.
std::size_t step_at(std::size_t k, std::size_t length, bool reverse) {
  return reverse ? length - 1 - k : k;
}

LstmTrace run_direction(const ParamSet& p, const DirectionNames& names,
                        const Matrix& x, std::size_t hidden, bool reverse) {
  const auto& w_ih = p.at(names.w_ih).values;
  const auto& w_hh = p.at(names.w_hh).values;
  const auto& bias = p.at(names.b).values;
  const std::size_t length = x.rows();
  const std::size_t d = x.cols();
  const std::size_t h = hidden;

  LstmTrace tr{Matrix(length, 4 * h), Matrix(length, h), Matrix(length, h)};
  std::vector<double> zeros(h, 0.0);
  for (std::size_t k = 0; k < length; ++k) {
    const std::size_t t = step_at(k, length, reverse);
    std::span<const double> h_prev = zeros;
    std::span<const double> c_prev = zeros;
    if (k > 0) {
      const std::size_t prev = step_at(k - 1, length, reverse);
      h_prev = tr.hidden.row(prev);
      c_prev = tr.cell.row(prev);
    }
    auto a = tr.gates.row(t);
    std::copy(bias.begin(), bias.end(), a.begin());
    kernels::gemv(w_ih, 4 * h, d, x.row(t), a);
    kernels::gemv(w_hh, 4 * h, h, h_prev, a);

    auto c = tr.cell.row(t);
    auto hh = tr.hidden.row(t);
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = sigmoid(a[j]);
      const double fg = sigmoid(a[h + j]);
      const double gg = std::tanh(a[2 * h + j]);
      const double og = sigmoid(a[3 * h + j]);
      a[j] = ig;
      a[h + j] = fg;
      a[2 * h + j] = gg;
      a[3 * h + j] = og;
      c[j] = fg * c_prev[j] + ig * gg;
      hh[j] = og * std::tanh(c[j]);
    }
  }
  return tr;
}

// dh: T x H gradient on this direction's hidden outputs.
void backprop_direction(ParamSet& p, const DirectionNames& names, const Matrix& x,
                        const LstmTrace& tr, const Matrix& dh_out,
                        std::size_t hidden, bool reverse) {
  auto& w_hh = p.at(names.w_hh);
  auto& w_ih_grad = p.at(names.w_ih).grad;
  auto& w_hh_grad = w_hh.grad;
  auto& b_grad = p.at(names.b).grad;
  const std::size_t length = x.rows();
  const std::size_t d = x.cols();
  const std::size_t h = hidden;

  std::vector<double> dh_rec(h, 0.0);
  std::vector<double> dc_rec(h, 0.0);
  std::vector<double> da(4 * h);
  std::vector<double> zeros(h, 0.0);

  for (std::size_t kk = length; kk-- > 0;) {
    const std::size_t t = step_at(kk, length, reverse);
    std::span<const double> h_prev = zeros;
    std::span<const double> c_prev = zeros;
    if (kk > 0) {
      const std::size_t prev = step_at(kk - 1, length, reverse);
      h_prev = tr.hidden.row(prev);
      c_prev = tr.cell.row(prev);
    }
    const auto gates = tr.gates.row(t);
    const auto c = tr.cell.row(t);
    const auto dh_t = dh_out.row(t);

    for (std::size_t j = 0; j < h; ++j) {
      const double ig = gates[j];
      const double fg = gates[h + j];
      const double gg = gates[2 * h + j];
      const double og = gates[3 * h + j];
      const double dh = dh_t[j] + dh_rec[j];
      const double tc = std::tanh(c[j]);
      const double dc = dc_rec[j] + dh * og * (1.0 - tc * tc);
      da[j] = dc * gg * ig * (1.0 - ig);
      da[h + j] = dc * c_prev[j] * fg * (1.0 - fg);
      da[2 * h + j] = dc * ig * (1.0 - gg * gg);
      da[3 * h + j] = dh * tc * og * (1.0 - og);
      dc_rec[j] = dc * fg;
    }

    kernels::axpy(1.0, da, b_grad);
    kernels::rank1_update(w_ih_grad, 4 * h, d, 1.0, da, x.row(t));
    kernels::rank1_update(w_hh_grad, 4 * h, h, 1.0, da, h_prev);
    std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
    kernels::gemv_t(w_hh.values, 4 * h, h, da, dh_rec);
  }
}

}  // namespace

PolicyParams PolicyParams::initialize(std::size_t input_dim, std::size_t hidden,
                                      std::uint64_t seed, const InitOptions& options) {
  if (input_dim == 0 || hidden == 0)
    throw std::invalid_argument("policy dimensions must be positive");
  const auto specs = policy_specs(input_dim, hidden);
  PolicyParams p;
  p.input_dim_ = input_dim;
  p.hidden_ = hidden;
  p.tensors_ = init_params(specs, seed, options);
  return p;
}

PolicyParams PolicyParams::from_tensors(ParamSet tensors) {
  if (!tensors.contains("fwd.w_ih") || tensors.at("fwd.w_ih").shape.size() != 2)
    throw DataError("checkpoint is not a policy: missing fwd.w_ih");
  const auto& shape = tensors.at("fwd.w_ih").shape;
  if (shape[0] == 0 || shape[0] % 4 != 0)
    throw DataError("checkpoint fwd.w_ih has invalid gate dimension");
  const std::size_t h = shape[0] / 4;
  const std::size_t d = shape[1];
  ParamSet expected;
  for (const auto& spec : policy_specs(d, h)) expected.add(ParamTensor(spec.name, spec.shape, spec.kind));
  if (!tensors.same_layout(expected))
    throw DataError("checkpoint tensor layout does not match a policy with D=" +
                    std::to_string(d) + ", H=" + std::to_string(h));
  for (std::size_t i = 0; i < tensors.size(); ++i)
    tensors.tensors()[i].kind = expected.tensors()[i].kind;
  PolicyParams p;
  p.input_dim_ = d;
  p.hidden_ = h;
  p.tensors_ = std::move(tensors);
  return p;
}

ForwardTrace forward(const PolicyParams& params, const Matrix& features) {
  if (features.rows() == 0) throw std::invalid_argument("forward: empty sequence");
  if (features.cols() != params.input_dim())
    throw std::invalid_argument("forward: feature dimension " + std::to_string(features.cols()) +
                                " does not match policy input " + std::to_string(params.input_dim()));
  const std::size_t length = features.rows();
  const std::size_t h = params.hidden();
  const auto& p = params.tensors();

  ForwardTrace tr;
  tr.forward = run_direction(p, kForward, features, h, false);
  tr.backward = run_direction(p, kBackward, features, h, true);
  tr.concat = Matrix(length, 2 * h);
  tr.logits.resize(length);
  tr.probs.resize(length);
  const auto& w = p.at("out.w").values;
  const double b = p.at("out.b").values[0];
  for (std::size_t t = 0; t < length; ++t) {
    auto row = tr.concat.row(t);
    std::copy_n(tr.forward.hidden.row(t).begin(), h, row.begin());
    std::copy_n(tr.backward.hidden.row(t).begin(), h, row.begin() + static_cast<std::ptrdiff_t>(h));
    const double z = kernels::dot(w, row) + b;
    if (!std::isfinite(z)) throw NumericError("forward: non-finite logit at step " + std::to_string(t));
    tr.logits[t] = z;
    tr.probs[t] = sigmoid(z);
  }
  return tr;
}

std::vector<std::uint8_t> sample_actions(const ForwardTrace& trace, Rng& rng) {
  std::vector<std::uint8_t> a(trace.length());
  for (std::size_t t = 0; t < a.size(); ++t) a[t] = rng.bernoulli(trace.probs[t]) ? 1 : 0;
  return a;
}

std::vector<std::uint8_t> sample_actions(const ForwardTrace& trace, std::uint64_t seed) {
  Rng rng(seed);
  return sample_actions(trace, rng);
}

double log_prob_of(const ForwardTrace& trace, std::span<const std::uint8_t> actions) {
  if (actions.size() != trace.length())
    throw std::invalid_argument("log_prob_of: action length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const double p = std::clamp(trace.probs[t], kProbFloor, 1.0 - kProbFloor);
    total += actions[t] ? std::log(p) : std::log1p(-p);
  }
  return total;
}

void backward_from_logits(PolicyParams& params, const Matrix& features,
                          const ForwardTrace& trace, std::span<const double> dlogits) {
  const std::size_t length = trace.length();
  const std::size_t h = params.hidden();
  if (dlogits.size() != length || features.rows() != length)
    throw std::invalid_argument("backward: length mismatch");
  auto& p = params.tensors();
  auto& out_w = p.at("out.w");
  auto& out_b = p.at("out.b");

  Matrix dh_fwd(length, h);
  Matrix dh_bwd(length, h);
  for (std::size_t t = 0; t < length; ++t) {
    const double dz = dlogits[t];
    if (!std::isfinite(dz)) throw NumericError("backward: non-finite logit gradient at step " + std::to_string(t));
    if (dz == 0.0) continue;
    out_b.grad[0] += dz;
    kernels::axpy(dz, trace.concat.row(t), out_w.grad);
    const std::span<const double> w(out_w.values);
    kernels::axpy(dz, w.first(h), dh_fwd.row(t));
    kernels::axpy(dz, w.subspan(h, h), dh_bwd.row(t));
  }
  backprop_direction(p, kForward, features, trace.forward, dh_fwd, h, false);
  backprop_direction(p, kBackward, features, trace.backward, dh_bwd, h, true);

  for (const auto& t : p.tensors())
    for (double g : t.grad)
      if (!std::isfinite(g)) throw NumericError("backward: non-finite gradient in " + t.name);
}

void backward_reinforce(PolicyParams& params, const Matrix& features,
                        const ForwardTrace& trace, std::span<const Episode> episodes,
                        const RegularizerGrads& reg) {
  const std::size_t length = trace.length();
  std::vector<double> dz(length, 0.0);
  for (const auto& ep : episodes) {
    if (ep.actions.size() != length) throw std::invalid_argument("backward: episode length mismatch");
    if (ep.weight == 0.0) continue;
    for (std::size_t t = 0; t < length; ++t)
      dz[t] += ep.weight * (static_cast<double>(ep.actions[t]) - trace.probs[t]);
  }
  if (!reg.dprobs.empty()) {
    if (reg.dprobs.size() != length) throw std::invalid_argument("backward: dprobs length mismatch");
    for (std::size_t t = 0; t < length; ++t) {
      const double p = trace.probs[t];
      dz[t] += reg.dprobs[t] * p * (1.0 - p);
    }
  }
  if (!reg.dlogits.empty()) {
    if (reg.dlogits.size() != length) throw std::invalid_argument("backward: dlogits length mismatch");
    for (std::size_t t = 0; t < length; ++t) dz[t] += reg.dlogits[t];
  }
  backward_from_logits(params, features, trace, dz);

  if (!reg.param_grads.empty()) {
    auto& tensors = params.tensors().tensors();
    if (reg.param_grads.size() != tensors.size())
      throw std::invalid_argument("backward: regularizer gradient layout mismatch");
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      if (reg.param_grads[k].size() != tensors[k].size())
        throw std::invalid_argument("backward: regularizer gradient shape mismatch for " +
                                    tensors[k].name);
      kernels::axpy(1.0, reg.param_grads[k], tensors[k].grad);
    }
  }
}

}  // namespace vsumm
