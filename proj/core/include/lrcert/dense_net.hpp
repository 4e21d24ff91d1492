#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrcert/rng.hpp"

namespace lrcert {

struct GradientRecord {
  std::vector<double> value;        // network output
  std::vector<double> grad_params;  // aligned with DenseNet::params()
  std::vector<double> grad_input;   // aligned with the input vector
};

/// Fully connected feed-forward network, ReLU on hidden layers and identity
/// on the output layer.
///
/// Parameters live in one flat vector. Layer k contributes its weight matrix
/// (layer_sizes[k+1] rows by layer_sizes[k] columns, row-major) followed by
/// its bias vector, and layers are stored in order. The ReLU derivative at 0
/// is taken as 0.
class DenseNet {
 public:
  DenseNet() = default;

  // All-zero parameters.
  explicit DenseNet(std::vector<std::size_t> layer_sizes);
  DenseNet(std::vector<std::size_t> layer_sizes, std::vector<double> params);

  // Weights and biases uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static DenseNet initialized(std::vector<std::size_t> layer_sizes, RandomStream& rng);

  static std::size_t param_count_for(std::span<const std::size_t> layer_sizes);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return layer_sizes_; }
  const std::vector<double>& params() const noexcept { return params_; }
  std::size_t param_count() const noexcept { return params_.size(); }
  std::size_t input_width() const noexcept { return layer_sizes_.front(); }
  std::size_t output_width() const noexcept { return layer_sizes_.back(); }

  void set_params(std::vector<double> params);

  std::vector<double> forward(std::span<const double> x) const;

  // Reverse-mode pass: gradients of dot(upstream, forward(x)).
  GradientRecord backward(std::span<const double> x, std::span<const double> upstream) const;

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  std::vector<std::size_t> layer_sizes_;
  std::vector<double> params_;
};

inline std::vector<double> forward(const DenseNet& net, std::span<const double> x) { return net.forward(x); }

inline GradientRecord backward(const DenseNet& net, std::span<const double> x,
                               std::span<const double> upstream) {
  return net.backward(x, upstream);
}

// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

// params - rate * grad
std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grad, double rate);

// First and second moment estimates for adam_step. Empty until the first step.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t steps = 0;
};

// Adam with beta1 = 0.9, beta2 = 0.999, eps = 1e-8 and bias correction.
// Advances `state`.
std::vector<double> adam_step(std::span<const double> params, std::span<const double> grad, double rate,
                              AdamState& state);

// (1 - tau) * target + tau * online
std::vector<double> soft_replace(std::span<const double> target, std::span<const double> online, double tau);

// Checkpoint text format:
//   lrcert-dense 1
//   layers <n> <size_0> ... <size_{n-1}>
//   params <count>
//   <one parameter per line, %.17g>
// Optional "# key=value" provenance lines may precede the version tag.
void write_checkpoint(std::ostream& out, const DenseNet& net, const std::string& provenance = {});
DenseNet read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const DenseNet& net, const std::string& provenance = {});
DenseNet load_checkpoint(const std::string& path);

}  // namespace lrcert
