#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrcert/dense_net.hpp"
#include "lrcert/environment.hpp"
#include "lrcert/rng.hpp"

namespace lrcert {

// pi(a | s) = softmax(mu(s))_a, one logit per action in declaration order.
class SoftmaxPolicy {
 public:
  SoftmaxPolicy(DenseNet mu, ActionSet actions);

  const DenseNet& net() const noexcept { return mu_; }
  const ActionSet& actions() const noexcept { return actions_; }
  void set_params(std::vector<double> params) { mu_.set_params(std::move(params)); }

 private:
  DenseNet mu_;
  ActionSet actions_;
};

std::vector<double> action_probs(const SoftmaxPolicy& p, std::span<const double> s);

// Index selected by uniform variate u on the cumulative distribution.
std::size_t inverse_cdf(std::span<const double> probs, double u);

// Inverse-CDF draw over the declaration order; consumes one uniform variate.
std::size_t sample_action(const SoftmaxPolicy& p, std::span<const double> s, RandomStream& rng);

// Gradient of log pi(a | s) with respect to the policy parameters.
std::vector<double> grad_log_prob(const SoftmaxPolicy& p, std::span<const double> s, std::size_t action);
std::vector<double> grad_log_prob(const SoftmaxPolicy& p, std::span<const double> s, std::string_view label);

// Dense checkpoint followed by "actions <n>" and one "<label> <value>" line
// per action.
void save_policy(const std::string& path, const SoftmaxPolicy& p, const std::string& provenance = {});
SoftmaxPolicy load_policy(const std::string& path);

}  // namespace lrcert
