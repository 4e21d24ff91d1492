#include "lrcert/policy.hpp"

#include <fstream>

#include "lrcert/errors.hpp"
#include "lrcert/text.hpp"

namespace lrcert {

SoftmaxPolicy::SoftmaxPolicy(DenseNet mu, ActionSet actions) : mu_(std::move(mu)), actions_(std::move(actions)) {
  if (mu_.output_width() != actions_.size()) {
    throw ShapeError("policy network emits " + std::to_string(mu_.output_width()) + " logits for " +
                     std::to_string(actions_.size()) + " actions");
  }
}

std::vector<double> action_probs(const SoftmaxPolicy& p, std::span<const double> s) {
  return softmax(p.net().forward(s));
}

std::size_t inverse_cdf(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  for (std::size_t a = 0; a + 1 < probs.size(); ++a) {
    cumulative += probs[a];
    if (u < cumulative) return a;
  }
  return probs.size() - 1;
}

std::size_t sample_action(const SoftmaxPolicy& p, std::span<const double> s, RandomStream& rng) {
  return inverse_cdf(action_probs(p, s), rng.uniform());
}

std::vector<double> grad_log_prob(const SoftmaxPolicy& p, std::span<const double> s, std::size_t action) {
  p.actions().check_index(action);
  // d log softmax(z)_a / dz = onehot(a) - softmax(z)
  std::vector<double> upstream = action_probs(p, s);
  for (double& v : upstream) v = -v;
  upstream[action] += 1.0;
  return p.net().backward(s, upstream).grad_params;
}

std::vector<double> grad_log_prob(const SoftmaxPolicy& p, std::span<const double> s, std::string_view label) {
  return grad_log_prob(p, s, p.actions().index_of(label));
}

void save_policy(const std::string& path, const SoftmaxPolicy& p, const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_checkpoint(out, p.net(), provenance);
  out << "actions " << p.actions().size() << '\n';
  for (const Action& a : p.actions().actions()) out << a.label << ' ' << format_double(a.value) << '\n';
}

SoftmaxPolicy load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open policy checkpoint " + path);
  DenseNet net = read_checkpoint(in);
  std::string key;
  std::size_t n = 0;
  if (!(in >> key >> n) || key != "actions") throw LoadError("policy checkpoint " + path + " lacks an action set");
  std::vector<Action> actions(n);
  for (auto& a : actions) {
    std::string value;
    if (!(in >> a.label >> value)) throw LoadError("truncated action set in " + path);
    a.value = parse_double(value, "action value");
  }
  try {
    return SoftmaxPolicy(std::move(net), ActionSet(std::move(actions)));
  } catch (const Error& e) {
    throw LoadError(std::string("policy checkpoint ") + path + ": " + e.what());
  }
}

}  // namespace lrcert
