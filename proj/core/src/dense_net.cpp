#include "lrcert/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lrcert/errors.hpp"
#include "lrcert/text.hpp"

namespace lrcert {

namespace {

constexpr const char* kCheckpointTag = "lrcert-dense";
constexpr int kCheckpointVersion = 1;

void validate_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw ShapeError("network needs at least an input and an output layer");
  for (std::size_t s : sizes) {
    if (s == 0) throw ShapeError("layer sizes must be positive");
  }
}

void require_same_length(std::span<const double> a, std::span<const double> b, const char* op) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(op) + ": length mismatch " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

}  // namespace

std::size_t DenseNet::param_count_for(std::span<const std::size_t> sizes) {
  std::size_t n = 0;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) n += sizes[k] * sizes[k + 1] + sizes[k + 1];
  return n;
}

DenseNet::DenseNet(std::vector<std::size_t> layer_sizes) : layer_sizes_(std::move(layer_sizes)) {
  validate_sizes(layer_sizes_);
  params_.assign(param_count_for(layer_sizes_), 0.0);
}

DenseNet::DenseNet(std::vector<std::size_t> layer_sizes, std::vector<double> params)
    : layer_sizes_(std::move(layer_sizes)) {
  validate_sizes(layer_sizes_);
  set_params(std::move(params));
}

DenseNet DenseNet::initialized(std::vector<std::size_t> layer_sizes, RandomStream& rng) {
  DenseNet net(std::move(layer_sizes));
  std::size_t offset = 0;
  for (std::size_t k = 0; k + 1 < net.layer_sizes_.size(); ++k) {
    const std::size_t fan_in = net.layer_sizes_[k];
    const std::size_t count = fan_in * net.layer_sizes_[k + 1] + net.layer_sizes_[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) net.params_[offset + i] = rng.uniform(-bound, bound);
    offset += count;
  }
  return net;
}

void DenseNet::set_params(std::vector<double> params) {
  const std::size_t expected = param_count_for(layer_sizes_);
  if (params.size() != expected) {
    throw ShapeError("expected " + std::to_string(expected) + " parameters, got " + std::to_string(params.size()));
  }
  params_ = std::move(params);
}

std::vector<double> DenseNet::forward(std::span<const double> x) const {
  if (layer_sizes_.empty() || x.size() != input_width()) {
    throw ShapeError("input width " + std::to_string(x.size()) + " does not match network input " +
                     std::to_string(layer_sizes_.empty() ? 0 : input_width()));
  }
  std::vector<double> h(x.begin(), x.end());
  std::vector<double> next;
  const double* p = params_.data();
  const std::size_t layers = layer_sizes_.size() - 1;
  for (std::size_t k = 0; k < layers; ++k) {
    const std::size_t in = layer_sizes_[k];
    const std::size_t out = layer_sizes_[k + 1];
    const double* bias = p + in * out;
    next.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = p + o * in;
      double z = bias[o];
      for (std::size_t i = 0; i < in; ++i) z += row[i] * h[i];
      next[o] = (k + 1 < layers) ? std::max(z, 0.0) : z;
    }
    p += in * out + out;
    h.swap(next);
  }
  return h;
}

GradientRecord DenseNet::backward(std::span<const double> x, std::span<const double> upstream) const {
  if (layer_sizes_.empty() || x.size() != input_width()) {
    throw ShapeError("input width " + std::to_string(x.size()) + " does not match network input");
  }
  if (upstream.size() != output_width()) {
    throw ShapeError("upstream width " + std::to_string(upstream.size()) + " does not match network output " +
                     std::to_string(output_width()));
  }
  const std::size_t layers = layer_sizes_.size() - 1;

  // Forward pass keeping every layer's post-activation values.
  std::vector<std::vector<double>> acts(layers + 1);
  std::vector<std::size_t> offsets(layers);
  acts[0].assign(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t k = 0; k < layers; ++k) {
    offsets[k] = offset;
    const std::size_t in = layer_sizes_[k];
    const std::size_t out = layer_sizes_[k + 1];
    const double* w = params_.data() + offset;
    const double* bias = w + in * out;
    acts[k + 1].assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = bias[o];
      for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * acts[k][i];
      acts[k + 1][o] = (k + 1 < layers) ? std::max(z, 0.0) : z;
    }
    offset += in * out + out;
  }

  GradientRecord rec;
  rec.value = acts[layers];
  rec.grad_params.assign(params_.size(), 0.0);

  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> prev;
  for (std::size_t k = layers; k-- > 0;) {
    const std::size_t in = layer_sizes_[k];
    const std::size_t out = layer_sizes_[k + 1];
    if (k + 1 < layers) {
      // Hidden layer: gate by the ReLU derivative (0 at the kink).
      for (std::size_t o = 0; o < out; ++o) {
        if (acts[k + 1][o] <= 0.0) delta[o] = 0.0;
      }
    }
    const double* w = params_.data() + offsets[k];
    double* gw = rec.grad_params.data() + offsets[k];
    double* gb = gw + in * out;
    prev.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] = d;
      for (std::size_t i = 0; i < in; ++i) {
        gw[o * in + i] = d * acts[k][i];
        prev[i] += w[o * in + i] * d;
      }
    }
    delta.swap(prev);
  }
  rec.grad_input = std::move(delta);
  return rec;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidInputError("softmax of an empty vector");
  for (double v : logits) {
    if (!std::isfinite(v)) throw InvalidInputError("softmax logits must be finite");
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grad, double rate) {
  require_same_length(params, grad, "sgd_step");
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) out[i] = params[i] - rate * grad[i];
  return out;
}

std::vector<double> adam_step(std::span<const double> params, std::span<const double> grad, double rate,
                              AdamState& state) {
  require_same_length(params, grad, "adam_step");
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;
  if (state.steps == 0) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw ShapeError("adam_step: state does not match the parameter count");
  ++state.steps;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.steps));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.steps));
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    out[i] = params[i] - rate * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + eps);
  }
  return out;
}

std::vector<double> soft_replace(std::span<const double> target, std::span<const double> online, double tau) {
  require_same_length(target, online, "soft_replace");
  std::vector<double> out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) out[i] = (1.0 - tau) * target[i] + tau * online[i];
  return out;
}

void write_checkpoint(std::ostream& out, const DenseNet& net, const std::string& provenance) {
  if (!provenance.empty()) out << "# " << provenance << '\n';
  out << kCheckpointTag << ' ' << kCheckpointVersion << '\n';
  out << "layers " << net.layer_sizes().size();
  for (std::size_t s : net.layer_sizes()) out << ' ' << s;
  out << '\n' << "params " << net.param_count() << '\n';
  for (double v : net.params()) out << format_double(v) << '\n';
}

DenseNet read_checkpoint(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && (line.empty() || line.front() == '#')) {
  }
  std::istringstream header(line);
  std::string tag;
  int version = 0;
  if (!(header >> tag >> version) || tag != kCheckpointTag) throw LoadError("not a dense-network checkpoint");
  if (version != kCheckpointVersion) throw LoadError("unsupported checkpoint version " + std::to_string(version));

  std::string key;
  std::size_t n = 0;
  if (!(in >> key >> n) || key != "layers" || n < 2) throw LoadError("malformed checkpoint layer header");
  std::vector<std::size_t> sizes(n);
  for (auto& s : sizes) {
    if (!(in >> s)) throw LoadError("truncated checkpoint layer sizes");
  }
  std::size_t count = 0;
  if (!(in >> key >> count) || key != "params") throw LoadError("malformed checkpoint parameter header");
  if (count != DenseNet::param_count_for(sizes)) throw LoadError("checkpoint parameter count does not match layers");
  std::vector<double> params(count);
  for (auto& p : params) {
    std::string token;
    if (!(in >> token)) throw LoadError("truncated checkpoint parameters");
    p = parse_double(token, "checkpoint parameter");
  }
  return DenseNet(std::move(sizes), std::move(params));
}

void save_checkpoint(const std::string& path, const DenseNet& net, const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_checkpoint(out, net, provenance);
}

DenseNet load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace lrcert
