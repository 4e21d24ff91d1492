#include "lrcert/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lrcert/errors.hpp"
#include "lrcert/text.hpp"

namespace lrcert {

namespace {

using nlohmann::json;

// One entry per config key: how to write it and how to read it back.
struct Field {
  std::function<json(const RunConfig&)> get;
  std::function<void(RunConfig&, const json&)> set;
};

template <typename T>
T as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type or value: " + v.dump());
  }
}

template <typename T>
std::vector<T> as_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& item : v) out.push_back(as<T>(item, key));
  return out;
}

#define LRCERT_FIELD(key, member, type)                                    \
  {                                                                        \
    key, Field {                                                           \
      [](const RunConfig& c) { return json(c.member); },                   \
          [](RunConfig& c, const json& v) { c.member = as<type>(v, key); } \
    }                                                                      \
  }

#define LRCERT_LIST(key, member, type)                                          \
  {                                                                             \
    key, Field {                                                                \
      [](const RunConfig& c) { return json(c.member); },                        \
          [](RunConfig& c, const json& v) { c.member = as_list<type>(v, key); } \
    }                                                                           \
  }

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      LRCERT_FIELD("environment", environment, std::string),
      LRCERT_FIELD("cartpole_cart_mass", cartpole.cart_mass, double),
      LRCERT_FIELD("cartpole_pole_mass", cartpole.pole_mass, double),
      LRCERT_FIELD("cartpole_half_length", cartpole.half_length, double),
      LRCERT_FIELD("cartpole_gravity", cartpole.gravity, double),
      LRCERT_FIELD("cartpole_dt", cartpole.dt, double),
      LRCERT_LIST("cartpole_forces", cartpole.forces, double),
      LRCERT_FIELD("cartpole_init_x_range", cartpole.init_x_range, double),
      LRCERT_FIELD("cartpole_init_other_range", cartpole.init_other_range, double),
      LRCERT_FIELD("cartpole_theta_threshold", cartpole.theta_threshold, double),
      LRCERT_FIELD("cartpole_max_steps", cartpole.max_steps, std::size_t),
      LRCERT_FIELD("linear_a", linear.a, double),
      LRCERT_FIELD("linear_w_std", linear.w_std, double),
      LRCERT_LIST("linear_inputs", linear.inputs, double),
      LRCERT_FIELD("linear_init_range", linear.init_range, double),
      LRCERT_FIELD("M", M, std::size_t),
      LRCERT_FIELD("T", T, std::size_t),
      LRCERT_FIELD("learning_rate", learning_rate, double),
      LRCERT_FIELD("value_learning_rate", value_learning_rate, double),
      LRCERT_FIELD("soft_replacement_tau", soft_replacement_tau, double),
      LRCERT_FIELD("alpha3", alpha3, double),
      LRCERT_FIELD("epsilon", epsilon, double),
      LRCERT_FIELD("sigma", sigma, double),
      LRCERT_FIELD("c_bar", c_bar, double),
      LRCERT_FIELD("value_discount", value_discount, double),
      LRCERT_FIELD("mixing_gamma", mixing_gamma, double),
      LRCERT_FIELD("bias_b_bar", bias_b_bar, double),
      LRCERT_LIST("lyapunov_layers", lyapunov_layers, std::size_t),
      LRCERT_LIST("policy_layers", policy_layers, std::size_t),
      {"algorithm", Field{[](const RunConfig& c) { return json(to_string(c.algorithm)); },
                          [](RunConfig& c, const json& v) {
                            const auto name = as<std::string>(v, "algorithm");
                            if (name == "l-reinforce") {
                              c.algorithm = Algorithm::l_reinforce;
                            } else if (name == "reinforce") {
                              c.algorithm = Algorithm::reinforce;
                            } else {
                              throw ConfigError("config key 'algorithm' must be \"l-reinforce\" or \"reinforce\"");
                            }
                          }}},
      LRCERT_FIELD("baseline", baseline, bool),
      {"policy_optimizer", Field{[](const RunConfig& c) { return json(to_string(c.policy_optimizer)); },
                                 [](RunConfig& c, const json& v) {
                                   const auto name = as<std::string>(v, "policy_optimizer");
                                   if (name == "sgd") {
                                     c.policy_optimizer = Optimizer::sgd;
                                   } else if (name == "adam") {
                                     c.policy_optimizer = Optimizer::adam;
                                   } else {
                                     throw ConfigError("config key 'policy_optimizer' must be \"sgd\" or \"adam\"");
                                   }
                                 }}},
      LRCERT_FIELD("seed", seed, std::uint64_t),
      LRCERT_FIELD("iterations", iterations, std::size_t),
      LRCERT_FIELD("threads", threads, std::size_t),
      LRCERT_FIELD("output_dir", output_dir, std::string),
  };
  return table;
}

#undef LRCERT_FIELD
#undef LRCERT_LIST

}  // namespace

EnvSpec RunConfig::env_spec() const {
  if (environment == "cartpole") return EnvSpec(cartpole);
  if (environment == "linear") return EnvSpec(linear);
  throw ConfigError("config key 'environment' must be \"cartpole\" or \"linear\", got \"" + environment + "\"");
}

std::vector<std::size_t> RunConfig::lyapunov_sizes() const {
  std::vector<std::size_t> sizes{env_spec().state_dim()};
  sizes.insert(sizes.end(), lyapunov_layers.begin(), lyapunov_layers.end());
  return sizes;
}

std::vector<std::size_t> RunConfig::policy_sizes() const {
  std::vector<std::size_t> sizes{env_spec().state_dim()};
  sizes.insert(sizes.end(), policy_layers.begin(), policy_layers.end());
  return sizes;
}

void RunConfig::validate() const {
  EnvSpec env;
  try {
    env = env_spec();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid environment parameters: ") + e.what());
  }
  auto require = [](bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ConfigError("config key '" + key + "' " + why);
  };
  require(M >= 1, "M", "must be at least 1");
  require(T >= 1, "T", "must be at least 1");
  require(learning_rate > 0.0, "learning_rate", "must be positive");
  require(value_learning_rate > 0.0, "value_learning_rate", "must be positive");
  require(soft_replacement_tau >= 0.0 && soft_replacement_tau <= 1.0, "soft_replacement_tau", "must lie in [0, 1]");
  require(alpha3 > 0.0, "alpha3", "must be positive");
  require(epsilon > 0.0, "epsilon", "must be positive");
  require(sigma > 0.0, "sigma", "must be positive");
  require(c_bar > 0.0, "c_bar", "must be positive");
  require(value_discount > 0.0 && value_discount < 1.0, "value_discount", "must lie in (0, 1)");
  require(mixing_gamma > 0.0 && mixing_gamma < 1.0, "mixing_gamma", "must lie in (0, 1)");
  require(!lyapunov_layers.empty() && lyapunov_layers.back() == 1, "lyapunov_layers", "must end in a width-1 output");
  require(!policy_layers.empty() && policy_layers.back() == env.actions().size(), "policy_layers",
          "must end in one logit per action (" + std::to_string(env.actions().size()) + ")");
  for (std::size_t w : lyapunov_layers) require(w > 0, "lyapunov_layers", "widths must be positive");
  for (std::size_t w : policy_layers) require(w > 0, "policy_layers", "widths must be positive");
  require(threads >= 1, "threads", "must be at least 1");
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig config;
  for (const auto& [key, value] : doc.items()) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second.set(config, value);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
  json doc = json::object();
  for (const auto& [key, field] : fields()) doc[key] = field.get(config);
  return doc.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  // Where the run writes and how many threads it uses do not change results.
  json doc = json::object();
  for (const auto& [key, field] : fields()) {
    if (key != "output_dir" && key != "threads") doc[key] = field.get(config);
  }
  return hex64(fnv1a64(doc.dump()));
}

std::string provenance(const RunConfig& config) {
  return "config_hash=" + config_hash(config) + " seed=" + std::to_string(config.seed);
}

std::string to_string(Algorithm a) { return a == Algorithm::l_reinforce ? "l-reinforce" : "reinforce"; }

std::string to_string(Optimizer o) { return o == Optimizer::sgd ? "sgd" : "adam"; }

}  // namespace lrcert
