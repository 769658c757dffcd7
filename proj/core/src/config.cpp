#include "adaptsel/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adaptsel/errors.hpp"

namespace adaptsel {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

double as_real(const json& v, const char* key) {
  if (!v.is_number()) bad(std::string(key) + " must be a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const char* key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<std::int64_t>(d);
  }
  bad(std::string(key) + " must be an integer");
}

std::uint64_t as_u64(const json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const std::int64_t i = as_int(v, key);
  if (i < 0) bad(std::string(key) + " must be non-negative");
  return static_cast<std::uint64_t>(i);
}

bool as_bool(const json& v, const char* key) {
  if (!v.is_boolean()) bad(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

}  // namespace

SimConfig parse_sim_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be a JSON object");

  SimConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "inspection_rate") cfg.inspection_rate = as_real(value, key.c_str());
    else if (key == "warmup_weeks") cfg.warmup_weeks = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "validation_window_weeks") cfg.validation_window_weeks = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "arm_step") cfg.arm_step = as_real(value, key.c_str());
    else if (key == "num_arms") cfg.num_arms = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "eta") cfg.eta = as_real(value, key.c_str());
    else if (key == "epsilon") cfg.epsilon = as_real(value, key.c_str());
    else if (key == "alpha") cfg.alpha = as_real(value, key.c_str());
    else if (key == "gamma") cfg.gamma = as_real(value, key.c_str());
    else if (key == "window_halfwidth") cfg.window_halfwidth = as_real(value, key.c_str());
    else if (key == "bootstrap_sample") cfg.bootstrap_sample = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "bootstrap_repeats") cfg.bootstrap_repeats = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "embed_dim") cfg.embed_dim = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "retrain_every_weeks") cfg.retrain_every_weeks = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "seed") cfg.seed = as_u64(value, key.c_str());
    else if (key == "runs") cfg.runs = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "moving_avg_weeks") cfg.moving_avg_weeks = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "reward_sign") cfg.reward_sign = static_cast<int>(as_int(value, key.c_str()));
    else if (key == "mean_includes_current") cfg.mean_includes_current = as_bool(value, key.c_str());
    else if (key == "feedback_raw_precision") cfg.feedback_raw_precision = as_bool(value, key.c_str());
    else bad("unknown key \"" + key + "\"");
  }

  validate(cfg);
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str());
}

void validate(const SimConfig& cfg) {
  if (!(cfg.inspection_rate > 0.0) || cfg.inspection_rate > 1.0)
    bad("inspection_rate must be in (0, 1]");
  if (cfg.warmup_weeks < 1) bad("warmup_weeks must be >= 1");
  if (cfg.validation_window_weeks < 1) bad("validation_window_weeks must be >= 1");
  if (!(cfg.arm_step > 0.0) || cfg.arm_step > 1.0) bad("arm_step must be in (0, 1]");
  if (cfg.num_arms < 2) bad("num_arms must be >= 2");
  // The grid must be exactly {0, arm_step, ..., 1}.
  if (std::abs((cfg.num_arms - 1) * cfg.arm_step - 1.0) > 1e-9)
    bad("num_arms and arm_step must satisfy (num_arms - 1) * arm_step == 1");
  if (!(cfg.eta > 0.0)) bad("eta must be positive");
  if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0) bad("epsilon must be in [0, 1]");
  if (cfg.alpha < 0.0) bad("alpha must be non-negative");
  if (!(cfg.gamma > 0.0) || cfg.gamma > 1.0) bad("gamma must be in (0, 1]");
  if (!(cfg.window_halfwidth > 0.0) || cfg.window_halfwidth > 1.0)
    bad("window_halfwidth must be in (0, 1]");
  if (cfg.bootstrap_sample < 1) bad("bootstrap_sample must be >= 1");
  if (cfg.bootstrap_repeats < 1) bad("bootstrap_repeats must be >= 1");
  if (cfg.embed_dim < 4) bad("embed_dim must be >= 4");
  if (cfg.retrain_every_weeks < 1) bad("retrain_every_weeks must be >= 1");
  if (cfg.runs < 1) bad("runs must be >= 1");
  if (cfg.moving_avg_weeks < 1) bad("moving_avg_weeks must be >= 1");
  if (cfg.reward_sign != 1 && cfg.reward_sign != -1)
    bad("reward_sign must be +1 or -1");
}

std::string to_json_string(const SimConfig& cfg) {
  json j;
  j["inspection_rate"] = cfg.inspection_rate;
  j["warmup_weeks"] = cfg.warmup_weeks;
  j["validation_window_weeks"] = cfg.validation_window_weeks;
  j["arm_step"] = cfg.arm_step;
  j["num_arms"] = cfg.num_arms;
  j["eta"] = cfg.eta;
  j["epsilon"] = cfg.epsilon;
  j["alpha"] = cfg.alpha;
  j["gamma"] = cfg.gamma;
  j["window_halfwidth"] = cfg.window_halfwidth;
  j["bootstrap_sample"] = cfg.bootstrap_sample;
  j["bootstrap_repeats"] = cfg.bootstrap_repeats;
  j["embed_dim"] = cfg.embed_dim;
  j["retrain_every_weeks"] = cfg.retrain_every_weeks;
  j["seed"] = cfg.seed;
  j["runs"] = cfg.runs;
  j["moving_avg_weeks"] = cfg.moving_avg_weeks;
  j["reward_sign"] = cfg.reward_sign;
  j["mean_includes_current"] = cfg.mean_includes_current;
  j["feedback_raw_precision"] = cfg.feedback_raw_precision;
  return j.dump(2);
}

}  // namespace adaptsel
