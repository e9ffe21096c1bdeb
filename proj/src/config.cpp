#include "reflectlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reflectlab/error.hpp"

namespace reflectlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0')
    throw Error("invalid-config", "config key '" + key + "' is not a number: " + raw);
  return v;
}

}  // namespace

bool KeyValues::has(const std::string& key) const { return values.count(key) > 0; }

std::string KeyValues::get_string(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end())
    throw Error("invalid-config", "missing config key '" + key + "' in " + path);
  return it->second;
}

double KeyValues::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double KeyValues::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValues::get_int(const std::string& key) const {
  const std::string raw = get_string(key);
  char* end = nullptr;
  const long long v = std::strtoll(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0')
    throw Error("invalid-config", "config key '" + key + "' is not an integer: " + raw);
  return v;
}

long long KeyValues::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValues::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

KeyValues parse_config_text(const std::string& text, const std::string& label) {
  KeyValues kv;
  kv.path = label;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("invalid-config", label + ":" + std::to_string(lineno) +
                                        ": expected 'key = value', got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error("invalid-config",
                  label + ":" + std::to_string(lineno) + ": empty key");
    kv.values[key] = value;
  }
  return kv;
}

KeyValues parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

LevyModel model_from_config(const KeyValues& kv) {
  std::optional<JumpComponent> up, down;
  if (kv.has("model.up.rate") || kv.has("model.up.alpha"))
    up = JumpComponent{kv.get_double("model.up.rate"), kv.get_double("model.up.alpha")};
  if (kv.has("model.down.rate") || kv.has("model.down.beta"))
    down =
        JumpComponent{kv.get_double("model.down.rate"), kv.get_double("model.down.beta")};
  return make_model(kv.get_double("model.drift"), kv.get_double_or("model.sigma", 0.0),
                    up, down);
}

SimConfig sim_from_config(const KeyValues& kv) {
  SimConfig cfg;
  cfg.t = kv.get_double_or("sim.t", cfg.t);
  cfg.x = kv.get_double_or("sim.x", cfg.x);
  cfg.y_offset = kv.get_double_or("sim.y_offset", cfg.y_offset);
  cfg.n = kv.get_int_or("sim.n", cfg.n);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int_or("sim.seed", 1));
  cfg.step = kv.get_double_or("sim.step", cfg.step);
  cfg.horizon = kv.get_double_or("sim.horizon", std::max(cfg.t, cfg.horizon));
  return cfg;
}

GridSpec grid_from_config(const KeyValues& kv) {
  GridSpec grid;
  if (kv.has("grid.lambda")) {
    grid.lambda = kv.get_double("grid.lambda");
    grid.has_lambda = true;
    if (!(grid.lambda > 0.0))
      throw Error("invalid-config", "grid.lambda must be positive");
  }
  if (kv.has("grid.x_list")) {
    grid.x_list = kv.get_list("grid.x_list");
    if (grid.x_list.empty())
      throw Error("invalid-config", "grid.x_list must not be empty");
  }
  return grid;
}

}  // namespace reflectlab
