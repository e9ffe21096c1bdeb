#pragma once

#include <map>
#include <string>
#include <vector>

#include "reflectlab/levy_model.hpp"
#include "reflectlab/simulate.hpp"

namespace reflectlab {

// Flat `key = value` configuration ('#' starts a comment).  Keys are dotted
// paths, e.g. model.drift or sim.n; lists are comma-separated.
struct KeyValues {
  std::map<std::string, std::string> values;
  std::string path;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  std::vector<double> get_list(const std::string& key) const;
};

KeyValues parse_config_file(const std::string& path);
KeyValues parse_config_text(const std::string& text, const std::string& label);

// model.drift, model.sigma, model.up.rate, model.up.alpha,
// model.down.rate, model.down.beta.
LevyModel model_from_config(const KeyValues& kv);

// sim.t, sim.x, sim.y_offset, sim.n, sim.seed, sim.step, sim.horizon.
SimConfig sim_from_config(const KeyValues& kv);

// grid.lambda and grid.x_list drive the coupled-trajectory experiments:
// t is always recomputed as lambda * exp(gamma x), never user-supplied.
struct GridSpec {
  double lambda = 0.0;
  bool has_lambda = false;
  std::vector<double> x_list;
};

GridSpec grid_from_config(const KeyValues& kv);

}  // namespace reflectlab
