#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reflectlab/config.hpp"
#include "reflectlab/levy_model.hpp"

namespace reflectlab {

// Reference models used throughout the verification suite.
LevyModel cl1_model();   // drift -2, Exp(1) up-jumps at rate 1 (gamma = 1/2)
LevyModel bm1_model();   // drift -1, unit diffusion (gamma = 2)
LevyModel kou1_model();  // drift -1, unit diffusion, Exp(2) up-jumps at rate 1/2

struct Verdict {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Scale knobs for the verification suite.  Thresholds are fixed in code;
// sample sizes may be reduced for quick runs (the statistical allowances
// that depend on n, like DKW radii, are recomputed accordingly).
struct VerifyOptions {
  int workers = 2;
  std::uint64_t seed = 20260810;
  std::vector<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  long long n_overshoot = 100000;     // criterion 3, CL-1 run
  long long n_creeping = 2000;        // criterion 3, BM-1 run
  long long n_atom = 20000;           // criterion 3, KOU-1 run
  long long n_stationary = 100000;    // criterion 4
  long long n_gumbel = 100000;        // criterion 5
  long long n_independence = 50000;   // criterion 6
  long long n_exit = 100000;          // criterion 7
  long long n_tilted = 100000;        // criterion 8, per (q,u) pair
  long long n_straddle = 100000;      // criterion 9, per grid point

  // Diagnostic knob: override a verdict's threshold by name.
  std::map<std::string, double> threshold_overrides;
};

VerifyOptions verify_options_from_config(const KeyValues& kv);

// Runs the statistical verification suite (criteria 1-9; the worker
// invariance criterion is exercised end-to-end through the CLI).  The
// result is a pure function of the options: worker count changes nothing.
std::vector<Verdict> run_verify_suite(const VerifyOptions& options);

}  // namespace reflectlab
