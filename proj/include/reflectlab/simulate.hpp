#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reflectlab/levy_model.hpp"
#include "reflectlab/philox.hpp"
#include "reflectlab/stats.hpp"

namespace reflectlab {

// One Monte Carlo experiment.  `t` and `x` are the running time and the
// level of the maximum functional M(t,x); the overshoot functionals use the
// level x + y_offset.  `horizon` caps the search for tau; `step` is the
// Euler grid spacing used when the model has a diffusion component.
struct SimConfig {
  double t = 100.0;
  double x = 10.0;
  double y_offset = 0.0;
  long long n = 1000;
  std::uint64_t seed = 1;
  double step = 1e-3;
  double horizon = 1000.0;
};

void validate(const LevyModel& model, const SimConfig& cfg);

// One draw of the functional triplet.  z and tau are absent (not zero) when
// the first passage over x + y_offset did not occur before the horizon.
// weight is the importance-sampling likelihood ratio, 1 under the nominal
// measure.  straddle flags whether t and the recorded tau fall inside the
// same excursion of Y away from zero.
struct FunctionalSample {
  double y_t = 0.0;
  std::optional<double> z;
  double m = 0.0;
  std::optional<double> tau;
  bool straddle = false;
  double weight = 1.0;
};

// Deterministic in (model, cfg, index): the randomness comes from a
// counter-based generator keyed on (cfg.seed, index), so samples are
// reproducible and independent across indices no matter how the index range
// is partitioned across workers.
FunctionalSample sample_functionals(const LevyModel& model, const SimConfig& cfg,
                                    long long index);

// Samples indices [index_begin, index_begin + count); workers only affect
// speed.
std::vector<FunctionalSample> sample_many(const LevyModel& model, const SimConfig& cfg,
                                          long long index_begin, long long count,
                                          int workers);

// Threshold grid for the joint counts P(Y(t) > a, Z > b, M <= c).
struct JointThresholds {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
};

// Joint and marginal counts over the samples with an observed overshoot
// (tau <= horizon); estimators of the limit laws condition on that event.
struct JointCounts {
  JointThresholds thresholds;
  long long n = 0;
  std::vector<long long> joint;   // [ia][ib][ic], c-fastest
  std::vector<long long> yz;      // [ia][ib]
  std::vector<long long> y_gt, z_gt, m_le;

  void merge(const JointCounts& other);
};

struct MonteCarloResult {
  EmpiricalDistribution y_t;  // zeros split into the atom
  EmpiricalDistribution z;    // conditional on observed crossing
  EmpiricalDistribution m;
  long long n_total = 0;
  long long n_z_observed = 0;
  long long n_straddle = 0;
  JointCounts joint;

  void merge(const MonteCarloResult& other);
};

// Aggregates sample_functionals over index range [index_begin, index_begin+n).
// Worker count affects speed only; the result is a pure function of
// (model, cfg, grid).
MonteCarloResult monte_carlo(const LevyModel& model, const SimConfig& cfg,
                             const JointThresholds* grid = nullptr, int workers = 1,
                             long long index_begin = 0);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Unbiased estimate of P(T(x) < T_hat(z)) for the raw process X by
// simulation under the Cramer measure: paths reaching x before -z carry
// weight exp(-gamma X(T(x))).  The tilt gives bounded relative error in x.
// By convention x = 0 returns exactly 1 (immediate crossing for models with
// upward jump activity).
Estimate importance_sample_exit(const LevyModel& model, double x, double z,
                                long long n, std::uint64_t seed, int workers = 1);

// Probability that t and tau(x) fall inside the same excursion of Y away
// from zero.  Exact-path models only (sigma must be 0); throws
// "unsupported-model" otherwise.
Estimate straddle_probability(const LevyModel& model, double t, double x,
                              long long n, std::uint64_t seed, int workers = 1);

// First-passage overshoots K(level) = X(T(level)) - level of the raw process
// at each of the given ascending levels, from a single path.  The caller is
// responsible for choosing a model that drifts upward (e.g. a tilted one).
void raw_overshoots_at_levels(const LevyModel& model, const std::vector<double>& levels,
                              double step, Philox& rng, std::vector<double>& out);

// Position X(T_hat(z)) at the first passage below -z under the given model.
double raw_down_crossing_position(const LevyModel& model, double z, double step,
                                  Philox& rng);

// Supremum of the raw path X over [0, t]; used by the duality check
// law(Y(t)) = law(sup_{s<=t} X(s)).
double raw_running_sup(const LevyModel& model, double t, double step, Philox& rng);

}  // namespace reflectlab
