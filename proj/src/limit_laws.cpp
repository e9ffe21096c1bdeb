#include "reflectlab/limit_laws.hpp"

#include <cmath>

#include "reflectlab/error.hpp"
#include "reflectlab/numerics.hpp"
#include "reflectlab/simulate.hpp"

namespace reflectlab {

namespace {

double phi(const LimitLawSet& laws, double u) { return laws.fact.ascending.value(u); }

double gumbel_rate_constant(const LimitLawSet& laws) {
  if (!(laws.lambda_scale > 0.0))
    throw Error("invalid-config",
                "lambda_scale must be set (and positive) for laws involving M");
  const double phihat_gamma = laws.fact.descending.value(laws.gamma);
  return laws.fact.ell * laws.fact.c_gamma * phihat_gamma * laws.lambda_scale;
}

}  // namespace

LimitLawSet make_limit_laws(const LevyModel& model, double lambda_scale) {
  const CramerData cramer = cramer_gamma(model);
  LimitLawSet laws;
  laws.gamma = cramer.gamma;
  laws.fact = wh_factorize(model, cramer);
  laws.lambda_scale = lambda_scale;
  return laws;
}

double z_inf_laplace(const LimitLawSet& laws, double v) {
  if (!(v >= 0.0)) throw Error("invalid-config", "z_inf_laplace needs v >= 0");
  const double g = laws.gamma;
  return g / (g + v) * phi(laws, v) / phi(laws, 0.0);
}

double z_inf_tail(const LimitLawSet& laws, double x) {
  if (!(x >= 0.0)) throw Error("invalid-config", "z_inf_tail needs x >= 0");
  const double g = laws.gamma;
  double sum = 0.0;
  for (const auto& term : laws.fact.ascending.jump_terms) {
    if (!(term.pole > g))
      throw Error("divergent-tail",
                  "nu_H pole " + std::to_string(term.pole) + " does not exceed gamma");
    sum += term.weight * std::exp(-term.pole * x) / (term.pole - g);
  }
  return g / phi(laws, 0.0) * sum;
}

double z_inf_atom(const LimitLawSet& laws) {
  return laws.gamma * laws.fact.ascending.drift / phi(laws, 0.0);
}

double y_inf_laplace(const LimitLawSet& laws, double u) {
  if (!(u >= 0.0)) throw Error("invalid-config", "y_inf_laplace needs u >= 0");
  return phi(laws, 0.0) / phi(laws, u);
}

double joint_yz_laplace(const LimitLawSet& laws, double u, double v) {
  return y_inf_laplace(laws, u) * z_inf_laplace(laws, v);
}

double gumbel_cdf(const LimitLawSet& laws, double z) {
  return std::exp(-gumbel_rate_constant(laws) * std::exp(-laws.gamma * z));
}

std::complex<double> triple_transform(const LimitLawSet& laws, double u, double v,
                                      double beta) {
  const std::complex<double> i(0.0, 1.0);
  const double g = laws.gamma;
  const std::complex<double> gumbel_part =
      complex_gamma(1.0 - i * beta / g) *
      std::exp(i * beta / g * std::log(gumbel_rate_constant(laws)));
  return joint_yz_laplace(laws, u, v) * gumbel_part;
}

namespace {

// E[exp(gamma X(T_hat(z)))] under the nominal measure.  Models without
// downward jumps cross -z continuously, so X(T_hat(z)) = -z exactly.
double down_crossing_transform(const LimitLawSet& laws, const LevyModel& model,
                               double z) {
  if (!model.has_down()) return std::exp(-laws.gamma * z);
  // Monte Carlo fallback; relative accuracy ~1e-3 at this sample size.
  constexpr long long kSamples = 200000;
  constexpr std::uint64_t kSeed = 0x5eed001d;
  double sum = 0.0;
  for (long long i = 0; i < kSamples; ++i) {
    Philox rng(kSeed, static_cast<std::uint64_t>(i));
    sum += std::exp(laws.gamma * raw_down_crossing_position(model, z, 1e-3, rng));
  }
  return sum / static_cast<double>(kSamples);
}

}  // namespace

double two_sided_exit_asym(const LimitLawSet& laws, const LevyModel& model, double x,
                           double z) {
  if (!(x > 0.0) || !(z > 0.0))
    throw Error("invalid-config", "two_sided_exit_asym needs x > 0 and z > 0");
  return laws.fact.c_gamma * std::exp(-laws.gamma * x) *
         (1.0 - down_crossing_transform(laws, model, z));
}

double overshoot_exit_asym(const LimitLawSet& laws, const LevyModel& model, double u,
                           double x, double z) {
  if (!(u >= 0.0)) throw Error("invalid-config", "overshoot_exit_asym needs u >= 0");
  const double g = laws.gamma;
  const double c_u = g / (g + u) * phi(laws, u) / phi(laws, 0.0) * laws.fact.c_gamma;
  return c_u * std::exp(-g * x) * (1.0 - down_crossing_transform(laws, model, z));
}

double tilted_overshoot_transform(const LimitLawSet& laws, double q, double u) {
  if (!(q > 0.0) || !(u > 0.0))
    throw Error("invalid-config", "tilted_overshoot_transform needs q, u > 0");
  const double g = laws.gamma;
  if (std::abs(q - u) < 1e-9 * std::max(1.0, std::abs(q)))
    return q * laws.fact.ascending.derivative(q - g) / phi(laws, q - g);
  return q / phi(laws, q - g) * (phi(laws, q - g) - phi(laws, u - g)) / (q - u);
}

double z_inf_tail_inverted(const LimitLawSet& laws, double x) {
  const auto tail_transform = [&](double v) {
    return (1.0 - z_inf_laplace(laws, v)) / v;
  };
  return laplace_invert_cdf(tail_transform, {x})[0];
}

double y_inf_tail_inverted(const LimitLawSet& laws, double x) {
  const auto tail_transform = [&](double u) {
    return (1.0 - y_inf_laplace(laws, u)) / u;
  };
  return laplace_invert_cdf(tail_transform, {x})[0];
}

}  // namespace reflectlab
