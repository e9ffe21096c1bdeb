#pragma once

#include <complex>
#include <optional>

namespace reflectlab {

// One compound-Poisson component with Exp(decay) jump sizes arriving at
// `rate` per unit time.  Used for both the upward and the (negated) downward
// jump parts of the model.
struct JumpComponent {
  double rate;
  double decay;
};

// Levy process X(t) = drift*t + sigma*W(t) + upward jumps - downward jumps.
// The family is drift + Brownian + two-sided exponential jumps, which keeps
// the cumulant exponent rational and every downstream quantity computable in
// closed form.  Construct through make_model(), which rejects degenerate
// parameterisations (a pure-drift process has no reflection dynamics to
// speak of and violates the non-lattice requirement).
struct LevyModel {
  double drift = 0.0;
  double sigma = 0.0;
  std::optional<JumpComponent> up;
  std::optional<JumpComponent> down;

  bool has_up() const noexcept { return up.has_value(); }
  bool has_down() const noexcept { return down.has_value(); }
  // X can move upward through drift, diffusion or up-jumps.
  bool upward_capable() const noexcept {
    return sigma > 0.0 || has_up() || drift > 0.0;
  }
};

// Cramer data of a model: the positive root gamma of psi, the mean of X(1)
// and the upper boundary of psi's domain.  psi_prime_gamma is kept as a
// conditioning diagnostic (it is also the mean of X(1) under the tilted
// measure).
struct CramerData {
  double gamma;
  double mean_x1;
  double theta_max;
  double psi_prime_gamma;
};

LevyModel make_model(double drift, double sigma,
                     std::optional<JumpComponent> up = std::nullopt,
                     std::optional<JumpComponent> down = std::nullopt);

// Upper boundary of the domain of psi (the up-jump decay, or +infinity).
double theta_max(const LevyModel& model);

// Cumulant exponent psi(theta) = log E[exp(theta X(1))].
double psi(const LevyModel& model, double theta);
std::complex<double> psi(const LevyModel& model, std::complex<double> theta);
double psi_derivative(const LevyModel& model, double theta);

double mean_x1(const LevyModel& model);

// Positive root of psi, located by geometric bracketing and bisection to
// |psi| <= 1e-12, then polished by Newton steps.  Throws Error
// "no-cramer-root" when the mean is nonnegative or no root exists.
CramerData cramer_gamma(const LevyModel& model);

// Model of X under the exponentially tilted measure P^(gamma):
//   drift   -> drift + sigma^2 * gamma
//   up      -> (rate * decay / (decay - gamma), decay - gamma)
//   down    -> (rate * decay / (decay + gamma), decay + gamma)
// gamma may be any point of psi's domain; gamma = 0 is the identity.
LevyModel esscher_tilt(const LevyModel& model, double gamma);

}  // namespace reflectlab
