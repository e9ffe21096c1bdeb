#pragma once

#include <complex>
#include <limits>

#include "reflectlab/wiener_hopf.hpp"

namespace reflectlab {

// Evaluators for the closed-form limit laws of the triplet
// (Y(infinity), Z(infinity), M(infinity)).  lambda_scale is the positive
// limit of t * exp(-gamma x) along the coupled trajectory; it is only
// needed for the laws involving M.
struct LimitLawSet {
  double gamma = 0.0;
  LadderFactorization fact;
  double lambda_scale = std::numeric_limits<double>::quiet_NaN();
};

LimitLawSet make_limit_laws(const LevyModel& model,
                            double lambda_scale = std::numeric_limits<double>::quiet_NaN());

// E[exp(-v Z(inf))] = gamma/(gamma+v) * phi(v)/phi(0).
double z_inf_laplace(const LimitLawSet& laws, double v);

// P(Z(inf) > x), evaluated term by term from the hyperexponential tail of
// nu_H.  Throws "divergent-tail" if a pole does not exceed gamma.
double z_inf_tail(const LimitLawSet& laws, double x);

// P(Z(inf) = 0) = gamma * m / phi(0): the creeping mass.
double z_inf_atom(const LimitLawSet& laws);

// E[exp(-u Y(inf))] = phi(0)/phi(u).
double y_inf_laplace(const LimitLawSet& laws, double u);

// E[exp(-u Y(inf) - v Z(inf))]; factorizes exactly into the marginals.
double joint_yz_laplace(const LimitLawSet& laws, double u, double v);

// P(M(inf) < z) = exp(-ell C_gamma phi_hat(gamma) lambda e^{-gamma z}).
double gumbel_cdf(const LimitLawSet& laws, double z);

// Fourier-Laplace transform of the triple limit law:
// (gamma/(gamma+v)) (phi(v)/phi(u)) Gamma(1 - i beta/gamma)
//   * exp(i beta/gamma * log(lambda ell C_gamma phi_hat(gamma))).
std::complex<double> triple_transform(const LimitLawSet& laws, double u, double v,
                                      double beta);

// P(T(x) < T_hat(z)) ~ C_gamma e^{-gamma x} (1 - E[e^{gamma X(T_hat(z))}]).
// The inner expectation is exact (= e^{-gamma z}) for models that cross
// downward continuously, and Monte Carlo otherwise.
double two_sided_exit_asym(const LimitLawSet& laws, const LevyModel& model, double x,
                           double z);

// E[e^{-u K(x)}; T(x) < T_hat(z)] ~ C(u) e^{-gamma x} (1 - E[e^{gamma X(T_hat(z))}])
// with C(u) = gamma/(gamma+u) * phi(u)/phi(0) * C_gamma.
double overshoot_exit_asym(const LimitLawSet& laws, const LevyModel& model, double u,
                           double x, double z);

// int_0^inf q e^{-qx} E^(gamma)[e^{-u K(x)}] dx
//   = q/phi(q-gamma) * (phi(q-gamma) - phi(u-gamma))/(q-u),
// with the q = u limit taken analytically.
double tilted_overshoot_transform(const LimitLawSet& laws, double q, double u);

// Inverted tail P(Z(inf) > x) via the Stehfest machinery (for KS testing).
double z_inf_tail_inverted(const LimitLawSet& laws, double x);

// Inverted tail P(Y(inf) > x).
double y_inf_tail_inverted(const LimitLawSet& laws, double x);

}  // namespace reflectlab
