#pragma once

#include <complex>
#include <vector>

#include "reflectlab/levy_model.hpp"

namespace reflectlab {

// One hyperexponential term of a ladder-height Levy measure:
// nu_bar(x) = sum_i weight_i * exp(-pole_i * x).
struct JumpTerm {
  double weight;
  double pole;
};

// Laplace exponent of a (possibly killed) subordinator whose underlying
// model has a rational cumulant: value(u) = c * prod(u + roots) / prod(u + poles).
// `roots` are nonnegative (an entry 0 marks a factor vanishing at the
// origin, i.e. no killing); `poles` are strictly positive.  The equivalent
// killing/drift/jump decomposition is kept alongside the product form.
struct RationalBernstein {
  double normalization_c = 1.0;
  std::vector<double> roots;
  std::vector<double> poles;

  double killing = 0.0;               // value at 0
  double drift = 0.0;                 // lim value(u)/u as u -> infinity
  std::vector<JumpTerm> jump_terms;   // hyperexponential Levy measure tail

  double value(double u) const;
  std::complex<double> value(std::complex<double> u) const;
  // Derivative of the product form; exact at simple roots.
  double derivative(double u) const;
};

// Wiener-Hopf pair (phi, phi_hat) with -psi(theta) = k phi(-theta) phi_hat(theta).
// Individual factor values depend on the local-time normalization convention
// (both factors carry normalization_c = 1, k absorbs the rest); exported
// quantities (c_gamma, ell * phi_hat(gamma), ratios of phi values) do not.
struct LadderFactorization {
  RationalBernstein ascending;    // phi, ladder heights of X
  RationalBernstein descending;   // phi_hat, ladder heights of -X
  double k = 0.0;
  double gamma = 0.0;
  double c_gamma = 0.0;           // phi(0) / (gamma * phi'(-gamma))
  double ell = 0.0;               // 1 / E[L_hat^{-1}(1)], from Wald's identity
};

// Factorizes -psi into ascending/descending ladder exponents by computing
// all real roots and poles of the rational function, assigning the root at
// zero plus the negative roots/poles to the descending factor and the
// positive ones to the ascending factor.  Throws Error
// "factorization-failure" when a factor fails its Bernstein validation.
LadderFactorization wh_factorize(const LevyModel& model, const CramerData& cramer);

// ell = |E[X(1)]| / E[H_hat(1)] with E[H_hat(1)] = phi_hat'(0); also stored
// in fact.ell.  The combination ell * phi_hat(gamma) is normalization-free.
double ell_via_wald(const LevyModel& model, LadderFactorization& fact);

// Tail of the ascending ladder-height Levy measure at x >= 0.
double nu_h_tail(const LadderFactorization& fact, double x);

}  // namespace reflectlab
