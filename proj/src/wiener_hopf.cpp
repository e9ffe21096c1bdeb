#include "reflectlab/wiener_hopf.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "reflectlab/error.hpp"

namespace reflectlab {

namespace {

template <typename T>
T product_value(const RationalBernstein& f, T u) {
  T num = T(f.normalization_c);
  for (double r : f.roots) num *= (u + r);
  T den = T(1);
  for (double p : f.poles) den *= (u + p);
  return num / den;
}

// Polynomial coefficients in ascending order of degree.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void poly_add(Poly& a, const Poly& b, double scale) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
}

double poly_eval(const Poly& p, double x) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

double poly_eval_deriv(const Poly& p, double x) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 1;) v = v * x + static_cast<double>(i) * p[i];
  return v;
}

// Real roots of a low-degree polynomial via the companion matrix.
std::vector<double> real_roots(Poly p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  double scale = 0.0;
  for (double c : p) scale = std::max(scale, std::abs(c));
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p.back();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error("factorization-failure", "eigenvalue solve for polynomial roots failed");
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const auto z = solver.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real())))
      throw Error("factorization-failure",
                  "complex root of the cumulant numerator; model outside the supported family");
    double r = z.real();
    for (int it = 0; it < 3; ++it) {
      const double f = poly_eval(p, r);
      const double fp = poly_eval_deriv(p, r);
      if (fp == 0.0) break;
      r -= f / fp;
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i + 1 < roots.size(); ++i)
    if (std::abs(roots[i + 1] - roots[i]) < 1e-8 * std::max(1.0, std::abs(roots[i])))
      throw Error("factorization-failure", "near-coincident roots in the factorization");
  (void)scale;
  return roots;
}

// Numerator polynomial of psi(theta)/theta over the common denominator
// prod(alpha - theta) * prod(beta + theta).
Poly cumulant_numerator(const LevyModel& m) {
  Poly base = {m.drift, 0.5 * m.sigma * m.sigma};
  if (base.back() == 0.0) base.pop_back();
  const Poly up_factor = m.has_up() ? Poly{m.up->decay, -1.0} : Poly{1.0};
  const Poly down_factor = m.has_down() ? Poly{m.down->decay, 1.0} : Poly{1.0};

  Poly n = poly_mul(poly_mul(base, up_factor), down_factor);
  if (m.has_up()) poly_add(n, down_factor, m.up->rate);
  if (m.has_down()) poly_add(n, up_factor, -m.down->rate);
  return n;
}

void decompose(RationalBernstein& f, const char* which) {
  const std::size_t nr = f.roots.size();
  const std::size_t np = f.poles.size();
  if (nr != np && nr != np + 1)
    throw Error("factorization-failure",
                std::string(which) + " factor has inconsistent degree");
  f.drift = (nr == np + 1) ? f.normalization_c : 0.0;
  f.killing = f.value(0.0);

  f.jump_terms.clear();
  for (std::size_t j = 0; j < np; ++j) {
    const double p = f.poles[j];
    double residue = f.normalization_c;
    for (double r : f.roots) residue *= (r - p);
    for (std::size_t j2 = 0; j2 < np; ++j2)
      if (j2 != j) residue /= (f.poles[j2] - p);
    double weight = -residue / p;
    if (weight < 0.0) {
      if (weight < -1e-10 * std::max(1.0, std::abs(f.killing)))
        throw Error("factorization-failure",
                    std::string(which) + " factor has a negative Levy-measure weight");
      weight = 0.0;
    }
    f.jump_terms.push_back(JumpTerm{weight, p});
  }
}

// Nonnegative, nondecreasing and concave on a sampled grid, and the
// killing/drift/jump decomposition must reproduce the product form.
void validate_bernstein(const RationalBernstein& f, const char* which) {
  double prev = -1e-12;
  double prev_diff = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 48; ++i) {
    const double u = std::pow(10.0, -6.0 + 0.25 * i);
    const double v = f.value(u);
    const double tol = 1e-9 * (1.0 + std::abs(v));
    if (v < -tol || v + tol < prev)
      throw Error("factorization-failure",
                  std::string(which) + " factor is not nondecreasing and nonnegative");
    const double diff = (v - prev) / (u - (i == 0 ? 0.0 : std::pow(10.0, -6.0 + 0.25 * (i - 1))));
    if (i > 1 && diff > prev_diff * (1.0 + 1e-7) + 1e-12)
      throw Error("factorization-failure", std::string(which) + " factor is not concave");
    prev = v;
    prev_diff = diff;

    double decomposed = f.killing + f.drift * u;
    for (const auto& t : f.jump_terms) decomposed += t.weight * u / (u + t.pole);
    if (std::abs(decomposed - v) > 1e-8 * (1.0 + std::abs(v)))
      throw Error("factorization-failure",
                  std::string(which) + " decomposition disagrees with the product form");
  }
}

}  // namespace

double RationalBernstein::value(double u) const { return product_value(*this, u); }

std::complex<double> RationalBernstein::value(std::complex<double> u) const {
  return product_value(*this, u);
}

double RationalBernstein::derivative(double u) const {
  // If u sits on a simple root, differentiate by leaving that factor out.
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(u + roots[i]) < 1e-12 * std::max(1.0, roots[i])) {
      double v = normalization_c;
      for (std::size_t j = 0; j < roots.size(); ++j)
        if (j != i) v *= (u + roots[j]);
      for (double p : poles) v /= (u + p);
      return v;
    }
  }
  const double v = value(u);
  double logderiv = 0.0;
  for (double r : roots) logderiv += 1.0 / (u + r);
  for (double p : poles) logderiv -= 1.0 / (u + p);
  return v * logderiv;
}

LadderFactorization wh_factorize(const LevyModel& model, const CramerData& cramer) {
  const double gamma = cramer.gamma;
  Poly numerator = cumulant_numerator(model);
  std::vector<double> roots = real_roots(numerator);

  LadderFactorization fact;
  fact.gamma = gamma;
  fact.ascending.normalization_c = 1.0;
  fact.descending.normalization_c = 1.0;
  fact.descending.roots.push_back(0.0);

  bool snapped = false;
  for (double r : roots) {
    if (std::abs(r) < 1e-9 * std::max(1.0, gamma))
      throw Error("factorization-failure", "unexpected root of psi at the origin");
    if (r > 0.0) {
      if (!snapped && std::abs(r - gamma) < 1e-6 * std::max(1.0, gamma)) {
        r = gamma;  // pin the Cramer root to its bisected value
        snapped = true;
      }
      fact.ascending.roots.push_back(r);
    } else {
      fact.descending.roots.push_back(-r);
    }
  }
  if (!snapped)
    throw Error("factorization-failure", "Cramer root not found among factor roots");
  if (model.has_up()) fact.ascending.poles.push_back(model.up->decay);
  if (model.has_down()) fact.descending.poles.push_back(model.down->decay);
  std::sort(fact.ascending.roots.begin(), fact.ascending.roots.end());
  std::sort(fact.descending.roots.begin(), fact.descending.roots.end());

  // -psi(theta) = k phi(-theta) phi_hat(theta); fix k at a probe point and
  // verify the identity at several others.
  const auto product = [&](std::complex<double> theta) {
    return fact.ascending.value(-theta) * fact.descending.value(theta);
  };
  const double probe = 0.5 * gamma;
  const double denom = (fact.ascending.value(-probe) * fact.descending.value(probe));
  if (!(std::abs(denom) > 0.0))
    throw Error("factorization-failure", "degenerate factor product at the probe point");
  fact.k = -psi(model, probe) / denom;
  if (!(fact.k > 0.0) || !std::isfinite(fact.k))
    throw Error("factorization-failure", "normalization constant k is not positive");
  for (std::complex<double> theta :
       {std::complex<double>(0.25 * gamma, 0.0), std::complex<double>(0.0, 1.0),
        std::complex<double>(0.0, -3.7), std::complex<double>(0.1 * gamma, 2.0)}) {
    const auto lhs = -psi(model, theta);
    const auto rhs = fact.k * product(theta);
    if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs)))
      throw Error("factorization-failure", "Wiener-Hopf product identity violated");
  }

  decompose(fact.ascending, "ascending");
  decompose(fact.descending, "descending");
  validate_bernstein(fact.ascending, "ascending");
  validate_bernstein(fact.descending, "descending");

  if (!(fact.ascending.killing > 0.0))
    throw Error("factorization-failure", "ascending factor must be killed (phi(0) > 0)");
  if (std::abs(fact.descending.killing) > 1e-12)
    throw Error("factorization-failure", "descending factor must have no killing");
  if (std::abs(fact.ascending.value(-gamma)) > 1e-9)
    throw Error("factorization-failure", "phi(-gamma) != 0");

  const double slope = fact.ascending.derivative(-gamma);
  if (!(slope > 0.0))
    throw Error("factorization-failure", "phi'(-gamma) must be positive");
  fact.c_gamma = fact.ascending.killing / (gamma * slope);

  ell_via_wald(model, fact);
  return fact;
}

double ell_via_wald(const LevyModel& model, LadderFactorization& fact) {
  const double mean_h_hat = fact.descending.derivative(0.0);
  if (!(mean_h_hat > 0.0))
    throw Error("factorization-failure", "E[H_hat(1)] = phi_hat'(0) must be positive");
  fact.ell = std::abs(mean_x1(model)) / mean_h_hat;
  return fact.ell;
}

double nu_h_tail(const LadderFactorization& fact, double x) {
  double tail = 0.0;
  for (const auto& t : fact.ascending.jump_terms)
    tail += t.weight * std::exp(-t.pole * x);
  return tail;
}

}  // namespace reflectlab
