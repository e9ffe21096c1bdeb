#include "reflectlab/numerics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "reflectlab/error.hpp"

namespace reflectlab {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoeffs[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Stehfest coefficients for even order N, computed once in long double to
// absorb the factorial cancellation.
std::vector<double> stehfest_weights(int order) {
  const int half = order / 2;
  std::vector<long double> fact(2 * half + 1, 1.0L);
  for (int i = 1; i < static_cast<int>(fact.size()); ++i)
    fact[i] = fact[i - 1] * static_cast<long double>(i);
  std::vector<double> zeta(order + 1, 0.0);
  for (int k = 1; k <= order; ++k) {
    long double sum = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      long double term = std::pow(static_cast<long double>(j), half) * fact[2 * j];
      term /= fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
      sum += term;
    }
    zeta[k] = static_cast<double>(((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum);
  }
  return zeta;
}

double stehfest_eval(const std::function<double(double)>& transform, double t,
                     const std::vector<double>& zeta, int order) {
  const double ln2_t = std::numbers::ln2 / t;
  double sum = 0.0;
  for (int k = 1; k <= order; ++k) sum += zeta[k] * transform(k * ln2_t);
  return ln2_t * sum;
}

}  // namespace

std::complex<double> complex_gamma(std::complex<double> z) {
  using namespace std::complex_literals;
  if (z.real() < 0.5) {
    // reflection formula
    const std::complex<double> pi_z = std::numbers::pi * z;
    return std::numbers::pi / (std::sin(pi_z) * complex_gamma(1.0 - z));
  }
  z -= 1.0;
  std::complex<double> x = kLanczosCoeffs[0];
  for (int i = 1; i < 9; ++i) x += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

StehfestResult gaver_stehfest(const std::function<double(double)>& transform, double t) {
  if (!(t > 0.0)) throw Error("invalid-config", "Stehfest inversion needs t > 0");
  static const std::vector<double> zeta14 = stehfest_weights(14);
  static const std::vector<double> zeta12 = stehfest_weights(12);
  const double v14 = stehfest_eval(transform, t, zeta14, 14);
  const double v12 = stehfest_eval(transform, t, zeta12, 12);
  return {v14, std::abs(v14 - v12)};
}

std::vector<double> laplace_invert_cdf(const std::function<double(double)>& transform,
                                       const std::vector<double>& x_grid) {
  std::vector<double> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    const StehfestResult r = gaver_stehfest(transform, x);
    if (r.diagnostic > 1e-4)
      throw Error("oscillation-detected",
                  "successive Stehfest orders disagree by " + std::to_string(r.diagnostic) +
                      " at x = " + std::to_string(x));
    out.push_back(std::clamp(r.value, 0.0, 1.0));
  }
  return out;
}

Quadrature gauss_laguerre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) {
      jacobi(i, i + 1) = static_cast<double>(i + 1);
      jacobi(i + 1, i) = static_cast<double>(i + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw Error("invalid-config", "Gauss-Laguerre eigen decomposition failed");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    q.weights[i] = v0 * v0;  // moment mu_0 = 1 for weight e^{-s}
  }
  return q;
}

}  // namespace reflectlab
