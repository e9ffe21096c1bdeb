#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace reflectlab {

// Gamma function for complex arguments (Lanczos approximation, g = 7,
// nine coefficients; relative error below 1e-12 on the strip used here).
std::complex<double> complex_gamma(std::complex<double> z);

// Gaver-Stehfest inversion of a real-axis Laplace transform at t > 0.
// Order 14 is the double-precision sweet spot; the order-12 estimate is
// returned alongside as a convergence diagnostic.
struct StehfestResult {
  double value;
  double diagnostic;  // |order-14 - order-12|
};
StehfestResult gaver_stehfest(const std::function<double(double)>& transform, double t);

// Inverts the Laplace transform of a sub-probability tail/CDF on a grid,
// clipping to [0,1].  Throws Error "oscillation-detected" when successive
// Stehfest orders disagree by more than 1e-4 (non-smooth input).
std::vector<double> laplace_invert_cdf(const std::function<double(double)>& transform,
                                       const std::vector<double>& x_grid);

// Gauss-Laguerre nodes and weights (Golub-Welsch on the Jacobi matrix), for
// integrals of the form int_0^inf e^{-s} f(s) ds.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_laguerre(int n);

}  // namespace reflectlab
