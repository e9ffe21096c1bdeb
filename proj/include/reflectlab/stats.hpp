#pragma once

#include <functional>
#include <vector>

namespace reflectlab {

// Sorted-sample ECDF with an explicit atom at zero.  sorted_values holds the
// nonzero part; n() counts both.
struct EmpiricalDistribution {
  std::vector<double> sorted_values;
  long long atom_at_zero_count = 0;

  long long n() const {
    return static_cast<long long>(sorted_values.size()) + atom_at_zero_count;
  }

  // Splits exact zeros into the atom when split_zero_atom is set.
  static EmpiricalDistribution from_samples(std::vector<double> values,
                                            bool split_zero_atom);

  void merge(const EmpiricalDistribution& other);
};

using CdfEvaluator = std::function<double(double)>;

// Two-sided Kolmogorov-Smirnov distance between the ECDF (atom included as
// mass at zero) and a reference CDF, with the standard jump correction:
// both the left and right limits of the ECDF are compared at every jump.
double ks_distance(const EmpiricalDistribution& emp, const CdfEvaluator& cdf);

// Dvoretzky-Kiefer-Wolfowitz band radius sqrt(log(2/(1-confidence))/(2n)).
double dkw_radius(long long n, double confidence);

struct JointCounts;  // defined in simulate.hpp

// Empirical joint vs product-of-marginals comparison on half-line events
// A = (a,inf), B = (b,inf), C = (-inf,c], the event shapes of the
// asymptotic-independence statement.
struct IndependenceReport {
  std::vector<double> a, b, c;       // threshold grid
  std::vector<double> joint_probs;   // triple joint, [ia][ib][ic]
  std::vector<double> product_probs; // product of the three marginals
  double pair_gap = 0.0;             // sup |P(Y>a,Z>b) - P(Y>a)P(Z>b)|
  double triple_gap = 0.0;           // sup over the grid of the triple gap
  double gap = 0.0;                  // max of the two
  double dkw_radius = 0.0;           // at 99% for the underlying sample size
};

IndependenceReport independence_gap(const JointCounts& counts);

}  // namespace reflectlab
