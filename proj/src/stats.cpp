#include "reflectlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "reflectlab/error.hpp"
#include "reflectlab/simulate.hpp"

namespace reflectlab {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::vector<double> values,
                                                          bool split_zero_atom) {
  EmpiricalDistribution emp;
  if (split_zero_atom) {
    auto it = std::remove(values.begin(), values.end(), 0.0);
    emp.atom_at_zero_count = static_cast<long long>(values.end() - it);
    values.erase(it, values.end());
  }
  std::sort(values.begin(), values.end());
  emp.sorted_values = std::move(values);
  return emp;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  std::vector<double> merged(sorted_values.size() + other.sorted_values.size());
  std::merge(sorted_values.begin(), sorted_values.end(), other.sorted_values.begin(),
             other.sorted_values.end(), merged.begin());
  sorted_values = std::move(merged);
  atom_at_zero_count += other.atom_at_zero_count;
}

double ks_distance(const EmpiricalDistribution& emp, const CdfEvaluator& cdf) {
  const double n = static_cast<double>(emp.n());
  if (n == 0.0) return 0.0;
  double dist = 0.0;
  double count_before = 0.0;

  // Walk the jump points in order, inserting the zero atom where it belongs.
  const auto visit = [&](double point, double mass) {
    const double f = cdf(point);
    const double below = count_before / n;
    const double above = (count_before + mass) / n;
    dist = std::max(dist, std::max(std::abs(f - below), std::abs(f - above)));
    count_before += mass;
  };

  std::size_t i = 0;
  const auto& v = emp.sorted_values;
  while (i < v.size() && v[i] < 0.0) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    visit(v[i], static_cast<double>(j - i));
    i = j;
  }
  if (emp.atom_at_zero_count > 0) visit(0.0, static_cast<double>(emp.atom_at_zero_count));
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    visit(v[i], static_cast<double>(j - i));
    i = j;
  }
  return dist;
}

double dkw_radius(long long n, double confidence) {
  if (n < 1) throw Error("invalid-config", "dkw_radius needs n >= 1");
  if (!(confidence > 0.0) || confidence > 1.0 - 1e-12)
    throw Error("invalid-config", "confidence must lie in (0, 1 - 1e-12]");
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
}

IndependenceReport independence_gap(const JointCounts& counts) {
  if (counts.thresholds.a.empty() || counts.thresholds.b.empty() ||
      counts.thresholds.c.empty())
    throw Error("invalid-config", "independence grid must be non-empty");
  if (counts.n <= 0)
    throw Error("invalid-config", "independence gap needs at least one observed sample");

  IndependenceReport rep;
  rep.a = counts.thresholds.a;
  rep.b = counts.thresholds.b;
  rep.c = counts.thresholds.c;
  const double n = static_cast<double>(counts.n);
  const std::size_t na = rep.a.size(), nb = rep.b.size(), nc = rep.c.size();
  rep.joint_probs.resize(na * nb * nc);
  rep.product_probs.resize(na * nb * nc);

  for (std::size_t ia = 0; ia < na; ++ia) {
    const double py = static_cast<double>(counts.y_gt[ia]) / n;
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const double pz = static_cast<double>(counts.z_gt[ib]) / n;
      const double pyz = static_cast<double>(counts.yz[ia * nb + ib]) / n;
      rep.pair_gap = std::max(rep.pair_gap, std::abs(pyz - py * pz));
      for (std::size_t ic = 0; ic < nc; ++ic) {
        const double pm = static_cast<double>(counts.m_le[ic]) / n;
        const std::size_t idx = (ia * nb + ib) * nc + ic;
        rep.joint_probs[idx] = static_cast<double>(counts.joint[idx]) / n;
        rep.product_probs[idx] = py * pz * pm;
        rep.triple_gap =
            std::max(rep.triple_gap, std::abs(rep.joint_probs[idx] - rep.product_probs[idx]));
      }
    }
  }
  rep.gap = std::max(rep.pair_gap, rep.triple_gap);
  rep.dkw_radius = dkw_radius(counts.n, 0.99);
  return rep;
}

}  // namespace reflectlab
