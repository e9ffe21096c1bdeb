#include "reflectlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "reflectlab/error.hpp"
#include "reflectlab/limit_laws.hpp"
#include "reflectlab/numerics.hpp"
#include "reflectlab/philox.hpp"
#include "reflectlab/simulate.hpp"
#include "reflectlab/stats.hpp"
#include "reflectlab/wiener_hopf.hpp"

namespace reflectlab {

LevyModel cl1_model() { return make_model(-2.0, 0.0, JumpComponent{1.0, 1.0}); }
LevyModel bm1_model() { return make_model(-1.0, 1.0); }
LevyModel kou1_model() { return make_model(-1.0, 1.0, JumpComponent{0.5, 2.0}); }

namespace {

// Pinned tolerances of the verification suite.
constexpr double kTolGamma = 1e-10;
constexpr double kTolIdentity = 1e-8;
constexpr double kTolPhiRoot = 1e-9;
constexpr double kTolOvershootKs = 0.02;
constexpr double kTolAtomKou = 0.02;
constexpr double kTolStationaryAtom = 0.01;
constexpr double kTolStationaryKs = 0.02;
constexpr double kTolGumbelKs = 0.03;
constexpr double kTolIndependenceGap = 0.03;
constexpr double kTolExitRelative = 0.05;
constexpr double kTolExitStderr = 0.01;
constexpr double kTolTiltedRelative = 0.02;
constexpr double kStraddleDecayRatio = 0.5;

// Coupled-trajectory grid t = lambda * exp(gamma x) for the CL-1 maximum
// and independence experiments.
constexpr double kLambdaScale = 4.0;
constexpr double kGridX[3] = {10.0, 12.0, 14.0};
constexpr double kIndependenceYOffset = 8.0;

struct SuiteState {
  const VerifyOptions& opt;
  std::vector<Verdict> verdicts;

  void add(const std::string& name, double statistic, double threshold) {
    const auto it = opt.threshold_overrides.find(name);
    if (it != opt.threshold_overrides.end()) threshold = it->second;
    verdicts.push_back(Verdict{name, statistic, threshold, statistic <= threshold});
  }
};

bool wanted(const VerifyOptions& opt, int criterion) {
  return std::find(opt.criteria.begin(), opt.criteria.end(), criterion) !=
         opt.criteria.end();
}

void criterion_cramer_root(SuiteState& st) {
  st.add("01-cramer-root-cl1", std::abs(cramer_gamma(cl1_model()).gamma - 0.5),
         kTolGamma);
  st.add("01-cramer-root-bm1", std::abs(cramer_gamma(bm1_model()).gamma - 2.0),
         kTolGamma);
}

void criterion_factorization(SuiteState& st) {
  const struct {
    const char* name;
    LevyModel model;
  } cases[] = {{"cl1", cl1_model()}, {"bm1", bm1_model()}, {"kou1", kou1_model()}};
  for (const auto& c : cases) {
    const CramerData cramer = cramer_gamma(c.model);
    const LadderFactorization fact = wh_factorize(c.model, cramer);
    double worst = 0.0;
    const auto check = [&](std::complex<double> theta) {
      const std::complex<double> lhs = -psi(c.model, theta);
      const std::complex<double> rhs =
          fact.k * fact.ascending.value(-theta) * fact.descending.value(theta);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    };
    for (int j = 0; j < 100; ++j)
      check(std::complex<double>(0.0, -10.0 + 20.0 * j / 99.0));
    const double lo = c.model.has_down() ? -0.45 * c.model.down->decay : -2.0;
    for (int j = 0; j < 20; ++j)
      check(std::complex<double>(lo + (cramer.gamma - lo) * j / 19.0, 0.0));
    st.add(std::string("02-wh-identity-") + c.name, worst, kTolIdentity);
    st.add(std::string("02-wh-phi-root-") + c.name,
           std::abs(fact.ascending.value(-cramer.gamma)), kTolPhiRoot);
  }
}

void criterion_overshoot_law(SuiteState& st) {
  {  // CL-1: conditional overshoot is Exp(1) (Theorem-1 reduction)
    SimConfig cfg;
    cfg.t = 200.0;
    cfg.x = 12.0;
    cfg.y_offset = 8.0;
    cfg.n = st.opt.n_overshoot;
    cfg.seed = st.opt.seed + 3;
    cfg.horizon = 1e4;
    const auto mc = monte_carlo(cl1_model(), cfg, nullptr, st.opt.workers);
    const double ks =
        ks_distance(mc.z, [](double v) { return 1.0 - std::exp(-v); });
    st.add("03-overshoot-ks-cl1", ks, kTolOvershootKs);
  }
  {  // BM-1: creeping, every observed overshoot is exactly zero
    SimConfig cfg;
    cfg.t = 1.0;
    cfg.x = 3.0;
    cfg.n = st.opt.n_creeping;
    cfg.seed = st.opt.seed + 4;
    cfg.step = 1e-3;
    cfg.horizon = 800.0;
    const auto mc = monte_carlo(bm1_model(), cfg, nullptr, st.opt.workers);
    st.add("03-creeping-bm1-observed", mc.n_z_observed >= 100 ? 0.0 : 1.0, 0.0);
    st.add("03-creeping-bm1-nonzero",
           static_cast<double>(mc.z.sorted_values.size()), 0.0);
  }
  {  // KOU-1: empirical creeping fraction against the analytic atom
    const LevyModel kou = kou1_model();
    const LimitLawSet laws = make_limit_laws(kou);
    SimConfig cfg;
    cfg.t = 1.0;
    cfg.x = 5.5;
    cfg.n = st.opt.n_atom;
    cfg.seed = st.opt.seed + 5;
    cfg.step = 1e-3;
    cfg.horizon = 2500.0;
    const auto mc = monte_carlo(kou, cfg, nullptr, st.opt.workers);
    const double frac = mc.n_z_observed > 0
                            ? static_cast<double>(mc.z.atom_at_zero_count) /
                                  static_cast<double>(mc.n_z_observed)
                            : 2.0;
    st.add("03-atom-kou1", std::abs(frac - z_inf_atom(laws)), kTolAtomKou);
  }
}

void criterion_stationary_law(SuiteState& st) {
  SimConfig cfg;
  cfg.t = 400.0;
  cfg.x = 38.0;  // level far above the range, so tau stays irrelevant
  cfg.n = st.opt.n_stationary;
  cfg.seed = st.opt.seed + 6;
  cfg.horizon = cfg.t;
  const auto mc = monte_carlo(cl1_model(), cfg, nullptr, st.opt.workers);
  const double atom = static_cast<double>(mc.y_t.atom_at_zero_count) /
                      static_cast<double>(mc.n_total);
  st.add("04-stationary-atom-cl1", std::abs(atom - 0.5), kTolStationaryAtom);
  EmpiricalDistribution positive{mc.y_t.sorted_values, 0};
  const double ks =
      ks_distance(positive, [](double v) { return 1.0 - std::exp(-0.5 * v); });
  st.add("04-stationary-ks-cl1", ks, kTolStationaryKs);
}

std::vector<double> gumbel_grid_ks(SuiteState& st, long long n,
                                   const JointThresholds* grid,
                                   std::vector<IndependenceReport>* reports) {
  const LevyModel cl1 = cl1_model();
  const LimitLawSet laws = make_limit_laws(cl1, kLambdaScale);
  const double gamma = laws.gamma;
  const double rate = laws.fact.ell * laws.fact.c_gamma *
                      laws.fact.descending.value(gamma);
  std::vector<double> ks_values;
  for (double x : kGridX) {
    SimConfig cfg;
    cfg.t = kLambdaScale * std::exp(gamma * x);
    cfg.x = x;
    cfg.n = n;
    cfg.seed = st.opt.seed + 7;
    if (grid) {
      cfg.y_offset = kIndependenceYOffset;
      const double mean_tau = std::exp(gamma * (x + cfg.y_offset)) / rate;
      cfg.horizon = 5.0 * mean_tau;
    } else {
      cfg.horizon = cfg.t;
    }
    const auto mc = monte_carlo(cl1, cfg, grid, st.opt.workers);
    ks_values.push_back(
        ks_distance(mc.m, [&](double z) { return gumbel_cdf(laws, z); }));
    if (reports) reports->push_back(independence_gap(mc.joint));
  }
  return ks_values;
}

void criterion_gumbel(SuiteState& st) {
  const LimitLawSet laws = make_limit_laws(cl1_model(), kLambdaScale);
  const double constant = laws.fact.ell * laws.fact.c_gamma *
                          laws.fact.descending.value(laws.gamma);
  st.add("05-gumbel-constant", std::abs(constant - 0.25), 1e-10);
  const auto ks = gumbel_grid_ks(st, st.opt.n_gumbel, nullptr, nullptr);
  st.add("05-gumbel-ks-x10", ks[0], kTolGumbelKs);
  st.add("05-gumbel-ks-x12", ks[1], kTolGumbelKs);
  st.add("05-gumbel-ks-x14", ks[2], kTolGumbelKs);
  const double worst_step =
      std::max(ks[1] - ks[0], ks[2] - ks[1]);
  st.add("05-gumbel-ks-trend", worst_step, 0.0);
}

void criterion_independence(SuiteState& st) {
  JointThresholds grid;
  grid.a = {0.0, 1.0, 2.2};
  grid.b = {0.3, 1.0, 2.0};
  grid.c = {-1.5, 0.5, 2.5};
  std::vector<IndependenceReport> reports;
  gumbel_grid_ks(st, st.opt.n_independence, &grid, &reports);
  st.add("06-independence-gap", reports.back().triple_gap, kTolIndependenceGap);
  int increases = 0;
  double worst_step = -1.0;
  double dkw = 0.0;
  for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
    const double step = reports[i + 1].triple_gap - reports[i].triple_gap;
    if (step > 0.0) ++increases;
    worst_step = std::max(worst_step, step);
    dkw = std::max(dkw, reports[i + 1].dkw_radius);
  }
  st.add("06-independence-trend-count", static_cast<double>(increases), 1.0);
  st.add("06-independence-trend-excess", worst_step, dkw);
}

void criterion_exit(SuiteState& st) {
  const LevyModel cl1 = cl1_model();
  const LimitLawSet laws = make_limit_laws(cl1);
  const double x = 20.0, z = 10.0;
  const double oracle = two_sided_exit_asym(laws, cl1, x, z);
  const Estimate est =
      importance_sample_exit(cl1, x, z, st.opt.n_exit, st.opt.seed + 9, st.opt.workers);
  st.add("07-exit-relative-error", std::abs(est.value - oracle) / oracle,
         kTolExitRelative);
  st.add("07-exit-relative-stderr", est.std_error / est.value, kTolExitStderr);
}

void criterion_tilted_transform(SuiteState& st) {
  const LevyModel cl1 = cl1_model();
  const LimitLawSet laws = make_limit_laws(cl1);
  const CramerData cramer = cramer_gamma(cl1);
  const LevyModel tilted = esscher_tilt(cl1, cramer.gamma);
  const Quadrature quad = gauss_laguerre(16);

  const struct {
    double q, u;
  } pairs[] = {{1.0, 2.0}, {2.0, 1.0}};
  int pair_idx = 0;
  for (const auto& pu : pairs) {
    std::vector<double> levels(quad.nodes.size());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = quad.nodes[i] / pu.q;
    std::vector<double> sums(levels.size(), 0.0);
    std::vector<double> overshoots;
    for (long long path = 0; path < st.opt.n_tilted; ++path) {
      Philox rng(st.opt.seed + 10 + pair_idx, static_cast<std::uint64_t>(path));
      raw_overshoots_at_levels(tilted, levels, 1e-3, rng, overshoots);
      for (std::size_t i = 0; i < levels.size(); ++i)
        sums[i] += std::exp(-pu.u * overshoots[i]);
    }
    double integral = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i)
      integral += quad.weights[i] * sums[i] / static_cast<double>(st.opt.n_tilted);
    const double analytic = tilted_overshoot_transform(laws, pu.q, pu.u);
    std::ostringstream name;
    name << "08-tilted-transform-q" << pu.q << "-u" << pu.u;
    st.add(name.str(), std::abs(integral - analytic) / analytic, kTolTiltedRelative);
    ++pair_idx;
  }
}

void criterion_straddle(SuiteState& st) {
  const LevyModel cl1 = cl1_model();
  const double gamma = cramer_gamma(cl1).gamma;
  const double x_lo = 10.0, x_hi = 16.0;
  const Estimate p_lo =
      straddle_probability(cl1, kLambdaScale * std::exp(gamma * x_lo), x_lo,
                           st.opt.n_straddle, st.opt.seed + 12, st.opt.workers);
  const Estimate p_hi =
      straddle_probability(cl1, kLambdaScale * std::exp(gamma * x_hi), x_hi,
                           st.opt.n_straddle, st.opt.seed + 13, st.opt.workers);
  const double ratio = p_lo.value > 0.0 ? p_hi.value / p_lo.value : 2.0;
  st.add("09-straddle-decay-ratio", ratio, kStraddleDecayRatio);
}

}  // namespace

VerifyOptions verify_options_from_config(const KeyValues& kv) {
  VerifyOptions opt;
  opt.seed = static_cast<std::uint64_t>(kv.get_int_or("verify.seed", 20260810));
  opt.n_overshoot = kv.get_int_or("verify.n.overshoot", opt.n_overshoot);
  opt.n_creeping = kv.get_int_or("verify.n.creeping", opt.n_creeping);
  opt.n_atom = kv.get_int_or("verify.n.atom", opt.n_atom);
  opt.n_stationary = kv.get_int_or("verify.n.stationary", opt.n_stationary);
  opt.n_gumbel = kv.get_int_or("verify.n.gumbel", opt.n_gumbel);
  opt.n_independence = kv.get_int_or("verify.n.independence", opt.n_independence);
  opt.n_exit = kv.get_int_or("verify.n.exit", opt.n_exit);
  opt.n_tilted = kv.get_int_or("verify.n.tilted", opt.n_tilted);
  opt.n_straddle = kv.get_int_or("verify.n.straddle", opt.n_straddle);
  if (kv.has("verify.criteria")) {
    opt.criteria.clear();
    for (double c : kv.get_list("verify.criteria"))
      opt.criteria.push_back(static_cast<int>(c));
  }
  for (const auto& [key, value] : kv.values) {
    const std::string prefix = "verify.threshold.";
    if (key.rfind(prefix, 0) == 0)
      opt.threshold_overrides[key.substr(prefix.size())] = kv.get_double(key);
  }
  return opt;
}

std::vector<Verdict> run_verify_suite(const VerifyOptions& options) {
  SuiteState st{options, {}};
  if (wanted(options, 1)) criterion_cramer_root(st);
  if (wanted(options, 2)) criterion_factorization(st);
  if (wanted(options, 3)) criterion_overshoot_law(st);
  if (wanted(options, 4)) criterion_stationary_law(st);
  if (wanted(options, 5)) criterion_gumbel(st);
  if (wanted(options, 6)) criterion_independence(st);
  if (wanted(options, 7)) criterion_exit(st);
  if (wanted(options, 8)) criterion_tilted_transform(st);
  if (wanted(options, 9)) criterion_straddle(st);
  return st.verdicts;
}

}  // namespace reflectlab
