#include "reflectlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "reflectlab/error.hpp"

namespace reflectlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ReflectedOutputs {
  double y_t = 0.0;
  double ystar_t = 0.0;
  double xstar_t = 0.0;
  std::optional<double> tau;
  std::optional<double> z;
  bool straddle = false;
};

enum class StopPolicy { kFull, kStraddleOnly };

// Event-driven simulation of the reflected path for sigma = 0.  Between jump
// epochs the path is linear, so zero hits of Y, creeping passages of the
// level and the value at t are all resolved in closed form per segment.
ReflectedOutputs run_reflected_exact(const LevyModel& m, double t_mark, double level,
                                     double horizon, Philox& rng, StopPolicy policy) {
  const double c = m.drift;
  const double lam_up = m.has_up() ? m.up->rate : 0.0;
  const double lam_dn = m.has_down() ? m.down->rate : 0.0;
  const double lam = lam_up + lam_dn;

  double time = 0.0, y = 0.0, ystar = 0.0, x_val = 0.0, xstar = 0.0;
  long long exc_id = 0, exc_at_t = -1, exc_at_tau = -2;
  bool in_exc = false, t_done = false;
  ReflectedOutputs out;

  while (true) {
    const double jump_time = lam > 0.0 ? time + rng.next_exponential(lam) : kInf;
    const bool final_segment = jump_time >= horizon;
    const double seg_end = final_segment ? horizon : jump_time;

    // Sub-events inside the linear segment, in chronological order.
    while (time < seg_end) {
      if (c > 0.0 && y == 0.0) {
        ++exc_id;  // Y leaves zero by drift at the segment start
        in_exc = true;
      }
      const double t_zero = (c < 0.0 && y > 0.0) ? time + y / (-c) : kInf;
      const double t_creep =
          (!out.tau && c > 0.0) ? time + (level - y) / c : kInf;
      const double t_t = !t_done ? t_mark : kInf;
      const double next = std::min(std::min(t_zero, t_creep), std::min(t_t, seg_end));

      y += c * (next - time);
      x_val += c * (next - time);
      if (c > 0.0) {
        if (y > ystar) ystar = y;
        if (x_val > xstar) xstar = x_val;
      }
      time = next;

      if (next == t_zero) {
        y = 0.0;
        in_exc = false;
      }
      if (next == t_creep) {
        y = level;
        out.tau = time;
        out.z = 0.0;
        exc_at_tau = exc_id;
      }
      if (next == t_t) {
        t_done = true;
        out.y_t = y;
        out.ystar_t = ystar;
        out.xstar_t = xstar;
        exc_at_t = (in_exc && y > 0.0) ? exc_id : -1;
        if (policy == StopPolicy::kStraddleOnly && exc_at_t < 0 && !out.tau) {
          out.straddle = false;
          return out;
        }
      }
      if (next == seg_end) break;
    }

    if (t_done) {
      if (out.tau) break;
      if (policy == StopPolicy::kStraddleOnly &&
          (!in_exc || exc_id != exc_at_t)) break;
    }
    if (final_segment) break;

    // Jump at seg_end.
    const bool is_up =
        lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
    if (is_up) {
      const double j = rng.next_exponential(m.up->decay);
      const bool was_zero = (y == 0.0);
      y += j;
      x_val += j;
      if (y > ystar) ystar = y;
      if (x_val > xstar) xstar = x_val;
      if (was_zero) {
        ++exc_id;
        in_exc = true;
      }
      if (!out.tau && y > level) {
        out.tau = time;
        out.z = y - level;
        exc_at_tau = exc_id;
      }
    } else {
      const double j = rng.next_exponential(m.down->decay);
      y -= j;
      x_val -= j;
      if (y <= 0.0) {
        y = 0.0;
        in_exc = false;
      }
    }

    if (t_done && out.tau) break;
  }

  out.straddle = out.tau.has_value() && exc_at_t >= 0 && exc_at_tau == exc_at_t;
  return out;
}

// Euler grid driver for sigma > 0: Brownian increments are sampled exactly
// at the event times (grid ticks, exact Poisson jump epochs, t), reflection
// and level crossings are detected at those times.  Passage times carry the
// documented O(sqrt(step)) bias.  Crossings triggered by a continuous
// increment are creeping and record z = 0; crossings at a jump epoch record
// the exact jump overshoot.  The grid refines near the level so that the
// creep/jump classification is resolved on a finer scale than `step`.
ReflectedOutputs run_reflected_grid(const LevyModel& m, double t_mark, double level,
                                    double horizon, double step, Philox& rng) {
  const double c = m.drift;
  const double sigma = m.sigma;
  const double lam_up = m.has_up() ? m.up->rate : 0.0;
  const double lam_dn = m.has_down() ? m.down->rate : 0.0;
  const double lam = lam_up + lam_dn;
  const double refine_band = 12.0 * sigma * std::sqrt(step);

  double time = 0.0, x_val = 0.0, x_min = 0.0, ystar = 0.0, xstar = 0.0;
  bool t_done = false;
  ReflectedOutputs out;
  double next_jump = lam > 0.0 ? rng.next_exponential(lam) : kInf;

  while (true) {
    const double y = x_val - x_min;
    const double dt_grid =
        (!out.tau && level - y < refine_band) ? step / 16.0 : step;
    double next = std::min(time + dt_grid, next_jump);
    if (!t_done && t_mark < next) next = t_mark;
    if (next > horizon) next = horizon;

    const double dt = next - time;
    if (dt > 0.0) {
      x_val += c * dt + sigma * std::sqrt(dt) * rng.next_gaussian();
      if (x_val < x_min) x_min = x_val;
      if (x_val > xstar) xstar = x_val;
      const double y_new = x_val - x_min;
      if (y_new > ystar) ystar = y_new;
      if (!out.tau && y_new > level) {
        out.tau = next;
        out.z = 0.0;  // continuous crossing: true creeping overshoot
      }
    }
    time = next;

    if (time == next_jump) {
      const bool is_up =
          lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
      const double y_pre = x_val - x_min;
      if (is_up) {
        const double j = rng.next_exponential(m.up->decay);
        x_val += j;
        if (x_val > xstar) xstar = x_val;
        const double y_new = x_val - x_min;
        if (y_new > ystar) ystar = y_new;
        if (!out.tau && y_pre <= level && y_new > level) {
          out.tau = time;
          out.z = y_new - level;
        }
      } else {
        x_val -= rng.next_exponential(m.down->decay);
        if (x_val < x_min) x_min = x_val;
      }
      next_jump = time + (lam > 0.0 ? rng.next_exponential(lam) : kInf);
    }

    if (!t_done && time == t_mark) {
      t_done = true;
      out.y_t = x_val - x_min;
      out.ystar_t = ystar;
      out.xstar_t = xstar;
    }
    if (t_done && (out.tau || time >= horizon)) break;
  }
  return out;
}

ReflectedOutputs run_reflected(const LevyModel& m, double t_mark, double level,
                               double horizon, double step, Philox& rng,
                               StopPolicy policy) {
  if (m.sigma == 0.0) return run_reflected_exact(m, t_mark, level, horizon, rng, policy);
  if (policy == StopPolicy::kStraddleOnly)
    throw Error("unsupported-model",
                "excursion intervals are ambiguous on a diffusion grid");
  return run_reflected_grid(m, t_mark, level, horizon, step, rng);
}

// Blocked deterministic reduction: thread count never changes which indices
// form a block or the order blocks are folded in.
template <typename PerIndex, typename Fold>
void parallel_blocks(long long n, int workers, PerIndex per_index, Fold fold_block) {
  constexpr long long kBlock = 4096;
  const long long n_blocks = (n + kBlock - 1) / kBlock;
  if (workers < 1) workers = 1;
  if (workers == 1 || n_blocks == 1) {
    for (long long b = 0; b < n_blocks; ++b) {
      const long long lo = b * kBlock, hi = std::min(n, lo + kBlock);
      fold_block(b, lo, hi, per_index);
    }
    return;
  }
  std::atomic<long long> next_block{0};
  auto run = [&] {
    for (;;) {
      const long long b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const long long lo = b * kBlock, hi = std::min(n, lo + kBlock);
      fold_block(b, lo, hi, per_index);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace

void validate(const LevyModel& model, const SimConfig& cfg) {
  if (!(cfg.t > 0.0)) throw Error("invalid-config", "sim.t must be positive");
  if (!(cfg.x > 0.0)) throw Error("invalid-config", "sim.x must be positive");
  if (!(cfg.y_offset >= 0.0))
    throw Error("invalid-config", "sim.y_offset must be nonnegative");
  if (cfg.n < 1) throw Error("invalid-config", "sim.n must be at least 1");
  if (!(cfg.horizon >= cfg.t))
    throw Error("invalid-config", "sim.horizon must be at least sim.t");
  if (model.sigma > 0.0) {
    double rate_scale = 0.0;
    if (model.has_up()) rate_scale += model.up->rate;
    if (model.has_down()) rate_scale += model.down->rate;
    const double cap = 1e-2 * std::min(1.0, rate_scale > 0.0 ? 1.0 / rate_scale : 1.0);
    if (!(cfg.step > 0.0) || cfg.step > cap)
      throw Error("invalid-config",
                  "sim.step must lie in (0, 1e-2 * min(1, 1/rate)] for diffusion models");
  }
}

FunctionalSample sample_functionals(const LevyModel& model, const SimConfig& cfg,
                                    long long index) {
  validate(model, cfg);
  Philox rng(cfg.seed, static_cast<std::uint64_t>(index));
  const auto run = run_reflected(model, cfg.t, cfg.x + cfg.y_offset, cfg.horizon,
                                 cfg.step, rng, StopPolicy::kFull);
  FunctionalSample s;
  s.y_t = run.y_t;
  s.m = run.ystar_t - cfg.x;
  s.z = run.z;
  s.tau = run.tau;
  s.straddle = run.straddle;
  s.weight = 1.0;
  return s;
}

void JointCounts::merge(const JointCounts& other) {
  if (joint.empty()) {
    *this = other;
    return;
  }
  if (other.joint.empty()) return;
  n += other.n;
  for (std::size_t i = 0; i < joint.size(); ++i) joint[i] += other.joint[i];
  for (std::size_t i = 0; i < yz.size(); ++i) yz[i] += other.yz[i];
  for (std::size_t i = 0; i < y_gt.size(); ++i) y_gt[i] += other.y_gt[i];
  for (std::size_t i = 0; i < z_gt.size(); ++i) z_gt[i] += other.z_gt[i];
  for (std::size_t i = 0; i < m_le.size(); ++i) m_le[i] += other.m_le[i];
}

void MonteCarloResult::merge(const MonteCarloResult& other) {
  y_t.merge(other.y_t);
  z.merge(other.z);
  m.merge(other.m);
  n_total += other.n_total;
  n_z_observed += other.n_z_observed;
  n_straddle += other.n_straddle;
  joint.merge(other.joint);
}

std::vector<FunctionalSample> sample_many(const LevyModel& model, const SimConfig& cfg,
                                          long long index_begin, long long count,
                                          int workers) {
  validate(model, cfg);
  std::vector<FunctionalSample> samples(static_cast<std::size_t>(count));
  parallel_blocks(
      count, workers,
      [&](long long i) {
        samples[static_cast<std::size_t>(i)] =
            sample_functionals(model, cfg, index_begin + i);
      },
      [&](long long, long long lo, long long hi, auto& f) {
        for (long long i = lo; i < hi; ++i) f(i);
      });
  return samples;
}

MonteCarloResult monte_carlo(const LevyModel& model, const SimConfig& cfg,
                             const JointThresholds* grid, int workers,
                             long long index_begin) {
  const std::vector<FunctionalSample> samples =
      sample_many(model, cfg, index_begin, cfg.n, workers);

  MonteCarloResult out;
  out.n_total = cfg.n;
  std::vector<double> ys, zs, ms;
  ys.reserve(samples.size());
  ms.reserve(samples.size());
  for (const auto& s : samples) {
    ys.push_back(s.y_t);
    ms.push_back(s.m);
    if (s.z) {
      zs.push_back(*s.z);
      ++out.n_z_observed;
    }
    if (s.straddle) ++out.n_straddle;
  }
  out.y_t = EmpiricalDistribution::from_samples(std::move(ys), true);
  out.z = EmpiricalDistribution::from_samples(std::move(zs), true);
  out.m = EmpiricalDistribution::from_samples(std::move(ms), false);

  if (grid) {
    auto& jc = out.joint;
    jc.thresholds = *grid;
    const std::size_t na = grid->a.size(), nb = grid->b.size(), nc = grid->c.size();
    jc.joint.assign(na * nb * nc, 0);
    jc.yz.assign(na * nb, 0);
    jc.y_gt.assign(na, 0);
    jc.z_gt.assign(nb, 0);
    jc.m_le.assign(nc, 0);
    for (const auto& s : samples) {
      if (!s.z) continue;  // joint law is estimated on observed crossings
      ++jc.n;
      for (std::size_t ia = 0; ia < na; ++ia) {
        const bool ya = s.y_t > grid->a[ia];
        if (ya) ++jc.y_gt[ia];
        for (std::size_t ib = 0; ib < nb; ++ib) {
          const bool zb = *s.z > grid->b[ib];
          if (ya && zb) ++jc.yz[ia * nb + ib];
          for (std::size_t ic = 0; ic < nc; ++ic) {
            if (ya && zb && s.m <= grid->c[ic]) ++jc.joint[(ia * nb + ib) * nc + ic];
          }
        }
      }
      for (std::size_t ib = 0; ib < nb; ++ib)
        if (*s.z > grid->b[ib]) ++jc.z_gt[ib];
      for (std::size_t ic = 0; ic < nc; ++ic)
        if (s.m <= grid->c[ic]) ++jc.m_le[ic];
    }
  }
  return out;
}

namespace {

// Raw-process two-sided exit, exact for sigma = 0.
struct RawExit {
  bool up_first = false;
  double position = 0.0;
};

RawExit raw_exit_exact(const LevyModel& m, double up_x, double down_z, Philox& rng) {
  const double c = m.drift;
  const double lam_up = m.has_up() ? m.up->rate : 0.0;
  const double lam_dn = m.has_down() ? m.down->rate : 0.0;
  const double lam = lam_up + lam_dn;
  double x_val = 0.0;
  while (true) {
    const double dt = lam > 0.0 ? rng.next_exponential(lam) : kInf;
    if (c > 0.0) {
      const double hit = (up_x - x_val) / c;
      if (hit <= dt) return {true, up_x};
    } else if (c < 0.0) {
      const double hit = (x_val + down_z) / (-c);
      if (hit <= dt) return {false, -down_z};
    }
    if (dt == kInf)
      throw Error("invalid-model", "raw exit cannot terminate without jumps or drift");
    x_val += c * dt;
    const bool is_up =
        lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
    if (is_up) {
      x_val += rng.next_exponential(m.up->decay);
      if (x_val > up_x) return {true, x_val};
    } else {
      x_val -= rng.next_exponential(m.down->decay);
      if (x_val < -down_z) return {false, x_val};
    }
  }
}

RawExit raw_exit_grid(const LevyModel& m, double up_x, double down_z, double step,
                      Philox& rng) {
  const double c = m.drift;
  const double sigma = m.sigma;
  const double lam_up = m.has_up() ? m.up->rate : 0.0;
  const double lam_dn = m.has_down() ? m.down->rate : 0.0;
  const double lam = lam_up + lam_dn;
  double time = 0.0, x_val = 0.0;
  double next_jump = lam > 0.0 ? rng.next_exponential(lam) : kInf;
  while (true) {
    const double next = std::min(time + step, next_jump);
    const double dt = next - time;
    x_val += c * dt + sigma * std::sqrt(dt) * rng.next_gaussian();
    time = next;
    if (x_val > up_x) return {true, x_val};
    if (x_val < -down_z) return {false, x_val};
    if (time == next_jump) {
      const bool is_up =
          lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
      if (is_up) {
        x_val += rng.next_exponential(m.up->decay);
        if (x_val > up_x) return {true, x_val};
      } else {
        x_val -= rng.next_exponential(m.down->decay);
        if (x_val < -down_z) return {false, x_val};
      }
      next_jump = time + rng.next_exponential(lam);
    }
  }
}

RawExit raw_exit(const LevyModel& m, double up_x, double down_z, double step,
                 Philox& rng) {
  return m.sigma == 0.0 ? raw_exit_exact(m, up_x, down_z, rng)
                        : raw_exit_grid(m, up_x, down_z, step, rng);
}

}  // namespace

Estimate importance_sample_exit(const LevyModel& model, double x, double z,
                                long long n, std::uint64_t seed, int workers) {
  if (!(z > 0.0)) throw Error("invalid-config", "exit barrier z must be positive");
  if (x == 0.0) return {1.0, 0.0};
  if (!(x > 0.0)) throw Error("invalid-config", "exit level x must be nonnegative");
  const CramerData cramer = cramer_gamma(model);
  const LevyModel tilted = esscher_tilt(model, cramer.gamma);
  const double step = 1e-3;

  const long long n_blocks = (n + 4095) / 4096;
  std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<double> block_sumsq(static_cast<std::size_t>(n_blocks), 0.0);
  parallel_blocks(
      n, workers,
      [&](long long i) {
        Philox rng(seed, static_cast<std::uint64_t>(i));
        const RawExit exit = raw_exit(tilted, x, z, step, rng);
        return exit.up_first ? std::exp(-cramer.gamma * exit.position) : 0.0;
      },
      [&](long long b, long long lo, long long hi, auto& f) {
        double s = 0.0, s2 = 0.0;
        for (long long i = lo; i < hi; ++i) {
          const double w = f(i);
          s += w;
          s2 += w * w;
        }
        block_sum[static_cast<std::size_t>(b)] = s;
        block_sumsq[static_cast<std::size_t>(b)] = s2;
      });
  double sum = 0.0, sumsq = 0.0;
  for (long long b = 0; b < n_blocks; ++b) {
    sum += block_sum[static_cast<std::size_t>(b)];
    sumsq += block_sumsq[static_cast<std::size_t>(b)];
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

Estimate straddle_probability(const LevyModel& model, double t, double x,
                              long long n, std::uint64_t seed, int workers) {
  if (model.sigma > 0.0)
    throw Error("unsupported-model",
                "straddle_probability requires an exact-path (sigma = 0) model");
  if (!(t > 0.0) || !(x > 0.0))
    throw Error("invalid-config", "straddle_probability needs t > 0 and x > 0");
  const double horizon = kInf;  // stops at the end of the excursion containing t
  const long long n_blocks = (n + 4095) / 4096;
  std::vector<long long> block_hits(static_cast<std::size_t>(n_blocks), 0);
  parallel_blocks(
      n, workers,
      [&](long long i) {
        Philox rng(seed, static_cast<std::uint64_t>(i));
        return run_reflected_exact(model, t, x, horizon, rng, StopPolicy::kStraddleOnly)
            .straddle;
      },
      [&](long long b, long long lo, long long hi, auto& f) {
        long long hits = 0;
        for (long long i = lo; i < hi; ++i) hits += f(i) ? 1 : 0;
        block_hits[static_cast<std::size_t>(b)] = hits;
      });
  long long hits = 0;
  for (long long h : block_hits) hits += h;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n))};
}

void raw_overshoots_at_levels(const LevyModel& model, const std::vector<double>& levels,
                              double step, Philox& rng, std::vector<double>& out) {
  out.assign(levels.size(), 0.0);
  if (levels.empty()) return;
  const double c = model.drift;
  const double sigma = model.sigma;
  const double lam_up = model.has_up() ? model.up->rate : 0.0;
  const double lam_dn = model.has_down() ? model.down->rate : 0.0;
  const double lam = lam_up + lam_dn;
  double time = 0.0, x_val = 0.0;
  std::size_t next_level = 0;
  double next_jump = lam > 0.0 ? rng.next_exponential(lam) : kInf;

  const auto record_cross = [&](double x_new, bool by_jump) {
    while (next_level < levels.size() && x_new > levels[next_level]) {
      out[next_level] = by_jump ? x_new - levels[next_level] : 0.0;
      ++next_level;
    }
  };

  while (next_level < levels.size()) {
    if (sigma == 0.0) {
      const double dt = lam > 0.0 ? rng.next_exponential(lam) : kInf;
      if (c > 0.0) {
        const double hit = (levels[next_level] - x_val) / c;
        if (hit <= dt) {
          // creeping: X passes the level continuously
          x_val = levels[next_level];
          time += hit;
          out[next_level] = 0.0;
          ++next_level;
          continue;
        }
      }
      if (dt == kInf)
        throw Error("invalid-model", "path cannot reach the level without upward motion");
      x_val += c * dt;
      time += dt;
      const bool is_up =
          lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
      if (is_up) {
        x_val += rng.next_exponential(model.up->decay);
        record_cross(x_val, true);
      } else {
        x_val -= rng.next_exponential(model.down->decay);
      }
    } else {
      const double next = std::min(time + step, next_jump);
      const double dt = next - time;
      x_val += c * dt + sigma * std::sqrt(dt) * rng.next_gaussian();
      time = next;
      record_cross(x_val, false);
      if (time == next_jump) {
        const bool is_up =
            lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
        if (is_up) {
          x_val += rng.next_exponential(model.up->decay);
          record_cross(x_val, true);
        } else {
          x_val -= rng.next_exponential(model.down->decay);
        }
        next_jump = time + rng.next_exponential(lam);
      }
    }
  }
}

double raw_down_crossing_position(const LevyModel& model, double z, double step,
                                  Philox& rng) {
  const RawExit exit = raw_exit(model, kInf, z, step, rng);
  return exit.position;
}

double raw_running_sup(const LevyModel& model, double t, double step, Philox& rng) {
  const double c = model.drift;
  const double sigma = model.sigma;
  const double lam_up = model.has_up() ? model.up->rate : 0.0;
  const double lam_dn = model.has_down() ? model.down->rate : 0.0;
  const double lam = lam_up + lam_dn;
  double time = 0.0, x_val = 0.0, xstar = 0.0;
  double next_jump = lam > 0.0 ? rng.next_exponential(lam) : kInf;
  while (time < t) {
    double next = sigma > 0.0 ? std::min(time + step, next_jump) : next_jump;
    if (next > t) next = t;
    const double dt = next - time;
    x_val += c * dt;
    if (sigma > 0.0) x_val += sigma * std::sqrt(dt) * rng.next_gaussian();
    if (x_val > xstar) xstar = x_val;
    time = next;
    if (time == next_jump) {
      const bool is_up =
          lam_dn == 0.0 || (lam_up > 0.0 && rng.next_uniform() * lam < lam_up);
      if (is_up) {
        x_val += rng.next_exponential(model.up->decay);
        if (x_val > xstar) xstar = x_val;
      } else {
        x_val -= rng.next_exponential(model.down->decay);
      }
      next_jump = time + rng.next_exponential(lam);
    }
  }
  return xstar;
}

}  // namespace reflectlab
