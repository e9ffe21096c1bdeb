#include "reflectlab/levy_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "reflectlab/error.hpp"

namespace reflectlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_component(const std::optional<JumpComponent>& c, const char* side) {
  if (!c) return;
  if (!(c->rate > 0.0) || !std::isfinite(c->rate))
    throw Error("invalid-model", std::string(side) + " jump rate must be positive");
  if (!(c->decay > 0.0) || !std::isfinite(c->decay))
    throw Error("invalid-model", std::string(side) + " jump decay must be positive");
}

}  // namespace

LevyModel make_model(double drift, double sigma, std::optional<JumpComponent> up,
                     std::optional<JumpComponent> down) {
  if (!std::isfinite(drift)) throw Error("invalid-model", "drift must be finite");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw Error("invalid-model", "sigma must be nonnegative");
  check_component(up, "up");
  check_component(down, "down");
  if (sigma == 0.0 && !up && !down)
    throw Error("invalid-model",
                "pure-drift model is degenerate (lattice paths, no reflection dynamics)");
  LevyModel m;
  m.drift = drift;
  m.sigma = sigma;
  m.up = up;
  m.down = down;
  return m;
}

double theta_max(const LevyModel& model) {
  return model.has_up() ? model.up->decay : kInf;
}

namespace {

template <typename T>
T psi_impl(const LevyModel& m, T theta) {
  T value = m.drift * theta + 0.5 * m.sigma * m.sigma * theta * theta;
  if (m.has_up()) value += m.up->rate * theta / (m.up->decay - theta);
  if (m.has_down()) value -= m.down->rate * theta / (m.down->decay + theta);
  return value;
}

void check_domain(const LevyModel& m, double theta) {
  if (m.has_up() && theta >= m.up->decay)
    throw Error("pole", "psi: theta >= up-jump pole alpha = " +
                            std::to_string(m.up->decay));
  if (m.has_down() && theta <= -m.down->decay)
    throw Error("pole", "psi: theta <= down-jump pole -beta = " +
                            std::to_string(-m.down->decay));
}

}  // namespace

double psi(const LevyModel& model, double theta) {
  check_domain(model, theta);
  return psi_impl(model, theta);
}

std::complex<double> psi(const LevyModel& model, std::complex<double> theta) {
  if (theta.imag() == 0.0) check_domain(model, theta.real());
  return psi_impl(model, theta);
}

double psi_derivative(const LevyModel& model, double theta) {
  check_domain(model, theta);
  double value = model.drift + model.sigma * model.sigma * theta;
  if (model.has_up()) {
    const double d = model.up->decay - theta;
    value += model.up->rate * model.up->decay / (d * d);
  }
  if (model.has_down()) {
    const double d = model.down->decay + theta;
    value -= model.down->rate * model.down->decay / (d * d);
  }
  return value;
}

double mean_x1(const LevyModel& model) {
  double mean = model.drift;
  if (model.has_up()) mean += model.up->rate / model.up->decay;
  if (model.has_down()) mean -= model.down->rate / model.down->decay;
  return mean;
}

CramerData cramer_gamma(const LevyModel& model) {
  const double mean = mean_x1(model);
  if (!(mean < 0.0))
    throw Error("no-cramer-root",
                "Cramer condition requires E[X(1)] < 0, got " + std::to_string(mean));
  if (!model.upward_capable())
    throw Error("no-cramer-root",
                "process never moves upward; psi has no positive root");

  const double tmax = theta_max(model);
  const double hi_cap = std::isfinite(tmax) ? tmax - 1e-9 * std::max(1.0, tmax) : 1e8;

  // psi'(0) = mean < 0, so psi is negative just right of zero; scan
  // geometrically for the first positive value to bracket the root.
  double lo = 1e-12;
  double hi = lo;
  bool bracketed = false;
  for (double step = 1e-6; hi < hi_cap;) {
    hi = std::min(hi + step, hi_cap);
    if (psi_impl(model, hi) > 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    step *= 1.7;
    if (hi >= hi_cap) break;
  }
  if (!bracketed && psi_impl(model, hi_cap) > 0.0) bracketed = true, hi = hi_cap;
  if (!bracketed)
    throw Error("no-cramer-root", "psi never crosses zero on (0, theta_max)");

  double f_lo = psi_impl(model, lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = psi_impl(model, mid);
    if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (std::abs(f_mid) <= 1e-12 && (hi - lo) <= 1e-14 * std::max(1.0, mid)) break;
  }
  double gamma = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double f = psi_impl(model, gamma);
    const double fp = psi_derivative(model, gamma);
    if (fp <= 0.0) break;
    const double next = gamma - f / fp;
    if (!(next > 0.0) || (std::isfinite(tmax) && next >= tmax)) break;
    gamma = next;
  }

  const double slope = psi_derivative(model, gamma);
  if (!(gamma > 0.0) || !(slope > 0.0))
    throw Error("no-cramer-root", "failed to isolate a simple positive root of psi");
  return CramerData{gamma, mean, tmax, slope};
}

LevyModel esscher_tilt(const LevyModel& model, double gamma) {
  if (gamma == 0.0) return model;
  check_domain(model, gamma);
  LevyModel tilted = model;
  tilted.drift = model.drift + model.sigma * model.sigma * gamma;
  if (model.has_up()) {
    const double a = model.up->decay;
    tilted.up = JumpComponent{model.up->rate * a / (a - gamma), a - gamma};
  }
  if (model.has_down()) {
    const double b = model.down->decay;
    tilted.down = JumpComponent{model.down->rate * b / (b + gamma), b + gamma};
  }
  return tilted;
}

}  // namespace reflectlab
