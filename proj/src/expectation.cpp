#include "walkwait/expectation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "walkwait/quadrature.hpp"

namespace walkwait {

Scenario::Scenario(double distance, double walk_speed, double bus_speed)
    : distance_(distance), walk_speed_(walk_speed), bus_speed_(bus_speed) {
  if (!(distance > 0.0) || !std::isfinite(distance))
    throw std::invalid_argument("scenario: distance must be > 0");
  if (!(walk_speed > 0.0) || !std::isfinite(walk_speed))
    throw std::invalid_argument("scenario: walk speed must be > 0");
  if (!(bus_speed > walk_speed) || !std::isfinite(bus_speed))
    throw std::invalid_argument("scenario: bus speed must exceed walk speed");
}

WaitLimit::WaitLimit(double minutes) : minutes_(minutes) {
  if (!(minutes >= 0.0) || std::isnan(minutes))
    throw DomainError("wait time must be >= 0");
  if (std::isinf(minutes)) unbounded_ = true;
}

double WaitLimit::minutes() const {
  if (unbounded_) throw DomainError("wait time is unbounded");
  return minutes_;
}

double boarding_moment(const Scenario& scenario, const ArrivalModel& model,
                       double a, double c) {
  if (!(c > a)) return 0.0;
  const double mass = survival(model, a) - survival(model, c);
  return first_moment(model, a, c) + scenario.bus_time() * mass;
}

double expected_tt(const Scenario& scenario, const ArrivalModel& model,
                   WaitLimit t_wait) {
  if (t_wait.is_unbounded()) return expected_tt_wait_forever(scenario, model);
  const double w = t_wait.minutes();
  if (w == 0.0) return scenario.walk_time();

  const double bus = scenario.bus_time(), walk = scenario.walk_time();
  if (const auto* m = model.get_if<Uniform>()) {
    const double T = m->headway;
    const double a = std::min(w, T);
    const double r = (T - a) / T;
    return (a / T) * bus + a * a / (2.0 * T) + r * (walk + w);
  }
  if (const auto* m = model.get_if<Exponential>()) {
    const double r = m->rate;
    const double stay = std::exp(-r * w);
    const double gone = -std::expm1(-r * w);
    return (bus + 1.0 / r) * gone + stay * walk;
  }
  return boarding_moment(scenario, model, 0.0, w) +
         survival(model, w) * (walk + w);
}

double expected_tt_quadrature(const Scenario& scenario,
                              const ArrivalModel& model, WaitLimit t_wait) {
  auto [lo, hi] = support(model);
  if (const auto* m = model.get_if<Exponential>()) hi = 60.0 / m->rate;
  double upper = hi;
  double stay = 0.0;
  double fallback = 0.0;
  if (!t_wait.is_unbounded()) {
    const double w = t_wait.minutes();
    upper = std::min(w, hi);
    stay = survival(model, w);
    fallback = scenario.walk_time() + w;
  }
  const double bus = scenario.bus_time();
  const auto cuts = breakpoints(model);
  const auto boarded = integrate_piecewise(
      [&](double x) { return (bus + x) * density(model, x); }, cuts,
      std::max(0.0, lo), upper);
  return boarded.value + stay * fallback;
}

double expected_tt_wait_forever(const Scenario& scenario,
                                const ArrivalModel& model) {
  return scenario.bus_time() + mean_arrival(model);
}

GradientPair expected_tt_gradient(const Scenario& scenario,
                                  const ArrivalModel& model, double t_wait) {
  if (!(t_wait >= 0.0)) throw DomainError("gradient: wait time must be >= 0");
  const double td = scenario.t_delta();
  const double p = density(model, t_wait);
  const Slope dp = density_slope(model, t_wait);
  return {survival(model, t_wait) - td * p, -p - td * dp.value, dp.one_sided};
}

}  // namespace walkwait
