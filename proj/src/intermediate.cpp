#include "walkwait/intermediate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace walkwait {

void validate(const Scenario& scenario, const WalkAndWaitPlan& plan) {
  if (!(plan.d1 >= 0.0 && plan.d1 <= scenario.distance()))
    throw std::invalid_argument("plan: d1 must lie in [0, d]");
  if (!(plan.t_wait >= 0.0))
    throw std::invalid_argument("plan: t_wait must be >= 0");
  if (!(plan.p_catch >= 0.0 && plan.p_catch <= 1.0))
    throw std::invalid_argument("plan: p_catch must lie in [0, 1]");
}

double head_start(const Scenario& scenario, const WalkAndWaitPlan& plan) {
  return std::min(plan.d1 * scenario.q(), scenario.t_delta());
}

double t_delta_from_stop(const Scenario& scenario, const WalkAndWaitPlan& plan) {
  return std::max(0.0, (scenario.distance() - plan.d1) * scenario.q());
}

double prob_miss(const Scenario& scenario, const ArrivalModel& model,
                 const WalkAndWaitPlan& plan) {
  validate(scenario, plan);
  return cdf(model, head_start(scenario, plan));
}

double expected_tt_plan(const Scenario& scenario, const ArrivalModel& model,
                        const WalkAndWaitPlan& plan) {
  validate(scenario, plan);
  const double t1 = head_start(scenario, plan);
  const double walk = scenario.walk_time();
  const double pc = plan.p_catch;

  // Bus passes before the stop is reached: caught with probability P_C,
  // otherwise the rest of the way is walked.
  double total = 0.0;
  if (t1 > 0.0) {
    total += pc * boarding_moment(scenario, model, 0.0, t1);
    total += (1.0 - pc) * cdf(model, t1) * walk;
  }

  // No bus yet on reaching the stop: wait up to T_W there.
  if (std::isinf(plan.t_wait)) {
    total += boarding_moment(scenario, model, t1,
                             std::numeric_limits<double>::infinity());
  } else {
    const double give_up = t1 + plan.t_wait;
    total += boarding_moment(scenario, model, t1, give_up);
    total += survival(model, give_up) * (walk + plan.t_wait);
  }
  return total;
}

GradientPair plan_gradient_tw(const Scenario& scenario,
                              const ArrivalModel& model,
                              const WalkAndWaitPlan& plan) {
  validate(scenario, plan);
  const double t = head_start(scenario, plan) + plan.t_wait;
  const double td1 = t_delta_from_stop(scenario, plan);
  const double p = density(model, t);
  const Slope dp = density_slope(model, t);
  return {survival(model, t) - td1 * p, -p - td1 * dp.value, dp.one_sided};
}

double plan_gradient_d1(const Scenario& scenario, const ArrivalModel& model,
                        const WalkAndWaitPlan& plan) {
  validate(scenario, plan);
  const double q = scenario.q();
  const double t1 = head_start(scenario, plan);
  const double bracket = (1.0 - plan.p_catch) * density(model, t1) -
                         density(model, t1 + plan.t_wait);
  return q * q * (scenario.distance() - plan.d1) * bracket;
}

double expected_tt_walk_vigilant(const Scenario& scenario,
                                 const ArrivalModel& model, double p_catch) {
  if (!(p_catch >= 0.0 && p_catch <= 1.0))
    throw DomainError("p_catch must lie in [0, 1]");
  const double td = scenario.t_delta();
  const double shortfall = td * cdf(model, td) - first_moment(model, 0.0, td);
  return scenario.walk_time() - p_catch * shortfall;
}

double walk_vs_wait_advantage(const Scenario& scenario,
                              const ArrivalModel& model, double p_catch) {
  if (!(p_catch >= 0.0 && p_catch <= 1.0))
    throw DomainError("p_catch must lie in [0, 1]");
  const double td = scenario.t_delta();
  const double early = first_moment(model, 0.0, td);
  const double late =
      first_moment(model, td, std::numeric_limits<double>::infinity());
  return p_catch * td * cdf(model, td) + (1.0 - p_catch) * early + late - td;
}

std::optional<double> uniform_pc_threshold(double headway_ratio) {
  if (!(headway_ratio > 0.0) || !std::isfinite(headway_ratio))
    throw DomainError("uniform_pc_threshold: ratio must be > 0");
  if (headway_ratio < 1.0) return std::nullopt;
  if (headway_ratio > 2.0) return 0.0;
  return headway_ratio * (2.0 - headway_ratio);
}

std::optional<double> locate_pc_breakeven(const Scenario& scenario,
                                          const ArrivalModel& model) {
  auto adv = [&](double pc) { return walk_vs_wait_advantage(scenario, model, pc); };
  const double tol = 1e-12 * std::max(1.0, scenario.t_delta());
  if (adv(0.0) >= -tol) return 0.0;
  if (adv(1.0) <= tol) return std::nullopt;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (adv(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace walkwait
