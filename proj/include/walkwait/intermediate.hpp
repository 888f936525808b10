#pragma once

// Walking towards an intermediate stop, possibly catching a bus on the way,
// then waiting there for a bounded time.
//
// Every bus time tau below is the time the bus passes the ORIGIN stop. A bus
// caught anywhere along the route delivers the traveller at tau + d/v_b.

#include <optional>

#include "walkwait/arrivals.hpp"
#include "walkwait/expectation.hpp"

namespace walkwait {

struct WalkAndWaitPlan {
  double d1;       // km walked before waiting, in [0, d]
  double t_wait;   // minutes, clocked from arrival at the intermediate stop
  double p_catch;  // chance of boarding a bus that overtakes the walker
};

/// Throws std::invalid_argument when the plan does not fit the scenario.
void validate(const Scenario& scenario, const WalkAndWaitPlan& plan);

/// Head start eroded while walking d1: d1/v_w - d1/v_b.
double head_start(const Scenario& scenario, const WalkAndWaitPlan& plan);

/// Break-even wait from the intermediate stop: T_delta - T_1.
double t_delta_from_stop(const Scenario& scenario, const WalkAndWaitPlan& plan);

/// Probability that a bus overtakes the walker before the stop.
double prob_miss(const Scenario& scenario, const ArrivalModel& model,
                 const WalkAndWaitPlan& plan);

double expected_tt_plan(const Scenario& scenario, const ArrivalModel& model,
                        const WalkAndWaitPlan& plan);

/// Derivatives with respect to the wait at the intermediate stop.
GradientPair plan_gradient_tw(const Scenario& scenario,
                              const ArrivalModel& model,
                              const WalkAndWaitPlan& plan);

/// q^2 (d - d1) [(1 - P_C) p(T_1) - p(T_1 + T_W)], in min/km.
double plan_gradient_d1(const Scenario& scenario, const ArrivalModel& model,
                        const WalkAndWaitPlan& plan);

/// Walk the whole way, boarding an overtaking bus with probability p_catch:
/// d/v_w - P_C int_0^{T_delta} (T_delta - tau) p(tau) dtau.
double expected_tt_walk_vigilant(const Scenario& scenario,
                                 const ArrivalModel& model, double p_catch);

/// E_A - E_* from the regrouped expression
///   P_C T_delta (1 - R(T_delta)) + (1 - P_C) int_0^{T_delta} tau p
///     + int_{T_delta}^inf tau p - T_delta.
/// Positive values are the expected saving from walking.
double walk_vs_wait_advantage(const Scenario& scenario,
                              const ArrivalModel& model, double p_catch);

/// Smallest catch probability above which vigilant walking beats waiting
/// indefinitely for uniform headway T = ratio * T_delta. nullopt when no
/// probability in [0, 1] suffices.
std::optional<double> uniform_pc_threshold(double headway_ratio);

/// Bisection on p_catch in [0, 1] for the sign change of
/// walk_vs_wait_advantage. Returns 0 when walking already wins at p_catch = 0
/// and nullopt when it cannot win for any p_catch <= 1.
std::optional<double> locate_pc_breakeven(const Scenario& scenario,
                                          const ArrivalModel& model);

}  // namespace walkwait
