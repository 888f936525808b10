#pragma once

// Stationary points of the wait-then-walk expectation and policy selection.

#include <optional>
#include <string_view>
#include <vector>

#include "walkwait/arrivals.hpp"
#include "walkwait/expectation.hpp"

namespace walkwait {

enum class PointKind { minimum, maximum, flat };

struct StationaryPoint {
  double t_wait;
  PointKind kind;
  double expected_tt;
};

enum class StrategyKind { wait_forever, walk_now, wait_then_walk };

struct PolicyChoice {
  StrategyKind strategy;
  double t_wait;  // meaningful for wait_then_walk only
  double expected_tt;
  // Another candidate came within kTieTolerance and lost on the tie-break
  // order walk_now, wait_forever, smallest t_wait.
  bool tie_broken = false;
};

enum class Verdict { wait, walk, indifferent };

enum class UniformCase {
  case1_wait,
  case2_wait_with_interior_max,
  case3_walk,
  marginal
};

inline constexpr int kRootScanPoints = 4096;
inline constexpr double kRootWidth = 1e-10;
inline constexpr double kStationaryResidual = 1e-9;
inline constexpr double kFlatSlope = 1e-12;
inline constexpr double kTieTolerance = 1e-9;

/// End of the interval worth searching: the support end when finite,
/// mean + 10/rate for exponential arrivals.
double default_horizon(const ArrivalModel& model);

/// Roots of lambda(t) = 1/T_delta on (0, min(horizon, support end)),
/// bracketed on a fixed grid and refined by bisection. Jumps of the density
/// that flip the sign without a genuine root are discarded. When the
/// appearance rate equals 1/T_delta everywhere a single flat marker at t = 0
/// is returned.
std::vector<StationaryPoint> find_stationary_points(const Scenario& scenario,
                                                    const ArrivalModel& model,
                                                    double horizon);

PolicyChoice optimal_policy(const Scenario& scenario, const ArrivalModel& model,
                            double horizon);
PolicyChoice optimal_policy(const Scenario& scenario, const ArrivalModel& model);

Verdict compare_wait_walk(const Scenario& scenario, const ArrivalModel& model);

UniformCase classify_uniform(const Scenario& scenario, double headway);

std::string_view to_string(PointKind k);
std::string_view to_string(StrategyKind k);
std::string_view to_string(Verdict v);
std::string_view to_string(UniformCase c);

}  // namespace walkwait
