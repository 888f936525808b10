#pragma once

// Monte Carlo journey simulator. Serves as an independent check on every
// analytic expectation in the library.

#include <cstdint>
#include <variant>

#include "walkwait/arrivals.hpp"
#include "walkwait/expectation.hpp"
#include "walkwait/intermediate.hpp"
#include "walkwait/rng.hpp"

namespace walkwait {

struct WaitForever {};
struct WalkNow {};
struct WaitThenWalk {
  double t_wait;
};
struct WalkAndWait {
  WalkAndWaitPlan plan;
};

using Strategy = std::variant<WaitForever, WalkNow, WaitThenWalk, WalkAndWait>;

struct SimEstimate {
  double mean;
  double std_error;
  std::uint64_t n;
};

/// Draws from each chunk of this many journeys use their own RNG stream.
inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 16;

/// One journey. Consumes one arrival draw, plus one catch draw only when a
/// walk-and-wait traveller is overtaken before the stop.
double simulate_once(const Scenario& scenario, const ArrivalModel& model,
                     const Strategy& strategy, CounterRng& rng);

/// Mean and standard error of n journeys. The result depends only on
/// (inputs, n, seed); `threads` = 0 picks the hardware concurrency.
SimEstimate estimate(const Scenario& scenario, const ArrivalModel& model,
                     const Strategy& strategy, std::uint64_t n,
                     std::uint64_t seed, unsigned threads = 0);

/// Expected travel time of the strategy from the analytic modules.
double analytic_expected_tt(const Scenario& scenario, const ArrivalModel& model,
                            const Strategy& strategy);

}  // namespace walkwait
