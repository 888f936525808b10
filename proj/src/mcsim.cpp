#include "walkwait/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace walkwait {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise combination.
  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }
};

}  // namespace

double simulate_once(const Scenario& scenario, const ArrivalModel& model,
                     const Strategy& strategy, CounterRng& rng) {
  const double tau = sample_arrival(model, rng);
  const double bus = scenario.bus_time(), walk = scenario.walk_time();
  return std::visit(
      overloaded{
          [&](const WaitForever&) { return tau + bus; },
          [&](const WalkNow&) { return walk; },
          [&](const WaitThenWalk& s) {
            return (s.t_wait > 0.0 && tau <= s.t_wait) ? tau + bus
                                                       : s.t_wait + walk;
          },
          [&](const WalkAndWait& s) {
            const double t1 = head_start(scenario, s.plan);
            if (tau < t1) return rng.uniform() < s.plan.p_catch ? tau + bus : walk;
            if (s.plan.t_wait > 0.0 && tau <= t1 + s.plan.t_wait) return tau + bus;
            return walk + s.plan.t_wait;
          }},
      strategy);
}

SimEstimate estimate(const Scenario& scenario, const ArrivalModel& model,
                     const Strategy& strategy, std::uint64_t n,
                     std::uint64_t seed, unsigned threads) {
  if (n < 2) throw DomainError("estimate: n must be >= 2");
  if (const auto* s = std::get_if<WalkAndWait>(&strategy)) validate(scenario, s->plan);

  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Welford> partial(chunks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      CounterRng rng(seed, c);
      const std::uint64_t begin = c * kChunkSize;
      const std::uint64_t end = std::min(n, begin + kChunkSize);
      Welford acc;
      for (std::uint64_t i = begin; i < end; ++i)
        acc.push(simulate_once(scenario, model, strategy, rng));
      partial[c] = acc;
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  Welford total;
  for (const auto& w : partial) total.merge(w);
  const double var = total.m2 / static_cast<double>(total.n - 1);
  return {total.mean, std::sqrt(var / static_cast<double>(total.n)), total.n};
}

double analytic_expected_tt(const Scenario& scenario, const ArrivalModel& model,
                            const Strategy& strategy) {
  return std::visit(
      overloaded{
          [&](const WaitForever&) { return expected_tt_wait_forever(scenario, model); },
          [&](const WalkNow&) { return scenario.walk_time(); },
          [&](const WaitThenWalk& s) { return expected_tt(scenario, model, s.t_wait); },
          [&](const WalkAndWait& s) { return expected_tt_plan(scenario, model, s.plan); }},
      strategy);
}

}  // namespace walkwait
