#include "walkwait/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace walkwait {
namespace {

// R(t) - T_delta p(t): same roots as lambda - 1/T_delta, opposite sign, and
// no division by a vanishing survival near the end of the support.
double stationarity_residual(const Scenario& s, const ArrivalModel& m, double t) {
  return survival(m, t) - s.t_delta() * density(m, t);
}

PointKind classify(const ArrivalModel& model, double t) {
  const double slope = appearance_rate_slope(model, t).value;
  if (std::abs(slope) < kFlatSlope) return PointKind::flat;
  return slope < 0.0 ? PointKind::minimum : PointKind::maximum;
}

}  // namespace

double default_horizon(const ArrivalModel& model) {
  if (const auto* m = model.get_if<Exponential>())
    return mean_arrival(model) + 10.0 / m->rate;
  return support(model).second;
}

std::vector<StationaryPoint> find_stationary_points(const Scenario& scenario,
                                                    const ArrivalModel& model,
                                                    double horizon) {
  if (!(horizon > 0.0)) throw DomainError("find_stationary_points: horizon must be > 0");
  std::vector<StationaryPoint> out;
  const double td = scenario.t_delta();

  if (const auto* m = model.get_if<Exponential>()) {
    if (std::abs(m->rate * td - 1.0) < kFlatSlope)
      out.push_back({0.0, PointKind::flat, scenario.walk_time()});
    return out;
  }

  const double end = std::min(horizon, support(model).second);
  if (!(end > 0.0)) return out;

  std::vector<double> grid(kRootScanPoints), h(kRootScanPoints);
  bool all_zero = true;
  for (int i = 0; i < kRootScanPoints; ++i) {
    grid[i] = end * static_cast<double>(i) / kRootScanPoints;
    h[i] = stationarity_residual(scenario, model, grid[i]);
    all_zero = all_zero && std::abs(h[i]) <= kFlatSlope;
  }
  if (all_zero) {
    out.push_back({0.0, PointKind::flat, scenario.walk_time()});
    return out;
  }

  auto accept = [&](double t) {
    if (std::abs(stationarity_residual(scenario, model, t)) >= kStationaryResidual)
      return;  // sign flip across a density jump, not a root
    out.push_back({t, classify(model, t), expected_tt(scenario, model, t)});
  };

  for (int i = 1; i < kRootScanPoints; ++i) {
    if (h[i] == 0.0) {
      accept(grid[i]);
      continue;
    }
    if (h[i - 1] == 0.0 || (h[i - 1] < 0.0) == (h[i] < 0.0)) continue;
    double lo = grid[i - 1], hi = grid[i];
    const bool lo_negative = h[i - 1] < 0.0;
    while (hi - lo > kRootWidth) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double hm = stationarity_residual(scenario, model, mid);
      if (hm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((hm < 0.0) == lo_negative)
        lo = mid;
      else
        hi = mid;
    }
    accept(0.5 * (lo + hi));
  }
  return out;
}

PolicyChoice optimal_policy(const Scenario& scenario, const ArrivalModel& model,
                            double horizon) {
  // Candidates in tie-break priority order.
  std::vector<PolicyChoice> candidates{
      {StrategyKind::walk_now, 0.0, scenario.walk_time()},
      {StrategyKind::wait_forever, 0.0, expected_tt_wait_forever(scenario, model)}};
  for (const auto& p : find_stationary_points(scenario, model, horizon))
    if (p.kind == PointKind::minimum && p.t_wait > 0.0)
      candidates.push_back({StrategyKind::wait_then_walk, p.t_wait, p.expected_tt});
  std::stable_sort(candidates.begin() + 2, candidates.end(),
                   [](const auto& a, const auto& b) { return a.t_wait < b.t_wait; });

  PolicyChoice best = candidates.front();
  for (const auto& c : candidates)
    if (c.expected_tt < best.expected_tt - kTieTolerance) best = c;
  for (const auto& c : candidates) {
    const bool same = c.strategy == best.strategy && c.t_wait == best.t_wait;
    if (!same && std::abs(c.expected_tt - best.expected_tt) <= kTieTolerance)
      best.tie_broken = true;
  }
  return best;
}

PolicyChoice optimal_policy(const Scenario& scenario, const ArrivalModel& model) {
  return optimal_policy(scenario, model, default_horizon(model));
}

Verdict compare_wait_walk(const Scenario& scenario, const ArrivalModel& model) {
  const double diff = mean_arrival(model) - scenario.t_delta();
  if (std::abs(diff) <= 1e-12 * std::max(1.0, scenario.t_delta()))
    return Verdict::indifferent;
  return diff < 0.0 ? Verdict::wait : Verdict::walk;
}

UniformCase classify_uniform(const Scenario& scenario, double headway) {
  if (!(headway > 0.0)) throw DomainError("classify_uniform: headway must be > 0");
  const double td = scenario.t_delta();
  if (std::abs(headway - 2.0 * td) < 1e-12 * std::max(1.0, td))
    return UniformCase::marginal;
  if (headway <= td) return UniformCase::case1_wait;
  if (headway < 2.0 * td) return UniformCase::case2_wait_with_interior_max;
  return UniformCase::case3_walk;
}

std::string_view to_string(PointKind k) {
  switch (k) {
    case PointKind::minimum: return "minimum";
    case PointKind::maximum: return "maximum";
    case PointKind::flat: return "flat";
  }
  return "?";
}

std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::wait_forever: return "wait_forever";
    case StrategyKind::walk_now: return "walk_now";
    case StrategyKind::wait_then_walk: return "wait_then_walk";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::wait: return "wait";
    case Verdict::walk: return "walk";
    case Verdict::indifferent: return "indifferent";
  }
  return "?";
}

std::string_view to_string(UniformCase c) {
  switch (c) {
    case UniformCase::case1_wait: return "case1_wait";
    case UniformCase::case2_wait_with_interior_max: return "case2_wait_with_interior_max";
    case UniformCase::case3_walk: return "case3_walk";
    case UniformCase::marginal: return "marginal";
  }
  return "?";
}

}  // namespace walkwait
