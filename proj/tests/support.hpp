#pragma once

// Test-only reference computations and random model generators.
//
// The oracles here touch a model only through density(); every integral is a
// fixed composite Simpson rule over pieces whose edges come from the
// generator's own parameters, never from the library's breakpoints() or
// closed forms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "walkwait/arrivals.hpp"
#include "walkwait/expectation.hpp"

namespace walkwait::testing {

struct GeneratedModel {
  ArrivalModel model;
  std::vector<double> edges;  // piece boundaries, ascending, from 0 to the end
};

/// Composite Simpson on each [edges[i], edges[i+1]] clipped to [a, b], with
/// panel ends pulled one ulp inside so right-continuous jumps are avoided.
inline double fine_integral(const std::function<double(double)>& f,
                            std::vector<double> edges, double a, double b,
                            int panels_per_piece = 2000) {
  edges.push_back(a);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = std::max(a, edges[i]), hi = std::min(b, edges[i + 1]);
    if (!(hi > lo)) continue;
    const double h = (hi - lo) / panels_per_piece;
    auto g = [&](double x) {
      return f(std::clamp(x, std::nextafter(lo, hi), std::nextafter(hi, lo)));
    };
    double s = g(lo) + g(hi);
    for (int k = 1; k < panels_per_piece; ++k)
      s += (k % 2 ? 4.0 : 2.0) * g(lo + k * h);
    total += s * h / 3.0;
  }
  return total;
}

inline double oracle_mass(const GeneratedModel& g, double a, double b) {
  return fine_integral([&](double t) { return density(g.model, t); }, g.edges, a, b);
}

inline double oracle_first_moment(const GeneratedModel& g, double a, double b) {
  return fine_integral([&](double t) { return t * density(g.model, t); }, g.edges, a, b);
}

/// Expected travel time when waiting up to w, straight from its definition.
inline double oracle_expected_tt(const Scenario& s, const GeneratedModel& g, double w) {
  const double boarded = fine_integral(
      [&](double t) { return (s.bus_time() + t) * density(g.model, t); }, g.edges, 0.0, w);
  const double stay = 1.0 - oracle_mass(g, 0.0, w);
  return boarded + stay * (s.walk_time() + w);
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline GeneratedModel uniform_model(double T) {
  return {ArrivalModel(Uniform(T)), {0.0, T}};
}

inline GeneratedModel exponential_model(double rate) {
  // Mass beyond 60/rate is below e^-60.
  std::vector<double> edges;
  for (int k = 0; k <= 60; ++k) edges.push_back(k / rate);
  return {ArrivalModel(Exponential(rate)), edges};
}

inline GeneratedModel late_bus_model(double w, double L, double H) {
  return {ArrivalModel(LateBusMixture(w, L, H)), {0.0, L, H, H + L}};
}

inline GeneratedModel piecewise_model(std::vector<Knot> knots) {
  std::vector<double> edges{0.0};
  for (const auto& k : knots) edges.push_back(k.t);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return {ArrivalModel(PiecewiseLinearDensity(std::move(knots))), edges};
}

/// Random model of kind `kind % 4` with parameters on the scale of minutes.
inline GeneratedModel random_model(std::mt19937_64& rng, int kind) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  switch (kind % 4) {
    case 0:
      return uniform_model(5.0 + 55.0 * U(rng));
    case 1:
      return exponential_model(1.0 / (5.0 + 40.0 * U(rng)));
    case 2: {
      const double L = 2.0 + 6.0 * U(rng);
      return late_bus_model(0.05 + 0.9 * U(rng), L, L + 5.0 + 40.0 * U(rng));
    }
    default: {
      std::vector<Knot> knots;
      double t = 5.0 * U(rng);
      const int n = 3 + static_cast<int>(5 * U(rng));
      for (int i = 0; i < n; ++i) {
        knots.push_back({t, 0.05 + U(rng)});
        t += 1.0 + 10.0 * U(rng);
      }
      knots.push_back({t, U(rng) < 0.5 ? 0.0 : 0.3 * U(rng)});
      return piecewise_model(std::move(knots));
    }
  }
}

/// Random journey with T_delta between roughly 5 and 50 minutes.
inline Scenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double d = 0.5 + 4.5 * U(rng);
  const double vw = (4.0 + 2.0 * U(rng)) / 60.0;
  const double vb = (15.0 + 30.0 * U(rng)) / 60.0;
  return Scenario(d, vw, vb);
}

/// Scenario with d = 3 km, 6 km/h walking, 30 km/h bus: T_delta = 24 min.
inline Scenario s0() { return Scenario(3.0, 0.1, 0.5); }

/// Random point strictly inside a smooth piece, at least `margin` from edges.
inline double random_interior_point(std::mt19937_64& rng, const GeneratedModel& g,
                                    double end, double margin = 1e-2) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double t = end * U(rng);
    bool ok = t > margin && t < end - margin;
    for (double e : g.edges) ok = ok && std::abs(t - e) > margin;
    if (ok) return t;
  }
}

/// Where the interesting mass ends: support end, or 8 means for exponential.
inline double model_end(const GeneratedModel& g) {
  if (const auto* e = g.model.get_if<Exponential>()) return 8.0 / e->rate;
  return g.edges.back();
}

}  // namespace walkwait::testing
