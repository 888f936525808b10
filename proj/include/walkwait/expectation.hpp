#pragma once

// Expected travel time when waiting up to a fixed time before walking, and
// its derivatives with respect to that waiting time.

#include "walkwait/arrivals.hpp"

namespace walkwait {

/// Journey geometry. Distances in km, speeds in km/min.
class Scenario {
 public:
  Scenario(double distance, double walk_speed, double bus_speed);

  double distance() const { return distance_; }
  double walk_speed() const { return walk_speed_; }
  double bus_speed() const { return bus_speed_; }

  double walk_time() const { return distance_ / walk_speed_; }
  double bus_time() const { return distance_ / bus_speed_; }
  /// Walking time minus riding time over the whole journey.
  double t_delta() const { return walk_time() - bus_time(); }
  /// Pace difference 1/v_w - 1/v_b in min/km.
  double q() const { return 1.0 / walk_speed_ - 1.0 / bus_speed_; }

 private:
  double distance_;
  double walk_speed_;
  double bus_speed_;
};

inline double t_delta(const Scenario& s) { return s.t_delta(); }

struct Unbounded {};
inline constexpr Unbounded unbounded{};

/// Maximum waiting time: a finite number of minutes or "wait forever".
class WaitLimit {
 public:
  WaitLimit(double minutes);  // NOLINT(google-explicit-constructor)
  WaitLimit(Unbounded) : minutes_(0.0), unbounded_(true) {}  // NOLINT

  bool is_unbounded() const { return unbounded_; }
  /// Throws DomainError when unbounded.
  double minutes() const;

 private:
  double minutes_;
  bool unbounded_ = false;
};

struct GradientPair {
  double first;
  double second;
  bool one_sided = false;
};

/// int_a^c (tau + d/v_b) p(tau) dtau: the contribution of boarding a bus
/// that reaches the origin at tau. c may be +inf.
double boarding_moment(const Scenario& scenario, const ArrivalModel& model,
                       double a, double c);

double expected_tt(const Scenario& scenario, const ArrivalModel& model,
                   WaitLimit t_wait);

/// Same functional, always through adaptive quadrature of the integrand.
double expected_tt_quadrature(const Scenario& scenario,
                              const ArrivalModel& model, WaitLimit t_wait);

double expected_tt_wait_forever(const Scenario& scenario,
                                const ArrivalModel& model);

/// first  = R(t) - T_delta p(t)
/// second = -p(t) - T_delta p'(t)
GradientPair expected_tt_gradient(const Scenario& scenario,
                                  const ArrivalModel& model, double t_wait);

}  // namespace walkwait
