#pragma once

// Bus arrival-time distributions. Time is in minutes throughout; t = 0 is the
// moment the traveller reaches the stop.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace walkwait {

class CounterRng;

/// Raised for arguments outside an operation's domain (negative times etc.).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the appearance rate is requested where survival is zero.
class UndefinedRateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Punctual buses every `headway` minutes, phase unknown: p(t) = 1/T on [0, T).
struct Uniform {
  double headway;
  explicit Uniform(double headway);
};

/// Poisson arrivals with constant appearance rate.
struct Exponential {
  double rate;
  explicit Exponential(double rate);
};

/// A bus that may be running late.
///
/// With probability `still_coming` the current bus has not yet passed and
/// arrives with the decreasing triangular density 2(L - t)/L^2 on [0, L].
/// Otherwise it already left and the next bus is uniform on [H, H + L].
/// The appearance rate falls on [0, L).
struct LateBusMixture {
  double still_coming;
  double late_window;
  double next_offset;
  LateBusMixture(double still_coming, double late_window, double next_offset);
};

struct Knot {
  double t;
  double density;
};

/// Density given by linear interpolation between knots, normalized on
/// construction. Repeated abscissae encode jumps; the density is
/// right-continuous and zero outside [front.t, back.t).
class PiecewiseLinearDensity {
 public:
  explicit PiecewiseLinearDensity(std::vector<Knot> knots);

  const std::vector<Knot>& knots() const { return knots_; }
  // cumulative()[i] is the mass left of knots()[i].t, tail()[i] the mass
  // right of it. Both are kept so neither end of the support loses digits.
  const std::vector<double>& cumulative() const { return cumulative_; }
  const std::vector<double>& tail() const { return tail_; }

  // Index i of the segment [t_i, t_{i+1}) with t_i < t_{i+1} containing t,
  // or npos when t is outside the support.
  std::size_t segment(double t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Knot> knots_;
  std::vector<double> cumulative_;
  std::vector<double> tail_;
};

using ArrivalVariant =
    std::variant<Uniform, Exponential, LateBusMixture, PiecewiseLinearDensity>;

/// Immutable arrival-time distribution. Cheap to copy for the closed-form
/// variants; the piecewise variant owns its knot table.
class ArrivalModel {
 public:
  ArrivalModel(Uniform m) : v_(std::move(m)) {}
  ArrivalModel(Exponential m) : v_(std::move(m)) {}
  ArrivalModel(LateBusMixture m) : v_(std::move(m)) {}
  ArrivalModel(PiecewiseLinearDensity m) : v_(std::move(m)) {}

  const ArrivalVariant& variant() const { return v_; }
  std::string kind() const;

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&v_); }

 private:
  ArrivalVariant v_;
};

/// Result of a slope evaluation. `one_sided` is set when t sits on a density
/// kink; the value is then the right-hand limit.
struct Slope {
  double value;
  bool one_sided;
};

double density(const ArrivalModel& model, double t);
double survival(const ArrivalModel& model, double t);
double cdf(const ArrivalModel& model, double t);
double appearance_rate(const ArrivalModel& model, double t);
Slope density_slope(const ArrivalModel& model, double t);
Slope appearance_rate_slope(const ArrivalModel& model, double t);
double mean_arrival(const ArrivalModel& model);
double sample_arrival(const ArrivalModel& model, CounterRng& rng);

/// Lower and upper end of the support. The upper end is +inf for Exponential.
std::pair<double, double> support(const ArrivalModel& model);

/// Points where the density or its slope may be discontinuous, ascending,
/// including the support ends. Quadrature never places a panel across them.
std::vector<double> breakpoints(const ArrivalModel& model);

/// True when t coincides with an interior breakpoint (within 1e-12 relative).
bool at_kink(const ArrivalModel& model, double t);

/// int_a^b tau p(tau) dtau, closed form for Uniform and Exponential and
/// adaptive quadrature for the other variants. b may be +inf.
double first_moment(const ArrivalModel& model, double a, double b);

/// Same integral always by piecewise adaptive quadrature.
double first_moment_quadrature(const ArrivalModel& model, double a, double b);

}  // namespace walkwait
