#include "walkwait/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "walkwait/quadrature.hpp"
#include "walkwait/rng.hpp"

namespace walkwait {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double t, const char* what) {
  if (!(t >= 0.0)) throw DomainError(std::string(what) + ": time must be >= 0");
}

// Beyond this point the exponential tail carries less than e^-60 of the mass.
double exponential_cutoff(const Exponential& m) { return 60.0 / m.rate; }

double segment_slope(const Knot& lo, const Knot& hi) {
  return (hi.density - lo.density) / (hi.t - lo.t);
}

}  // namespace

Uniform::Uniform(double headway) : headway(headway) {
  if (!(headway > 0.0) || !std::isfinite(headway))
    throw std::invalid_argument("uniform: headway must be > 0");
}

Exponential::Exponential(double rate) : rate(rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("exponential: rate must be > 0");
}

LateBusMixture::LateBusMixture(double still_coming, double late_window,
                               double next_offset)
    : still_coming(still_coming),
      late_window(late_window),
      next_offset(next_offset) {
  if (!(still_coming >= 0.0 && still_coming <= 1.0))
    throw std::invalid_argument("late_bus_mixture: still_coming_prob must be in [0, 1]");
  if (!(late_window > 0.0) || !std::isfinite(late_window))
    throw std::invalid_argument("late_bus_mixture: late_window must be > 0");
  if (!(next_offset > late_window) || !std::isfinite(next_offset))
    throw std::invalid_argument(
        "late_bus_mixture: next_headway_offset must exceed late_window");
}

PiecewiseLinearDensity::PiecewiseLinearDensity(std::vector<Knot> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 2)
    throw std::invalid_argument("piecewise: at least two knots are required");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto& k = knots_[i];
    if (!(k.t >= 0.0) || !std::isfinite(k.t))
      throw std::invalid_argument("piecewise: knot times must be finite and >= 0");
    if (!(k.density >= 0.0) || !std::isfinite(k.density))
      throw std::invalid_argument("piecewise: knot densities must be finite and >= 0");
    if (i > 0 && k.t < knots_[i - 1].t)
      throw std::invalid_argument("piecewise: knot times must be non-decreasing");
  }

  const std::size_t n = knots_.size();
  std::vector<double> piece(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    piece[i] = 0.5 * (knots_[i + 1].t - knots_[i].t) *
               (knots_[i].density + knots_[i + 1].density);
  const double total = std::accumulate(piece.begin(), piece.end(), 0.0);
  if (!(total > 0.0))
    throw std::invalid_argument("piecewise: knots carry no probability mass");

  for (auto& k : knots_) k.density /= total;
  for (auto& m : piece) m /= total;

  cumulative_.assign(n, 0.0);
  tail_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    cumulative_[i] = cumulative_[i - 1] + piece[i - 1];
  for (std::size_t i = n - 1; i-- > 0;) tail_[i] = tail_[i + 1] + piece[i];
}

std::size_t PiecewiseLinearDensity::segment(double t) const {
  if (t < knots_.front().t || t >= knots_.back().t) return npos;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const Knot& k) { return x < k.t; });
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

std::string ArrivalModel::kind() const {
  return std::visit(
      overloaded{[](const Uniform&) { return std::string("uniform"); },
                 [](const Exponential&) { return std::string("exponential"); },
                 [](const LateBusMixture&) { return std::string("late_bus_mixture"); },
                 [](const PiecewiseLinearDensity&) { return std::string("piecewise"); }},
      v_);
}

double density(const ArrivalModel& model, double t) {
  require_nonnegative(t, "density");
  return std::visit(
      overloaded{
          [t](const Uniform& m) { return t < m.headway ? 1.0 / m.headway : 0.0; },
          [t](const Exponential& m) { return m.rate * std::exp(-m.rate * t); },
          [t](const LateBusMixture& m) {
            const double L = m.late_window, H = m.next_offset;
            if (t < L) return 2.0 * m.still_coming * (L - t) / (L * L);
            if (t >= H && t < H + L) return (1.0 - m.still_coming) / L;
            return 0.0;
          },
          [t](const PiecewiseLinearDensity& m) {
            const auto i = m.segment(t);
            if (i == PiecewiseLinearDensity::npos) return 0.0;
            const auto& lo = m.knots()[i];
            return lo.density + (t - lo.t) * segment_slope(lo, m.knots()[i + 1]);
          }},
      model.variant());
}

double survival(const ArrivalModel& model, double t) {
  require_nonnegative(t, "survival");
  return std::visit(
      overloaded{
          [t](const Uniform& m) {
            return t < m.headway ? (m.headway - t) / m.headway : 0.0;
          },
          [t](const Exponential& m) { return std::exp(-m.rate * t); },
          [t](const LateBusMixture& m) {
            const double w = m.still_coming, L = m.late_window, H = m.next_offset;
            if (t < L) {
              const double u = 1.0 - t / L;
              return w * u * u + (1.0 - w);
            }
            if (t < H) return 1.0 - w;
            if (t < H + L) return (1.0 - w) * (H + L - t) / L;
            return 0.0;
          },
          [t](const PiecewiseLinearDensity& m) {
            if (t < m.knots().front().t) return 1.0;
            const auto i = m.segment(t);
            if (i == PiecewiseLinearDensity::npos) return 0.0;
            const auto& lo = m.knots()[i];
            const auto& hi = m.knots()[i + 1];
            const double p = lo.density + (t - lo.t) * segment_slope(lo, hi);
            return 0.5 * (hi.t - t) * (p + hi.density) + m.tail()[i + 1];
          }},
      model.variant());
}

double cdf(const ArrivalModel& model, double t) {
  require_nonnegative(t, "cdf");
  if (const auto* m = model.get_if<Exponential>()) return -std::expm1(-m->rate * t);
  if (const auto* m = model.get_if<PiecewiseLinearDensity>()) {
    if (t < m->knots().front().t) return 0.0;
    const auto i = m->segment(t);
    if (i == PiecewiseLinearDensity::npos) return 1.0;
    const auto& lo = m->knots()[i];
    const double p = lo.density + (t - lo.t) * segment_slope(lo, m->knots()[i + 1]);
    return m->cumulative()[i] + 0.5 * (t - lo.t) * (lo.density + p);
  }
  return 1.0 - survival(model, t);
}

double appearance_rate(const ArrivalModel& model, double t) {
  require_nonnegative(t, "appearance_rate");
  const double r = survival(model, t);
  if (!(r > 0.0))
    throw UndefinedRateError("appearance_rate: survival is zero at t = " +
                             std::to_string(t));
  if (const auto* m = model.get_if<Exponential>()) return m->rate;
  return density(model, t) / r;
}

Slope density_slope(const ArrivalModel& model, double t) {
  require_nonnegative(t, "density_slope");
  const double v = std::visit(
      overloaded{
          [](const Uniform&) { return 0.0; },
          [t](const Exponential& m) {
            return -m.rate * m.rate * std::exp(-m.rate * t);
          },
          [t](const LateBusMixture& m) {
            const double L = m.late_window;
            return t < L ? -2.0 * m.still_coming / (L * L) : 0.0;
          },
          [t](const PiecewiseLinearDensity& m) {
            const auto i = m.segment(t);
            if (i == PiecewiseLinearDensity::npos) return 0.0;
            return segment_slope(m.knots()[i], m.knots()[i + 1]);
          }},
      model.variant());
  return {v, at_kink(model, t)};
}

Slope appearance_rate_slope(const ArrivalModel& model, double t) {
  // lambda' = p'/R + lambda^2, which follows from lambda = p/R and R' = -p.
  const double lambda = appearance_rate(model, t);
  if (model.get_if<Exponential>()) return {0.0, false};
  const Slope dp = density_slope(model, t);
  return {dp.value / survival(model, t) + lambda * lambda, dp.one_sided};
}

double mean_arrival(const ArrivalModel& model) {
  return std::visit(
      overloaded{
          [](const Uniform& m) { return 0.5 * m.headway; },
          [](const Exponential& m) { return 1.0 / m.rate; },
          [](const LateBusMixture& m) {
            const double w = m.still_coming, L = m.late_window;
            return w * L / 3.0 + (1.0 - w) * (m.next_offset + 0.5 * L);
          },
          [](const PiecewiseLinearDensity& m) {
            // Exact for linear density on [a, b]:
            // int t p = (b - a)/6 * (a(2pa + pb) + b(pa + 2pb)).
            double s = 0.0;
            const auto& k = m.knots();
            for (std::size_t i = 0; i + 1 < k.size(); ++i) {
              const double a = k[i].t, b = k[i + 1].t;
              const double pa = k[i].density, pb = k[i + 1].density;
              s += (b - a) / 6.0 * (a * (2.0 * pa + pb) + b * (pa + 2.0 * pb));
            }
            return s;
          }},
      model.variant());
}

double sample_arrival(const ArrivalModel& model, CounterRng& rng) {
  return std::visit(
      overloaded{
          [&rng](const Uniform& m) { return m.headway * rng.uniform(); },
          [&rng](const Exponential& m) { return -std::log1p(-rng.uniform()) / m.rate; },
          [&rng](const LateBusMixture& m) {
            const double pick = rng.uniform();
            const double u = rng.uniform();
            const double L = m.late_window;
            if (pick < m.still_coming) return L * (1.0 - std::sqrt(1.0 - u));
            return m.next_offset + L * u;
          },
          [&rng](const PiecewiseLinearDensity& m) {
            const double u = rng.uniform();
            const auto& k = m.knots();
            const auto& cum = m.cumulative();
            // Last segment with positive mass guards against cum.back() < 1.
            std::size_t last = k.size() - 2;
            while (last > 0 && !(cum[last + 1] > cum[last])) --last;
            auto it = std::upper_bound(cum.begin(), cum.end(), u);
            std::size_t i = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
            i = std::min(i, last);
            while (i < last && !(cum[i + 1] > cum[i])) ++i;
            const double x = std::max(0.0, u - cum[i]);
            const double p0 = k[i].density;
            const double slope = segment_slope(k[i], k[i + 1]);
            // Root of p0 s + slope s^2 / 2 = x in the cancellation-free form.
            const double disc = std::max(0.0, p0 * p0 + 2.0 * slope * x);
            const double denom = p0 + std::sqrt(disc);
            const double s = denom > 0.0 ? 2.0 * x / denom : 0.0;
            return std::min(k[i].t + s, k[i + 1].t);
          }},
      model.variant());
}

std::pair<double, double> support(const ArrivalModel& model) {
  return std::visit(
      overloaded{
          [](const Uniform& m) { return std::pair{0.0, m.headway}; },
          [](const Exponential&) { return std::pair{0.0, kInf}; },
          [](const LateBusMixture& m) {
            const double lo = m.still_coming > 0.0 ? 0.0 : m.next_offset;
            const double hi = m.still_coming < 1.0 ? m.next_offset + m.late_window
                                                   : m.late_window;
            return std::pair{lo, hi};
          },
          [](const PiecewiseLinearDensity& m) {
            return std::pair{m.knots().front().t, m.knots().back().t};
          }},
      model.variant());
}

std::vector<double> breakpoints(const ArrivalModel& model) {
  std::vector<double> out = std::visit(
      overloaded{
          [](const Uniform& m) { return std::vector<double>{0.0, m.headway}; },
          [](const Exponential&) { return std::vector<double>{0.0}; },
          [](const LateBusMixture& m) {
            const double L = m.late_window, H = m.next_offset;
            return std::vector<double>{0.0, L, H, H + L};
          },
          [](const PiecewiseLinearDensity& m) {
            std::vector<double> v{0.0};
            for (const auto& k : m.knots()) v.push_back(k.t);
            return v;
          }},
      model.variant());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool at_kink(const ArrivalModel& model, double t) {
  if (!(t > 0.0)) return false;
  for (double b : breakpoints(model))
    if (b > 0.0 && std::abs(t - b) <= 1e-12 * std::max(1.0, b)) return true;
  return false;
}

double first_moment_quadrature(const ArrivalModel& model, double a, double b) {
  require_nonnegative(a, "first_moment");
  auto [lo, hi] = support(model);
  if (const auto* m = model.get_if<Exponential>()) hi = exponential_cutoff(*m);
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (!(b > a)) return 0.0;
  const auto cuts = breakpoints(model);
  const auto r = integrate_piecewise(
      [&model](double x) { return x * density(model, x); }, cuts, a, b);
  return r.value;
}

double first_moment(const ArrivalModel& model, double a, double b) {
  require_nonnegative(a, "first_moment");
  if (!(b > a)) return 0.0;
  if (const auto* m = model.get_if<Uniform>()) {
    const double lo = std::min(a, m->headway), hi = std::min(b, m->headway);
    return (hi - lo) * (hi + lo) / (2.0 * m->headway);
  }
  if (const auto* m = model.get_if<Exponential>()) {
    // Antiderivative of t r e^{-rt} is -(t + 1/r) e^{-rt}.
    const double r = m->rate;
    const double fa = (a + 1.0 / r) * std::exp(-r * a);
    const double fb = std::isinf(b) ? 0.0 : (b + 1.0 / r) * std::exp(-r * b);
    return fa - fb;
  }
  return first_moment_quadrature(model, a, b);
}

}  // namespace walkwait
