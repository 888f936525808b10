#include "walkwait/arrivals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "walkwait/rng.hpp"

namespace walkwait {
namespace {

using testing::GeneratedModel;

std::vector<GeneratedModel> fixed_models() {
  return {testing::uniform_model(30.0),
          testing::exponential_model(1.0 / 24.0),
          testing::late_bus_model(0.7, 4.0, 25.0),
          testing::late_bus_model(0.25, 4.0, 56.0),
          testing::piecewise_model({{0.0, 0.4}, {4.0, 0.1}, {4.0, 0.0}}),
          testing::piecewise_model({{1.0, 0.0}, {3.0, 2.0}, {3.0, 1.0}, {9.0, 0.5}})};
}

TEST(Density, UniformInsideAndOutside) {
  const ArrivalModel m(Uniform(30.0));
  EXPECT_DOUBLE_EQ(density(m, 10.0), 1.0 / 30.0);
  EXPECT_EQ(density(m, 35.0), 0.0);
  EXPECT_EQ(density(m, 30.0), 0.0);
}

TEST(Density, PiecewiseInterpolatesNormalizedKnots) {
  // Trapezoid mass of these knots is 2, so they are halved on construction.
  const auto g = testing::piecewise_model({{0.0, 0.8}, {4.0, 0.2}, {4.0, 0.0}});
  EXPECT_NEAR(testing::oracle_mass(g, 0.0, 10.0), 1.0, 1e-12);
  EXPECT_NEAR(density(g.model, 2.0), 0.25, 1e-15);
  EXPECT_NEAR(density(g.model, 0.0), 0.4, 1e-15);
  EXPECT_EQ(density(g.model, 4.0), 0.0);  // right-continuous at the jump
  EXPECT_EQ(density(g.model, 5.0), 0.0);
}

TEST(Density, NegativeTimeIsDomainError) {
  for (const auto& g : fixed_models()) {
    EXPECT_THROW(density(g.model, -1.0), DomainError);
    EXPECT_THROW(survival(g.model, -1e-9), DomainError);
    EXPECT_THROW(appearance_rate(g.model, -2.0), DomainError);
  }
}

TEST(Survival, ClosedFormExamples) {
  EXPECT_NEAR(survival(ArrivalModel(Uniform(30.0)), 6.0), 0.8, 1e-15);
  EXPECT_NEAR(survival(ArrivalModel(Exponential(1.0 / 24.0)), 24.0), std::exp(-1.0), 1e-15);
  for (const auto& g : fixed_models()) EXPECT_EQ(survival(g.model, 0.0), 1.0);
}

TEST(Survival, ZeroBeyondFiniteSupport) {
  EXPECT_EQ(survival(ArrivalModel(Uniform(30.0)), 31.0), 0.0);
  EXPECT_EQ(survival(ArrivalModel(LateBusMixture(0.5, 4.0, 20.0)), 24.0), 0.0);
  EXPECT_EQ(survival(testing::piecewise_model({{0, 1}, {2, 0}}).model, 2.0), 0.0);
}

TEST(Survival, MatchesOneMinusIntegratedDensity) {
  std::mt19937_64 rng(11);
  for (int kind = 0; kind < 4; ++kind) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto g = testing::random_model(rng, kind);
      const double end = testing::model_end(g);
      std::uniform_real_distribution<double> T(0.0, end);
      for (int i = 0; i < 100; ++i) {
        const double t = T(rng);
        EXPECT_NEAR(survival(g.model, t), 1.0 - testing::oracle_mass(g, 0.0, t), 1e-6)
            << g.model.kind() << " t=" << t;
        EXPECT_NEAR(cdf(g.model, t) + survival(g.model, t), 1.0, 1e-14);
      }
    }
  }
}

TEST(Survival, NonIncreasing) {
  for (const auto& g : fixed_models()) {
    const double end = testing::model_end(g) * 1.1;
    double prev = 1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double r = survival(g.model, end * i / 2000.0);
      EXPECT_LE(r, prev + 1e-15) << g.model.kind();
      prev = r;
    }
  }
}

TEST(Density, IntegratesToOne) {
  std::mt19937_64 rng(5);
  auto models = fixed_models();
  for (int i = 0; i < 20; ++i) models.push_back(testing::random_model(rng, i));
  for (const auto& g : models) {
    EXPECT_NEAR(testing::oracle_mass(g, 0.0, testing::model_end(g) * 10.0), 1.0, 1e-6)
        << g.model.kind();
    for (int i = 0; i <= 500; ++i)
      EXPECT_GE(density(g.model, testing::model_end(g) * i / 400.0), 0.0);
  }
}

TEST(AppearanceRate, UniformMatchesReciprocalRemainingTime) {
  const ArrivalModel m(Uniform(30.0));
  EXPECT_NEAR(appearance_rate(m, 15.0), 1.0 / 15.0, 1e-15);
  EXPECT_NEAR(appearance_rate(m, 0.0), 1.0 / 30.0, 1e-15);
  double prev = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double t = 30.0 * i / 1000.0;
    const double lambda = appearance_rate(m, t);
    EXPECT_NEAR(lambda, 1.0 / (30.0 - t), 1e-12 / (30.0 - t));
    EXPECT_GT(lambda, prev);
    prev = lambda;
  }
}

TEST(AppearanceRate, ExponentialIsConstant) {
  const ArrivalModel m(Exponential(0.05));
  for (double t : {0.0, 1.0, 17.5, 100.0, 400.0}) EXPECT_EQ(appearance_rate(m, t), 0.05);
}

TEST(AppearanceRate, UndefinedWhereSurvivalVanishes) {
  EXPECT_THROW(appearance_rate(ArrivalModel(Uniform(30.0)), 30.0), UndefinedRateError);
  EXPECT_THROW(appearance_rate(ArrivalModel(Uniform(30.0)), 40.0), UndefinedRateError);
}

TEST(AppearanceRate, TimesSurvivalGivesDensity) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) {
    const auto g = testing::random_model(rng, i);
    const double end = testing::model_end(g);
    for (int k = 0; k < 200; ++k) {
      const double t = end * k / 200.0;
      const double r = survival(g.model, t);
      if (r <= 1e-12) continue;
      const double p = density(g.model, t);
      EXPECT_NEAR(appearance_rate(g.model, t) * r, p, 1e-15 * p)
          << g.model.kind() << " t=" << t;
    }
  }
}

TEST(AppearanceRateSlope, ClosedFormExamples) {
  const auto u = appearance_rate_slope(ArrivalModel(Uniform(30.0)), 10.0);
  EXPECT_NEAR(u.value, 1.0 / 400.0, 1e-17);
  EXPECT_FALSE(u.one_sided);
  for (double rate : {0.01, 1.0 / 24.0, 2.0})
    for (double t : {0.0, 3.0, 50.0})
      EXPECT_EQ(appearance_rate_slope(ArrivalModel(Exponential(rate)), t).value, 0.0);
}

TEST(AppearanceRateSlope, LateBusAgreesWithFiniteDifference) {
  // With u = 1 - t/L the rate falls exactly where w u^2 < 1 - w. For w = 0.7
  // and L = 4 that is t > 1.38, so t = 1 still sits on the rising part.
  const ArrivalModel m(LateBusMixture(0.7, 4.0, 25.0));
  auto lambda = [&](double t) { return density(m, t) / survival(m, t); };
  for (double t : {1.0, 3.0}) {
    const double fd = testing::central_difference(lambda, t, 1e-5);
    EXPECT_NEAR(appearance_rate_slope(m, t).value, fd, 1e-7) << t;
  }
  EXPECT_GT(appearance_rate_slope(m, 1.0).value, 0.0);
  EXPECT_LT(appearance_rate_slope(m, 3.0).value, 0.0);
}

TEST(AppearanceRateSlope, LateBusFallsOverWholeWindowWhenMostlyPassed) {
  // w <= 1/2 makes the rate fall on all of [0, L).
  const ArrivalModel m(LateBusMixture(0.25, 4.0, 56.0));
  auto lambda = [&](double t) { return density(m, t) / survival(m, t); };
  for (int i = 0; i < 400; ++i) {
    const double t = 4.0 * i / 400.0;
    EXPECT_LT(lambda(t + 1e-3), lambda(t)) << t;
    EXPECT_LT(appearance_rate_slope(m, t).value, 0.0) << t;
  }
}

TEST(AppearanceRateSlope, MatchesFiniteDifferenceAtSmoothPoints) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 60; ++i) {
    const auto g = testing::random_model(rng, i);
    const double end = testing::model_end(g);
    const double t = testing::random_interior_point(rng, g, end);
    if (survival(g.model, t) < 1e-3) continue;
    auto lambda = [&](double x) { return density(g.model, x) / survival(g.model, x); };
    const double fd = testing::central_difference(lambda, t, 1e-5);
    const double an = appearance_rate_slope(g.model, t).value;
    EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(fd))) << g.model.kind() << " t=" << t;
  }
}

TEST(AppearanceRateSlope, KinkIsFlaggedOneSided) {
  const ArrivalModel m(LateBusMixture(0.5, 4.0, 20.0));
  EXPECT_TRUE(appearance_rate_slope(m, 20.0).one_sided);
  EXPECT_TRUE(density_slope(m, 4.0).one_sided);
  EXPECT_FALSE(appearance_rate_slope(m, 2.0).one_sided);
  const auto pw = testing::piecewise_model({{0, 1}, {2, 3}, {5, 0}});
  const auto s = density_slope(pw.model, 2.0);
  EXPECT_TRUE(s.one_sided);
  // Mass 8.5 before normalization; slope right of t = 2 is -1 per minute.
  EXPECT_NEAR(s.value, -1.0 / 8.5, 1e-15);
}

TEST(MeanArrival, Examples) {
  EXPECT_DOUBLE_EQ(mean_arrival(ArrivalModel(Uniform(30.0))), 15.0);
  EXPECT_NEAR(mean_arrival(ArrivalModel(Exponential(1.0 / 24.0))), 24.0, 1e-12);
  const double w = 0.7, L = 4.0, H = 25.0;
  const auto g = testing::late_bus_model(w, L, H);
  const double formula = w * L / 3.0 + (1.0 - w) * (H + L / 2.0);
  EXPECT_NEAR(mean_arrival(g.model), formula, 1e-12);
  EXPECT_NEAR(testing::oracle_first_moment(g, 0.0, H + L), formula, 1e-9);
}

TEST(MeanArrival, MatchesFineGridFirstMoment) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto g = testing::random_model(rng, i);
    const double oracle = testing::oracle_first_moment(g, 0.0, testing::model_end(g) * 10.0);
    EXPECT_NEAR(mean_arrival(g.model), oracle, 1e-6) << g.model.kind();
    EXPECT_NEAR(first_moment(g.model, 0.0, INFINITY), oracle, 1e-6) << g.model.kind();
  }
}

TEST(FirstMoment, ClosedFormAgreesWithQuadrature) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 40; ++i) {
    const auto g = testing::random_model(rng, i % 2);  // uniform, exponential
    const double end = testing::model_end(g);
    std::uniform_real_distribution<double> T(0.0, end);
    double a = T(rng), b = T(rng);
    if (a > b) std::swap(a, b);
    EXPECT_NEAR(first_moment(g.model, a, b), first_moment_quadrature(g.model, a, b), 1e-9);
  }
}

TEST(Construction, RejectsInvalidParameters) {
  EXPECT_THROW(Uniform(0.0), std::invalid_argument);
  EXPECT_THROW(Uniform(-3.0), std::invalid_argument);
  EXPECT_THROW(Exponential(0.0), std::invalid_argument);
  EXPECT_THROW(LateBusMixture(1.2, 4.0, 25.0), std::invalid_argument);
  EXPECT_THROW(LateBusMixture(0.5, 0.0, 25.0), std::invalid_argument);
  EXPECT_THROW(LateBusMixture(0.5, 4.0, 3.0), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearDensity({{0, 0}, {2, 0}, {3, 0}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearDensity({{0, 1}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearDensity({{2, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearDensity({{0, 1}, {1, -1}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearDensity({{-1, 1}, {1, 1}}), std::invalid_argument);
}

TEST(Sampling, UniformMeanWithinThreeStandardErrors) {
  const ArrivalModel m(Uniform(30.0));
  CounterRng rng(2024);
  const int n = 1'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_arrival(m, rng);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 15.0), 3.0 * se);
}

TEST(Sampling, ExponentialSurvivalAtMean) {
  const ArrivalModel m(Exponential(1.0 / 24.0));
  CounterRng rng(77);
  const int n = 1'000'000;
  int beyond = 0;
  for (int i = 0; i < n; ++i) beyond += sample_arrival(m, rng) > 24.0;
  const double p = std::exp(-1.0);
  const double se = std::sqrt(p * (1.0 - p) / n);
  EXPECT_LT(std::abs(static_cast<double>(beyond) / n - p), 3.0 * se);
}

TEST(Sampling, SameSeedSameSequence) {
  for (const auto& g : fixed_models()) {
    CounterRng a(99, 3), b(99, 3), c(100, 3);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
      const double x = sample_arrival(g.model, a);
      EXPECT_EQ(x, sample_arrival(g.model, b));
      differs = differs || x != sample_arrival(g.model, c);
    }
    EXPECT_TRUE(differs);
  }
}

TEST(Sampling, KolmogorovSmirnovAgainstCdf) {
  std::mt19937_64 gen(17);
  auto models = fixed_models();
  for (int i = 0; i < 8; ++i) models.push_back(testing::random_model(gen, i));
  const int n = 100'000;
  // Asymptotic critical value of the one-sample KS statistic at alpha = 0.001.
  const double critical = 1.9495 / std::sqrt(static_cast<double>(n));
  std::uint64_t seed = 1;
  for (const auto& g : models) {
    CounterRng rng(seed++);
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_arrival(g.model, rng);
    std::sort(xs.begin(), xs.end());
    double D = 0.0;
    for (int i = 0; i < n; ++i) {
      const double F = cdf(g.model, xs[i]);
      D = std::max({D, (i + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    EXPECT_LT(D, critical) << g.model.kind();
  }
}

}  // namespace
}  // namespace walkwait
