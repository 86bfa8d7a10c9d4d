#include "lczeno/core_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "support/random_points.hpp"

namespace lczeno {
namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

TEST(CircuitParams, RejectsInvariantViolations) {
  EXPECT_THROW(CircuitParams(0.0, 1.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(CircuitParams(1.0, -1.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(CircuitParams(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(CircuitParams(1.0, 1.0, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(CircuitParams(1.0, 1.0, std::nan(""), 0.0), std::invalid_argument);
  EXPECT_NO_THROW(CircuitParams(1.0, 1.0, 1.0, -0.1));
}

TEST(DeriveScales, UnitCircuit) {
  const DerivedScales s = derive_scales(CircuitParams(1, 1, 1, 0));
  EXPECT_DOUBLE_EQ(s.omega, 1.0);
  EXPECT_DOUBLE_EQ(s.tau_omega, 1.0);
  EXPECT_EQ(s.tau_i, std::numeric_limits<double>::infinity());
}

TEST(DeriveScales, Values) {
  EXPECT_DOUBLE_EQ(derive_scales(CircuitParams(4, 0.25, 1, 0)).omega, 1.0);
  // 1/sqrt(1e-9), evaluated to 40 digits.
  EXPECT_NEAR(derive_scales(CircuitParams(1e-3, 1e-6, 1, 0)).omega, 31622.776601683793, 1e-9);
  EXPECT_DOUBLE_EQ(derive_scales(CircuitParams(1, 1, 2, -0.5)).tau_i, 4.0);
}

TEST(SwitchSchedule, RatioSplitSumsToPeriodExactly) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double T = 1e-3 + u(rng);
    const long long N = 1 + static_cast<long long>(u(rng) * 1e5);
    const double r = u(rng);
    const SwitchSchedule s = SwitchSchedule::from_ratio(T, N, r);
    EXPECT_EQ(s.T_C() + s.T_R(), s.period());
    EXPECT_NEAR(s.T_R() / s.T_C(), r, 1e-9);
  }
}

TEST(SwitchSchedule, LastCycleEndsAtHorizon) {
  const SwitchSchedule s = SwitchSchedule::from_ratio(0.1, 3, 0.01);
  EXPECT_EQ(s.cycle_start(3), 0.1);
  EXPECT_EQ(s.cycle_start(0), 0.0);
}

TEST(SwitchSchedule, RejectsBadInput) {
  EXPECT_THROW(SwitchSchedule::from_ratio(1.0, 0, 0.01), std::invalid_argument);
  EXPECT_THROW(SwitchSchedule::from_ratio(-1.0, 10, 0.01), std::invalid_argument);
  EXPECT_THROW(SwitchSchedule::from_ratio(1.0, 10, -0.5), std::invalid_argument);
  EXPECT_THROW(SwitchSchedule::from_durations(1, -1.0, 0.0), std::invalid_argument);
}

TEST(ValidateRegime, NominalPointPasses) {
  const ValidityReport r =
      validate_regime(CircuitParams(1, 1, 1, 0), SwitchSchedule::from_ratio(0.1, 100, 0.01));
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.checks.size(), 4u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.satisfied) << c.name;
}

TEST(ValidateRegime, InitialCurrentIsStrict) {
  const SwitchSchedule s = SwitchSchedule::from_ratio(0.1, 100, 0.01);
  ValidityReport r = validate_regime(CircuitParams(1, 1, 1, -0.6), s);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.checks[2].name, "initial_current");
  EXPECT_FALSE(r.checks[2].satisfied);
  EXPECT_DOUBLE_EQ(r.checks[2].lhs, 0.6);
  EXPECT_DOUBLE_EQ(r.checks[2].rhs, 0.5);
  // Equality is a failure as well.
  r = validate_regime(CircuitParams(1, 1, 1, -0.5), s);
  EXPECT_FALSE(r.checks[2].satisfied);
}

TEST(ValidateRegime, HorizonBeyondTauOmegaFails) {
  const ValidityReport r =
      validate_regime(CircuitParams(1, 1, 1, 0), SwitchSchedule::from_ratio(2.0, 1000, 0.01));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.checks[3].name, "horizon_vs_tau_omega");
  EXPECT_FALSE(r.checks[3].satisfied);
  EXPECT_TRUE(r.checks[0].satisfied);
}

TEST(ValidateRegime, MarginAppliesToOrderingChecks) {
  const CircuitParams p(1, 1, 1, 0);
  const SwitchSchedule s = SwitchSchedule::from_ratio(0.1, 2, 0.05);
  EXPECT_FALSE(validate_regime(p, s, 0.01).checks[0].satisfied);
  EXPECT_TRUE(validate_regime(p, s, 0.5).checks[0].satisfied);
  EXPECT_FALSE(validate_regime(p, s, 0.01).checks[1].satisfied);
  EXPECT_THROW(validate_regime(p, s, 1.0), std::invalid_argument);
}

TEST(LcSegmentExact, Identity) {
  const CircuitState s = lc_segment_exact({0.0, 1.0, 0.0}, 1.0, 0.0);
  EXPECT_EQ(s.q, 1.0);
  EXPECT_EQ(s.i, 0.0);
}

TEST(LcSegmentExact, QuarterPeriod) {
  const CircuitState s = lc_segment_exact({0.0, 1.0, 0.0}, 1.0, kPi / 2);
  EXPECT_NEAR(s.q, 0.0, 1e-15);
  EXPECT_NEAR(s.i, -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.t, kPi / 2);
}

TEST(LcSegmentExact, MatchesRk4Oracle) {
  // Independent RK4 at h = 1e-6 gives (0.9989500170832478, -0.10999483337583311).
  const CircuitState s = lc_segment_exact({0.0, 1.0, -0.1}, 1.0, 0.01);
  EXPECT_NEAR(s.q, 0.9989500170832478, 1e-14);
  EXPECT_NEAR(s.i, -0.10999483337583311, 1e-14);
}

TEST(LcSegmentExact, ConservesEnergyAndComposes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double L = testing::log_uniform(rng, 1e-3, 10.0);
    const double C = testing::log_uniform(rng, 1e-3, 10.0);
    const CircuitParams p(L, C, 1.0, 0.0);
    const double w = derive_scales(p).omega;
    const CircuitState s0{0.0, u(rng), u(rng) * w};
    const double a = std::abs(u(rng)) * 10.0 / w;
    const double b = std::abs(u(rng)) * 10.0 / w;

    const CircuitState s1 = lc_segment_exact(s0, w, a);
    const StoredEnergy e0 = energies(s0, p);
    const StoredEnergy e1 = energies(s1, p);
    EXPECT_LT(rel(e0.E_cap + e0.E_ind, e1.E_cap + e1.E_ind), 1e-12);

    const CircuitState whole = lc_segment_exact(s0, w, a + b);
    const CircuitState split = lc_segment_exact(s1, w, b);
    const double scale = std::hypot(s0.q, s0.i / w);
    EXPECT_LT(std::abs(whole.q - split.q) / scale, 1e-12);
    EXPECT_LT(std::abs(whole.i - split.i) / (scale * w), 1e-12);
  }
}

TEST(LcSegmentQuadratic, Values) {
  CircuitState s = lc_segment_quadratic({0.0, 1.0, 0.0}, 1.0, 0.0);
  EXPECT_EQ(s.q, 1.0);
  EXPECT_EQ(s.i, 0.0);
  EXPECT_DOUBLE_EQ(lc_segment_quadratic({0.0, 1.0, 0.0}, 1.0, 0.1).q, 0.995);
  s = lc_segment_quadratic({0.0, 1.0, -0.1}, 1.0, 0.01);
  EXPECT_NEAR(s.q, 0.99895, 1e-15);
  EXPECT_NEAR(s.i, -0.11, 1e-15);
}

TEST(LcSegmentQuadratic, ChargeErrorIsThirdOrder) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double w = u(rng) * 10.0;
    const CircuitState s{0.0, u(rng), -u(rng) * 0.4 * w};
    double dt = 0.01 / w;
    double prev = std::abs(lc_segment_exact(s, w, dt).q - lc_segment_quadratic(s, w, dt).q);
    for (int h = 0; h < 4; ++h) {
      dt /= 2;
      const double err = std::abs(lc_segment_exact(s, w, dt).q - lc_segment_quadratic(s, w, dt).q);
      EXPECT_GE(prev / err, 7.0);
      prev = err;
    }
  }
}

TEST(LrSegment, Values) {
  EXPECT_EQ(lr_segment(-0.3, Resistance::ohms(5.0), 1.0, 0.0), -0.3);
  EXPECT_EQ(lr_segment(-0.3, Resistance::ohms(0.0), 1.0, 2.0), -0.3);
  EXPECT_NEAR(lr_segment(-0.11, Resistance::ohms(1000.0 * std::log(1.1)), 1.0, 1e-3), -0.1,
              1e-15);
  EXPECT_EQ(lr_segment(-0.3, Resistance::open_circuit(), 1.0, 1e-3), 0.0);
}

TEST(SelectRFixed, Values) {
  const CircuitParams p(1, 1, 1, -0.1);
  const Resistance R = select_R_fixed(p, 0.01, 0.001);
  ASSERT_FALSE(R.is_open());
  EXPECT_NEAR(R.value(), 95.310179804324860, 1e-11);
  EXPECT_TRUE(select_R_fixed(CircuitParams(1, 1, 1, 0), 0.01, 0.001).is_open());
  EXPECT_EQ(select_R_fixed(p, 0.0, 0.001).value(), 0.0);
  EXPECT_EQ(select_R_fixed(p, 0.0, 0.0).value(), 0.0);
  EXPECT_THROW(select_R_fixed(p, 0.01, 0.0), std::invalid_argument);
}

TEST(SelectRExact, Values) {
  EXPECT_EQ(select_R_exact(-0.1, -0.1, 1.0, 1e-3).value(), 0.0);
  EXPECT_NEAR(select_R_exact(-0.11, -0.1, 1.0, 1e-3).value(), 95.310179804324860, 1e-11);
  EXPECT_NEAR(select_R_exact(-0.2, -0.1, 2.0, 0.01).value(), 138.62943611198906, 1e-10);
}

TEST(SelectRExact, Errors) {
  EXPECT_THROW(select_R_exact(-0.05, -0.1, 1.0, 1e-3), ResetUnreachable);
  EXPECT_THROW(select_R_exact(0.2, -0.1, 1.0, 1e-3), ResetUnreachable);
  EXPECT_THROW(select_R_exact(-0.2, 0.0, 1.0, 1e-3), std::invalid_argument);
  EXPECT_THROW(select_R_exact(-0.2, -0.1, 1.0, 0.0), std::invalid_argument);
}

TEST(SelectRExact, ResetIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double target = -testing::log_uniform(rng, 1e-6, 1e2);
    const double i_tc = target * (1.0 + u(rng) * 3.0);
    const double L = testing::log_uniform(rng, 1e-4, 1e2);
    const double T_R = testing::log_uniform(rng, 1e-9, 1e-1);
    const Resistance R = select_R_exact(i_tc, target, L, T_R);
    EXPECT_LT(rel(lr_segment(i_tc, R, L, T_R), target), 1e-12);
  }
}

TEST(SelectR, FixedFormulaMatchesExactOnFirstQuadraticCycle) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 500; ++k) {
    const testing::Point pt = testing::random_valid_point(rng);
    if (pt.params.i0() == 0.0) continue;
    const double w = derive_scales(pt.params).omega;
    const CircuitState at_tc = lc_segment_quadratic({0.0, pt.params.q0(), pt.params.i0()}, w,
                                                    pt.schedule.T_C());
    const double fixed = select_R_fixed(pt.params, pt.schedule.T_C(), pt.schedule.T_R()).value();
    const double exact =
        select_R_exact(at_tc.i, pt.params.i0(), pt.params.L(), pt.schedule.T_R()).value();
    EXPECT_LT(rel(fixed, exact), 1e-12);
  }
}

TEST(Energies, Values) {
  StoredEnergy e = energies({0, 0, 0}, CircuitParams(1, 1, 1, 0));
  EXPECT_EQ(e.E_cap, 0.0);
  EXPECT_EQ(e.E_ind, 0.0);
  e = energies({0, 1, 0}, CircuitParams(1, 1, 1, 0));
  EXPECT_DOUBLE_EQ(e.E_cap, 0.5);
  e = energies({0, 1, -0.1}, CircuitParams(4, 2, 1, 0));
  EXPECT_DOUBLE_EQ(e.E_cap, 0.25);
  EXPECT_DOUBLE_EQ(e.E_ind, 0.02);
}

TEST(Resistance, OpenCircuitHasNoValue) {
  EXPECT_THROW(Resistance::open_circuit().value(), std::logic_error);
  EXPECT_THROW(Resistance::ohms(-1.0), std::invalid_argument);
}

}  // namespace
}  // namespace lczeno
