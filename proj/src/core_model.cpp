#include "lczeno/core_model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lczeno {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

CircuitParams::CircuitParams(double L, double C, double q0, double i0)
    : L_(L), C_(C), q0_(q0), i0_(i0) {
  require(finite(L) && L > 0.0, "CircuitParams: L must be positive and finite");
  require(finite(C) && C > 0.0, "CircuitParams: C must be positive and finite");
  require(finite(q0) && q0 > 0.0, "CircuitParams: q0 must be positive and finite");
  require(finite(i0) && i0 <= 0.0, "CircuitParams: i0 must be finite and <= 0");
}

SwitchSchedule SwitchSchedule::from_ratio(double T, long long N, double ratio) {
  require(finite(T) && T >= 0.0, "SwitchSchedule: T must be finite and >= 0");
  require(N >= 1, "SwitchSchedule: N must be >= 1");
  require(finite(ratio) && ratio >= 0.0, "SwitchSchedule: T_R/T_C ratio must be finite and >= 0");
  const double period = T / static_cast<double>(N);
  const double T_C = period / (1.0 + ratio);
  // Sterbenz: for ratio <= 1 the subtraction is exact, so T_C + T_R == period.
  const double T_R = period - T_C;
  return {T, N, T_C, T_R};
}

SwitchSchedule SwitchSchedule::from_durations(long long N, double T_C, double T_R) {
  require(N >= 1, "SwitchSchedule: N must be >= 1");
  require(finite(T_C) && T_C >= 0.0, "SwitchSchedule: T_C must be finite and >= 0");
  require(finite(T_R) && T_R >= 0.0, "SwitchSchedule: T_R must be finite and >= 0");
  return {static_cast<double>(N) * (T_C + T_R), N, T_C, T_R};
}

Resistance Resistance::ohms(double value) {
  require(finite(value) && value >= 0.0, "Resistance: value must be finite and >= 0");
  return {value, false};
}

double Resistance::value() const {
  if (open_) throw std::logic_error("Resistance: open circuit has no finite value");
  return value_;
}

DerivedScales derive_scales(const CircuitParams& params) {
  const double omega = 1.0 / std::sqrt(params.L() * params.C());
  const double tau_i = params.i0() == 0.0 ? std::numeric_limits<double>::infinity()
                                          : std::abs(params.q0() / params.i0());
  return {omega, 1.0 / omega, tau_i};
}

ValidityReport validate_regime(const CircuitParams& params, const SwitchSchedule& schedule,
                               double margin) {
  require(margin > 0.0 && margin < 1.0, "validate_regime: margin must lie in (0, 1)");
  const DerivedScales s = derive_scales(params);
  ValidityReport report;
  auto add = [&report](std::string name, bool ok, double lhs, double rhs) {
    report.checks.push_back({std::move(name), ok, lhs, rhs});
    report.ok = report.ok && ok;
  };

  const double period = schedule.period();
  add("period_vs_tau_omega", period <= margin * s.tau_omega, period, margin * s.tau_omega);
  add("off_vs_on", schedule.T_R() <= margin * schedule.T_C(), schedule.T_R(),
      margin * schedule.T_C());
  const double i_limit = 0.5 * params.q0() * s.omega;
  add("initial_current", std::abs(params.i0()) < i_limit, std::abs(params.i0()), i_limit);
  add("horizon_vs_tau_omega", schedule.T() < s.tau_omega, schedule.T(), s.tau_omega);
  return report;
}

CircuitState lc_segment_exact(const CircuitState& s, double omega, double dt) {
  const double c = std::cos(omega * dt);
  const double sn = std::sin(omega * dt);
  return {s.t + dt, s.q * c + (s.i / omega) * sn, -s.q * omega * sn + s.i * c};
}

CircuitState lc_segment_quadratic(const CircuitState& s, double omega, double dt) {
  const double w2 = omega * omega;
  return {s.t + dt, s.q + s.i * dt - 0.5 * s.q * w2 * dt * dt, s.i - s.q * w2 * dt};
}

double lr_segment(double i_at_switch, Resistance R, double L, double dt) {
  if (dt == 0.0) return i_at_switch;
  if (R.is_open()) return 0.0;
  return i_at_switch * std::exp(-(R.value() / L) * dt);
}

Resistance select_R_fixed(const CircuitParams& params, double T_C, double T_R) {
  if (params.i0() == 0.0) return Resistance::open_circuit();
  const double omega2 = 1.0 / (params.L() * params.C());
  const double log_arg = params.q0() / std::abs(params.i0()) * omega2 * T_C + 1.0;
  const double decay = std::log(log_arg);
  if (decay == 0.0) return Resistance::ohms(0.0);
  if (T_R == 0.0) {
    throw std::invalid_argument("select_R_fixed: T_R == 0 cannot realise a finite current decay");
  }
  return Resistance::ohms(params.L() / T_R * decay);
}

Resistance select_R_exact(double i_at_tc, double target, double L, double T_R) {
  if (target == 0.0) {
    if (i_at_tc == 0.0) return Resistance::ohms(0.0);
    throw std::invalid_argument("select_R_exact: zero target current needs an open circuit");
  }
  if (i_at_tc == target) return Resistance::ohms(0.0);
  const double ratio = i_at_tc / target;
  if (!(ratio >= 1.0)) {
    throw ResetUnreachable("select_R_exact: |i(T_C)| = " + std::to_string(std::abs(i_at_tc)) +
                           " cannot decay to target " + std::to_string(target));
  }
  const double decay = std::log(ratio);
  if (decay == 0.0) return Resistance::ohms(0.0);
  if (T_R == 0.0) {
    throw std::invalid_argument("select_R_exact: T_R == 0 cannot realise a finite current decay");
  }
  return Resistance::ohms(L / T_R * decay);
}

StoredEnergy energies(const CircuitState& s, const CircuitParams& params) {
  return {s.q * s.q / (2.0 * params.C()), 0.5 * params.L() * s.i * s.i};
}

}  // namespace lczeno
