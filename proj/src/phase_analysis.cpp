#include "lczeno/phase_analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lczeno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_margin(double margin) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw std::invalid_argument("phase margin must lie in (0, 1)");
  }
}

Phase threshold(double ratio, double margin) {
  if (ratio <= margin) return Phase::Zeno;
  if (ratio >= 1.0 / margin) return Phase::AntiZeno;
  return Phase::Intermediate;
}

PhaseReport report_for(double numerator, double denominator, double margin) {
  check_margin(margin);
  if (denominator == 0.0) {
    if (numerator == 0.0) return {Phase::Zeno, 0.0, margin, false};
    return {Phase::AntiZeno, kInf, margin, true};
  }
  const double ratio = numerator / denominator;
  return {threshold(ratio, margin), ratio, margin, false};
}

void keep_peak(double& peak, double value) {
  if (std::abs(value) > std::abs(peak)) peak = value;
}

}  // namespace

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Zeno:
      return "Zeno";
    case Phase::AntiZeno:
      return "AntiZeno";
    case Phase::Intermediate:
      return "Intermediate";
  }
  return "?";
}

const char* to_string(UniversalityClass u) {
  switch (u) {
    case UniversalityClass::Unity:
      return "unity";
    case UniversalityClass::Exponential:
      return "exponential";
    case UniversalityClass::Divergent:
      return "divergent";
  }
  return "?";
}

GenericZenoCriteria::GenericZenoCriteria(double R0, double a, double b, double a_prime, double T,
                                         long long N)
    : R0_(R0), a_(a), b_(b), a_prime_(a_prime), T_(T), N_(N) {
  if (!(a >= 0.0)) throw std::invalid_argument("GenericZenoCriteria: a must be >= 0");
  if (!(b >= 0.0)) throw std::invalid_argument("GenericZenoCriteria: b must be >= 0");
  if (!(a_prime >= a)) throw std::invalid_argument("GenericZenoCriteria: a_prime must be >= a");
  if (!(T >= 0.0)) throw std::invalid_argument("GenericZenoCriteria: T must be >= 0");
  if (N < 1) throw std::invalid_argument("GenericZenoCriteria: N must be >= 1");
}

GenericZenoCriteria lc_lr_criteria(const CircuitParams& params, const SwitchSchedule& schedule) {
  const double omega = derive_scales(params).omega;
  const double a = std::abs(params.i0()) / params.q0();
  return {params.q0(), a, 0.5 * omega * omega, a, schedule.T(), schedule.N()};
}

PhaseReport classify_phase(const CircuitParams& params, const SwitchSchedule& schedule,
                           double margin) {
  const double omega = derive_scales(params).omega;
  const double quadratic_side = 0.5 * params.q0() * omega * omega * schedule.period();
  return report_for(std::abs(params.i0()), quadratic_side, margin);
}

PhaseReport classify_generic(const GenericZenoCriteria& c, double margin) {
  return report_for(c.a_prime(), c.b() * c.T() / static_cast<double>(c.N()), margin);
}

ZenoLimit zeno_limit(const CircuitParams& params, const SwitchSchedule& schedule) {
  const double wT = derive_scales(params).omega * schedule.T();
  return {params.q0(), 0.5 * wT * wT / static_cast<double>(schedule.N())};
}

double anti_zeno_limit(const CircuitParams& params, double t) {
  return params.q0() * std::exp(-std::abs(params.i0()) / params.q0() * t);
}

UniversalityValue universality_log_value(const UniversalityQuery& u) {
  if (!(u.x > 0.0)) throw std::invalid_argument("universality: x must be > 0");
  if (!(u.delta > 0.0)) throw std::invalid_argument("universality: delta must be > 0");
  if (!(u.N >= 1.0)) throw std::invalid_argument("universality: N must be >= 1");
  const double term = std::exp(u.delta * (std::log(u.x) - std::log(u.N)));
  const double log_value = u.N * std::log1p(term);
  if (u.delta > 1.0) return {log_value, UniversalityClass::Unity, 0.0};
  if (u.delta == 1.0) return {log_value, UniversalityClass::Exponential, u.x};
  return {log_value, UniversalityClass::Divergent, kInf};
}

DeviationMetrics deviation_metrics(const Trajectory& traj, const CircuitParams& params,
                                   const SwitchSchedule& schedule) {
  const double omega = derive_scales(params).omega;
  const CircuitState start{0.0, params.q0(), params.i0()};
  DeviationMetrics m;
  for (const Sample& s : traj.samples) {
    const double baseline = lc_segment_exact(start, omega, s.t).q;
    const double dc = s.q - baseline;
    const double de = s.q - anti_zeno_limit(params, s.t);
    keep_peak(m.peak_dev_cosine, dc);
    keep_peak(m.peak_dev_envelope, de);
    m.end_dev_cosine = dc;
    m.end_dev_envelope = de;
  }

  const double T_C = schedule.T_C();
  CircuitState prev = start;
  m.cycle_decrements.reserve(traj.cycle_ends.size());
  for (const CircuitState& end : traj.cycle_ends) {
    m.cycle_decrements.push_back(prev.q - end.q);
    if (T_C > 0.0) {
      m.segment_curvature.push_back(2.0 * (end.q - prev.q - prev.i * T_C) / (T_C * T_C));
    }
    prev = end;
  }
  return m;
}

}  // namespace lczeno
