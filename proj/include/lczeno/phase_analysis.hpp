#pragma once

#include <vector>

#include "lczeno/core_model.hpp"
#include "lczeno/switch_engine.hpp"

namespace lczeno {

enum class Phase { Zeno, AntiZeno, Intermediate };

const char* to_string(Phase p);

/// ratio <= margin is Zeno, ratio >= 1/margin is AntiZeno, anything in
/// between is Intermediate.
struct PhaseReport {
  Phase phase;
  double ratio;
  double margin;
  /// Set when the quadratic rate vanishes while the linear one does not; the
  /// ratio is then +inf and the phase AntiZeno by convention.
  bool degenerate = false;
};

/// Observable R(t) = R0 (1 - a t - b t^2) under evolution, restarted by the
/// meddling interaction with the renormalized linear rate a_prime >= a.
class GenericZenoCriteria {
 public:
  GenericZenoCriteria(double R0, double a, double b, double a_prime, double T, long long N);

  double R0() const { return R0_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double a_prime() const { return a_prime_; }
  double T() const { return T_; }
  long long N() const { return N_; }

 private:
  double R0_, a_, b_, a_prime_, T_;
  long long N_;
};

/// The LC/LR circuit as a generic instance: R0 = q0, a = a' = |i0|/q0,
/// b = omega^2 / 2.
GenericZenoCriteria lc_lr_criteria(const CircuitParams& params, const SwitchSchedule& schedule);

/// ratio = |i0| / (q0 omega^2 (T/N) / 2).
PhaseReport classify_phase(const CircuitParams& params, const SwitchSchedule& schedule,
                           double margin = kDefaultMargin);

/// ratio = a' / (b T/N).
PhaseReport classify_generic(const GenericZenoCriteria& c, double margin = kDefaultMargin);

struct ZenoLimit {
  double limit_charge;      // q0
  double relative_deficit;  // (omega T)^2 / (2N), first order in 1/N
};

ZenoLimit zeno_limit(const CircuitParams& params, const SwitchSchedule& schedule);

/// q0 exp(-|i0| t / q0), the N -> infinity limit under ratio-restoring resets.
double anti_zeno_limit(const CircuitParams& params, double t);

enum class UniversalityClass { Unity, Exponential, Divergent };

const char* to_string(UniversalityClass u);

struct UniversalityQuery {
  double x;
  double delta;
  double N;
};

struct UniversalityValue {
  /// N ln(1 + (x/N)^delta)
  double log_value;
  UniversalityClass limit_class;
  /// Limit of log_value as N -> infinity: 0, x or +inf.
  double limit_log;
};

/// Log of [1 + (x/N)^delta]^N. Throws std::invalid_argument unless x > 0,
/// delta > 0 and N >= 1.
UniversalityValue universality_log_value(const UniversalityQuery& u);

struct DeviationMetrics {
  /// q - (q0 cos wt + (i0/w) sin wt). Positive means slower discharge.
  double peak_dev_cosine = 0.0;
  double end_dev_cosine = 0.0;
  /// q - q0 exp(-|i0| t/q0). Negative means faster than the envelope.
  double peak_dev_envelope = 0.0;
  double end_dev_envelope = 0.0;
  /// Charge lost in each cycle, q(start of cycle) - q(end of cycle).
  std::vector<double> cycle_decrements;
  /// Apparent second derivative of q over each ON segment,
  /// 2 (q_end - q_start - i_start T_C) / T_C^2.
  std::vector<double> segment_curvature;
};

/// The peak values are the signed deviations of largest magnitude over all
/// samples. Per-cycle series are empty when the trajectory has no cycles or
/// T_C == 0.
DeviationMetrics deviation_metrics(const Trajectory& traj, const CircuitParams& params,
                                   const SwitchSchedule& schedule);

}  // namespace lczeno
