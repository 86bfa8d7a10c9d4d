#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lczeno/core_model.hpp"

namespace lczeno {

enum class Evolution { Exact, Quadratic };

/// How the OFF segment chooses its shunt resistance.
///  - FixedR: one resistance for the whole run, computed from t = 0 values.
///  - PerCycleExact: re-selected every cycle so the current lands on i0.
///  - Proportional: re-selected every cycle so the current lands on
///    i0 * q / q0, i.e. the ratio i/q (and so tau_i) is restored each cycle.
///    This is the protocol whose N -> infinity limit is the exponential
///    envelope q0 * exp(-|i0| t / q0).
/// With i0 == 0 every mode disconnects the inductor (open circuit) and the
/// current is 0 at the start of each ON segment.
enum class ResetMode { FixedR, PerCycleExact, Proportional };

struct EngineMode {
  Evolution evolution = Evolution::Exact;
  ResetMode reset = ResetMode::PerCycleExact;
};

enum class Regime : std::uint8_t { On, Off };

struct Sample {
  double t;
  double q;
  double i;
  Regime regime;
  long long cycle;
  double E_cap;
  double E_ind;
  double E_dissipated;
};

struct SamplingPolicy {
  int per_segment_points = 1;
  /// When true each segment is sampled at j/K of its length, j = 1..K, so
  /// every switch instant is recorded. When false only interior points
  /// j/(K+1) are taken. t = 0 and t = T are always present.
  bool include_endpoints = true;
};

struct Trajectory {
  std::vector<Sample> samples;
  /// State at the end of every cycle, after the OFF segment.
  std::vector<CircuitState> cycle_ends;
  /// Current at the end of every ON segment, just before the shunt acts.
  std::vector<double> switch_currents;
  /// False when the run was made outside the short-time regime.
  bool regime_valid = true;
};

struct CycleOutcome {
  CircuitState state;
  std::vector<Sample> samples;
  double dissipated = 0.0;
  double i_at_switch = 0.0;
};

/// One ON segment of length T_C followed by one OFF segment of length T_R,
/// starting at state.t. Samples carry cycle index 0 and count dissipation
/// from zero.
CycleOutcome run_cycle(const CircuitState& state, const CircuitParams& params,
                       const SwitchSchedule& schedule, EngineMode mode,
                       SamplingPolicy sampling = {});

/// N cycles from (0, q0, i0). The last sample is at t == T exactly.
Trajectory run_switched(const CircuitParams& params, const SwitchSchedule& schedule,
                        EngineMode mode, SamplingPolicy sampling = {});

/// Closed-form LC evolution over [0, T_end] without switching.
Trajectory run_unswitched(const CircuitParams& params, double T_end, SamplingPolicy sampling = {});

/// What the OFF segment does to the current, decided at the switch instant.
struct OffPlan {
  enum class Kind {
    Decay,    // exponential decay through R
    Instant,  // T_R == 0: the current jumps to target
    Open,     // inductor disconnected, current dropped to 0
  };
  Kind kind;
  Resistance R;
  double target;

  /// Current after a fraction f in [0, 1] of an OFF segment of length T_R.
  double current_at(double i_at_switch, double L, double T_R, double f) const;
};

/// Shared by the engine and the numerical oracle so that both apply the
/// same reset rule. Throws ResetUnreachable when a per-cycle reset would
/// need the current to grow.
OffPlan plan_off_segment(const CircuitParams& params, const SwitchSchedule& schedule,
                         ResetMode reset, double q_at_switch, double i_at_switch);

class BoundInapplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// q0 * [1 - (omega T/N)^2 / 2 - (|i0|/q0) T/N]^N. Throws BoundInapplicable
/// when the bracket is negative.
double charge_bound(const CircuitParams& params, const SwitchSchedule& schedule);

const char* to_string(Evolution e);
const char* to_string(ResetMode r);
const char* to_string(Regime r);

}  // namespace lczeno
