#pragma once

// Fixed-step fourth-order Runge-Kutta replay of the switching protocol, used
// as an independent check on the closed-form propagators.

#include <cstddef>

#include "lczeno/core_model.hpp"
#include "lczeno/switch_engine.hpp"

namespace lczeno {

struct OracleConfig {
  /// Nominal RK4 step h. Each interval dt is covered by ceil(dt/h) equal
  /// steps, so the realised step never exceeds h (to one part in 1e9).
  double step;
  double tolerance = 1e-8;
};

/// RK4 on q' = i, i' = -omega^2 q.
CircuitState rk4_lc(const CircuitState& s, double omega, double dt, double h);

/// RK4 on i' = -decay_rate * i.
double rk4_lr(double current, double decay_rate, double dt, double h);

/// The protocol of run_switched with numerically integrated segments. Reset
/// decisions are taken from the oracle's own state at each switch instant.
Trajectory oracle_trajectory(const CircuitParams& params, const SwitchSchedule& schedule,
                             ResetMode reset, OracleConfig config, SamplingPolicy sampling = {});

struct ComparisonStats {
  std::size_t count = 0;
  double max_rel_q = 0.0;
  double mean_rel_q = 0.0;
  double max_rel_i = 0.0;
  double mean_rel_i = 0.0;
  bool pass = true;
};

/// Sample-by-sample relative errors |a - b| / max(|a|, |b|) (zero when both
/// vanish). Throws std::invalid_argument if the grids differ in length,
/// time or regime.
ComparisonStats compare(const Trajectory& a, const Trajectory& b, double tolerance);

}  // namespace lczeno
