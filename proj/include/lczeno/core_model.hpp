#pragma once

// Physical types and single-segment propagators for the switched LC/LR circuit.
//
// Sign convention: a discharging current is negative. All currents are stored
// signed; absolute values are taken only where a formula asks for a magnitude.

#include <stdexcept>
#include <string>
#include <vector>

namespace lczeno {

/// Circuit constants and the prepared initial condition.
/// Throws std::invalid_argument unless L > 0, C > 0, q0 > 0 and i0 <= 0.
class CircuitParams {
 public:
  CircuitParams(double L, double C, double q0, double i0);

  double L() const { return L_; }
  double C() const { return C_; }
  double q0() const { return q0_; }
  double i0() const { return i0_; }

 private:
  double L_, C_, q0_, i0_;
};

struct DerivedScales {
  double omega;      // rad/s
  double tau_omega;  // 1/omega
  double tau_i;      // |q0/i0|, +inf when i0 == 0
};

/// Switching protocol: N identical cycles of an ON (LC) segment of length
/// T_C followed by an OFF (LR) segment of length T_R, with T_C + T_R == T/N.
class SwitchSchedule {
 public:
  /// Splits the period T/N so that T_R / T_C == ratio and the two durations
  /// sum to the period exactly in floating point.
  static SwitchSchedule from_ratio(double T, long long N, double ratio);

  /// Takes the segment durations as given; T = N * (T_C + T_R).
  static SwitchSchedule from_durations(long long N, double T_C, double T_R);

  double T() const { return T_; }
  long long N() const { return N_; }
  double T_C() const { return T_C_; }
  double T_R() const { return T_R_; }
  double period() const { return T_ / static_cast<double>(N_); }
  /// Start of cycle k, computed directly from T so that cycle N lands on T.
  double cycle_start(long long k) const {
    if (k == N_) return T_;
    return T_ * static_cast<double>(k) / static_cast<double>(N_);
  }

 private:
  SwitchSchedule(double T, long long N, double T_C, double T_R)
      : T_(T), N_(N), T_C_(T_C), T_R_(T_R) {}

  double T_;
  long long N_;
  double T_C_, T_R_;
};

struct CircuitState {
  double t = 0.0;
  double q = 0.0;
  double i = 0.0;
};

struct ValidityCheck {
  std::string name;
  bool satisfied;
  double lhs;
  double rhs;
};

struct ValidityReport {
  bool ok = true;
  std::vector<ValidityCheck> checks;
};

struct EnergyLedger {
  double E_cap = 0.0;
  double E_ind = 0.0;
  double E_dissipated = 0.0;

  double total() const { return E_cap + E_ind + E_dissipated; }
};

struct StoredEnergy {
  double E_cap;
  double E_ind;
};

/// Shunt resistance of the OFF regime. An open circuit (infinite resistance)
/// is an explicit state, never a large finite number.
class Resistance {
 public:
  static Resistance ohms(double value);
  static Resistance open_circuit() { return Resistance(0.0, true); }

  bool is_open() const { return open_; }
  /// Finite value in ohms. Throws std::logic_error for an open circuit.
  double value() const;

  friend bool operator==(const Resistance&, const Resistance&) = default;

 private:
  Resistance(double v, bool open) : value_(v), open_(open) {}
  double value_;
  bool open_;
};

/// Thrown when a current reset cannot be reached by exponential decay.
class ResetUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DerivedScales derive_scales(const CircuitParams& params);

inline constexpr double kDefaultMargin = 0.1;

/// Evaluates the short-time regime conditions. Each "a << b" is rendered as
/// a <= margin * b. The report always lists the four checks in order:
/// period_vs_tau_omega, off_vs_on, initial_current, horizon_vs_tau_omega.
ValidityReport validate_regime(const CircuitParams& params, const SwitchSchedule& schedule,
                               double margin = kDefaultMargin);

/// Closed-form LC evolution (harmonic oscillator in charge).
CircuitState lc_segment_exact(const CircuitState& s, double omega, double dt);

/// Second-order Taylor evolution of the LC segment; the current is the
/// derivative of the quadratic charge law.
CircuitState lc_segment_quadratic(const CircuitState& s, double omega, double dt);

/// Exponential decay of the inductor current through the shunt. An open
/// circuit drops the current to zero for any dt > 0.
double lr_segment(double i_at_switch, Resistance R, double L, double dt);

/// Resistance that brings the first-cycle quadratic current back to i0 in
/// time T_R, using only t = 0 quantities. Open circuit when i0 == 0.
/// Throws std::invalid_argument when T_R == 0 and a finite decay is needed.
Resistance select_R_fixed(const CircuitParams& params, double T_C, double T_R);

/// Resistance that makes lr_segment(i_at_tc, R, L, T_R) == target.
/// Throws ResetUnreachable if |i_at_tc| < |target| or the signs differ, and
/// std::invalid_argument for target == 0 with i_at_tc != 0 or T_R == 0 with
/// a nonzero decay required.
Resistance select_R_exact(double i_at_tc, double target, double L, double T_R);

StoredEnergy energies(const CircuitState& s, const CircuitParams& params);

}  // namespace lczeno
