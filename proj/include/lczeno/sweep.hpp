#pragma once

// Parameter sweeps over the seven-dimensional (L, C, q0, i0, T, N, T_R/T_C)
// space and N-convergence studies.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lczeno/core_model.hpp"
#include "lczeno/phase_analysis.hpp"
#include "lczeno/switch_engine.hpp"

namespace lczeno {

enum class Param { L, C, q0, i0, T, N, tr_ratio };

inline constexpr std::size_t kParamCount = 7;
inline constexpr std::array<Param, kParamCount> kAllParams = {
    Param::L, Param::C, Param::q0, Param::i0, Param::T, Param::N, Param::tr_ratio};

const char* to_string(Param p);
std::optional<Param> param_from_string(std::string_view name);

enum class Format { Csv, Json };

struct Axis {
  Param param;
  std::vector<double> values;
};

struct SweepConfig {
  /// Swept parameters in declaration order; the first axis varies slowest.
  std::vector<Axis> axes;
  /// Values of the parameters that are not swept, indexed by Param.
  std::array<std::optional<double>, kParamCount> fixed{};
  EngineMode mode{};
  double margin = kDefaultMargin;
  /// Samples per segment used for the deviation metrics.
  int samples = 1;
  Format format = Format::Csv;

  std::size_t point_count() const;
};

/// Configuration problems. The message starts with the offending key path,
/// e.g. "axis.N.count: ...".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the sweep configuration document (see docs/config.md).
SweepConfig parse_config(std::string_view text);

/// Grid helpers. A log grid needs nonzero endpoints of equal sign and is
/// spaced in |value|. Endpoints are reproduced exactly.
std::vector<double> linear_grid(double min, double max, int count);
std::vector<double> log_grid(double min, double max, int count);

struct SweepPoint {
  std::array<double, kParamCount> values{};
  /// Physical parameters were well formed and the run completed.
  bool params_ok = false;
  /// params_ok and every short-time regime check passed.
  bool valid = false;
  std::string error;
  DerivedScales scales{};
  std::optional<PhaseReport> phase;
  double q_final_norm;
  double bound_norm;
  double dev_cosine;
  double dev_envelope;
};

struct SweepResult {
  EngineMode mode{};
  double margin = kDefaultMargin;
  std::vector<SweepPoint> points;
};

/// Evaluates one parameter tuple. Never throws; failures are recorded in the
/// returned point.
SweepPoint evaluate_point(const std::array<double, kParamCount>& values, EngineMode mode,
                          double margin, int samples);

/// Evaluates every grid point, row-major over the axes in declaration order.
/// The result does not depend on the number of worker threads.
SweepResult run_sweep(const SweepConfig& config, unsigned threads = 1);

struct ConvergenceRow {
  long long N;
  double q_norm;        // q(T)/q0
  double deficit;       // 1 - q(T)/q0
  double bound_norm;    // charge bound / q0, NaN where inapplicable
  double envelope_dev;  // q(T)/q0 - exp(-|i0| T/q0)
};

/// One row per N. Throws std::invalid_argument unless Ns is non-empty and
/// strictly ascending.
std::vector<ConvergenceRow> convergence_study(const CircuitParams& params, double T,
                                              double tr_ratio, const std::vector<long long>& Ns,
                                              EngineMode mode);

}  // namespace lczeno
