#include "lczeno/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace lczeno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double at(const std::array<double, kParamCount>& v, Param p) {
  return v[static_cast<std::size_t>(p)];
}

long long checked_N(double n) {
  if (!(n >= 1.0) || n != std::floor(n) || n > 1e15) {
    throw std::invalid_argument("N must be a positive integer");
  }
  return static_cast<long long>(n);
}

// Parameter tuple of grid point `index`, last axis fastest.
std::array<double, kParamCount> point_values(const SweepConfig& cfg, std::size_t index) {
  std::array<double, kParamCount> v{};
  for (Param p : kAllParams) {
    const auto& f = cfg.fixed[static_cast<std::size_t>(p)];
    if (f) v[static_cast<std::size_t>(p)] = *f;
  }
  for (auto it = cfg.axes.rbegin(); it != cfg.axes.rend(); ++it) {
    const std::size_t n = it->values.size();
    v[static_cast<std::size_t>(it->param)] = it->values[index % n];
    index /= n;
  }
  return v;
}

}  // namespace

SweepPoint evaluate_point(const std::array<double, kParamCount>& values, EngineMode mode,
                          double margin, int samples) {
  SweepPoint pt;
  pt.values = values;
  pt.scales = {kNaN, kNaN, kNaN};
  pt.q_final_norm = pt.bound_norm = pt.dev_cosine = pt.dev_envelope = kNaN;
  try {
    const CircuitParams params(at(values, Param::L), at(values, Param::C), at(values, Param::q0),
                               at(values, Param::i0));
    const SwitchSchedule schedule = SwitchSchedule::from_ratio(
        at(values, Param::T), checked_N(at(values, Param::N)), at(values, Param::tr_ratio));
    pt.scales = derive_scales(params);
    pt.phase = classify_phase(params, schedule, margin);
    const ValidityReport validity = validate_regime(params, schedule, margin);
    try {
      pt.bound_norm = charge_bound(params, schedule) / params.q0();
    } catch (const BoundInapplicable&) {
    }
    const Trajectory traj = run_switched(params, schedule, mode, {samples, true});
    const DeviationMetrics m = deviation_metrics(traj, params, schedule);
    pt.q_final_norm = traj.samples.back().q / params.q0();
    pt.dev_cosine = m.end_dev_cosine / params.q0();
    pt.dev_envelope = m.end_dev_envelope / params.q0();
    pt.params_ok = true;
    pt.valid = validity.ok;
    if (!validity.ok) {
      for (const ValidityCheck& c : validity.checks) {
        if (!c.satisfied) pt.error += (pt.error.empty() ? "regime: " : ", ") + c.name;
      }
    }
  } catch (const std::exception& e) {
    pt.params_ok = false;
    pt.valid = false;
    pt.error = e.what();
  }
  return pt;
}

SweepResult run_sweep(const SweepConfig& config, unsigned threads) {
  SweepResult result;
  result.mode = config.mode;
  result.margin = config.margin;
  const std::size_t n = config.point_count();
  result.points.resize(n);

  auto work = [&](std::size_t index) {
    result.points[index] =
        evaluate_point(point_values(config, index), config.mode, config.margin, config.samples);
  };

  if (threads <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) work(k);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) work(k);
    });
  }
  pool.clear();
  return result;
}

std::vector<ConvergenceRow> convergence_study(const CircuitParams& params, double T,
                                              double tr_ratio, const std::vector<long long>& Ns,
                                              EngineMode mode) {
  if (Ns.empty()) throw std::invalid_argument("convergence_study: N list is empty");
  for (std::size_t k = 1; k < Ns.size(); ++k) {
    if (Ns[k] <= Ns[k - 1]) throw std::invalid_argument("convergence_study: N list must ascend");
  }
  const double envelope = anti_zeno_limit(params, T) / params.q0();
  std::vector<ConvergenceRow> rows;
  rows.reserve(Ns.size());
  for (long long N : Ns) {
    const SwitchSchedule schedule = SwitchSchedule::from_ratio(T, N, tr_ratio);
    const Trajectory traj = run_switched(params, schedule, mode);
    const double q_norm = traj.samples.back().q / params.q0();
    double bound = kNaN;
    try {
      bound = charge_bound(params, schedule) / params.q0();
    } catch (const BoundInapplicable&) {
    }
    rows.push_back({N, q_norm, 1.0 - q_norm, bound, q_norm - envelope});
  }
  return rows;
}

}  // namespace lczeno
