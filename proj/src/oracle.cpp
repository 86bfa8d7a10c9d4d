#include "lczeno/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lczeno/detail/sampling.hpp"

namespace lczeno {

namespace {

using detail::make_sample;
using detail::push_sample;

long long step_count(double dt, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("RK4 step must be positive");
  if (!(dt >= 0.0)) throw std::invalid_argument("RK4 interval must be >= 0");
  if (dt == 0.0) return 0;
  return std::max(1LL, static_cast<long long>(std::ceil(dt / h * (1.0 - 1e-9))));
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

CircuitState rk4_lc(const CircuitState& s, double omega, double dt, double h) {
  const long long n = step_count(dt, h);
  const double w2 = omega * omega;
  double q = s.q;
  double i = s.i;
  if (n > 0) {
    const double k = dt / static_cast<double>(n);
    for (long long j = 0; j < n; ++j) {
      const double q1 = i, i1 = -w2 * q;
      const double q2 = i + 0.5 * k * i1, i2 = -w2 * (q + 0.5 * k * q1);
      const double q3 = i + 0.5 * k * i2, i3 = -w2 * (q + 0.5 * k * q2);
      const double q4 = i + k * i3, i4 = -w2 * (q + k * q3);
      q += k / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
      i += k / 6.0 * (i1 + 2.0 * i2 + 2.0 * i3 + i4);
    }
  }
  return {s.t + dt, q, i};
}

double rk4_lr(double current, double decay_rate, double dt, double h) {
  const long long n = step_count(dt, h);
  double i = current;
  if (n > 0) {
    const double k = dt / static_cast<double>(n);
    for (long long j = 0; j < n; ++j) {
      const double k1 = -decay_rate * i;
      const double k2 = -decay_rate * (i + 0.5 * k * k1);
      const double k3 = -decay_rate * (i + 0.5 * k * k2);
      const double k4 = -decay_rate * (i + k * k3);
      i += k / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return i;
}

Trajectory oracle_trajectory(const CircuitParams& params, const SwitchSchedule& schedule,
                             ResetMode reset, OracleConfig config, SamplingPolicy sampling) {
  if (!(config.step > 0.0)) throw std::invalid_argument("OracleConfig: step must be positive");
  std::vector<double> points = detail::segment_fractions(sampling);
  const std::size_t sampled = points.size();
  if (points.back() != 1.0) points.push_back(1.0);

  const double omega = derive_scales(params).omega;
  const double h = config.step;
  const double L = params.L();
  const double T_C = schedule.T_C();
  const double T_R = schedule.T_R();

  Trajectory traj;
  traj.regime_valid = validate_regime(params, schedule).ok;
  CircuitState state{0.0, params.q0(), params.i0()};
  double dissipated = 0.0;
  push_sample(traj.samples, make_sample(state, Regime::On, 0, 0.0, params));

  for (long long k = 0; k < schedule.N(); ++k) {
    const double t0 = schedule.cycle_start(k);
    const double t_end = schedule.cycle_start(k + 1);

    // ON, integrated sample point to sample point.
    CircuitState s{t0, state.q, state.i};
    double f_prev = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      s = rk4_lc(s, omega, (points[j] - f_prev) * T_C, h);
      f_prev = points[j];
      s.t = points[j] == 1.0 ? t0 + T_C : t0 + points[j] * T_C;
      if (j < sampled) push_sample(traj.samples, make_sample(s, Regime::On, k, dissipated, params));
    }
    const double q_sw = s.q;
    const double i_sw = s.i;
    const double t_sw = s.t;

    // OFF: the same reset rule as the engine, decay integrated numerically.
    const OffPlan plan = plan_off_segment(params, schedule, reset, q_sw, i_sw);
    double i = i_sw;
    f_prev = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const double f = points[j];
      switch (plan.kind) {
        case OffPlan::Kind::Decay:
          i = rk4_lr(i, plan.R.value() / L, (f - f_prev) * T_R, h);
          break;
        case OffPlan::Kind::Instant:
          i = plan.target;
          break;
        case OffPlan::Kind::Open:
          i = 0.0;
          break;
      }
      f_prev = f;
      if (j < sampled) {
        const CircuitState off{f == 1.0 ? t_end : t_sw + f * T_R, q_sw, i};
        push_sample(traj.samples, make_sample(off, Regime::Off, k, dissipated +
                                                                       0.5 * L * (i_sw * i_sw - i * i),
                                              params));
      }
    }
    dissipated += 0.5 * L * (i_sw * i_sw - i * i);
    state = {t_end, q_sw, i};
    traj.cycle_ends.push_back(state);
    traj.switch_currents.push_back(i_sw);
  }

  if (traj.samples.back().t != schedule.T() || !sampling.include_endpoints) {
    state.t = schedule.T();
    push_sample(traj.samples, make_sample(state, Regime::Off, schedule.N() - 1, dissipated, params));
  }
  return traj;
}

ComparisonStats compare(const Trajectory& a, const Trajectory& b, double tolerance) {
  if (a.samples.size() != b.samples.size()) {
    throw std::invalid_argument("compare: sample counts differ (" +
                                std::to_string(a.samples.size()) + " vs " +
                                std::to_string(b.samples.size()) + ")");
  }
  ComparisonStats st;
  st.count = a.samples.size();
  double sum_q = 0.0;
  double sum_i = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const Sample& x = a.samples[k];
    const Sample& y = b.samples[k];
    if (x.t != y.t || x.regime != y.regime) {
      throw std::invalid_argument("compare: sample grids differ at index " + std::to_string(k));
    }
    const double eq = relative_error(x.q, y.q);
    const double ei = relative_error(x.i, y.i);
    st.max_rel_q = std::max(st.max_rel_q, eq);
    st.max_rel_i = std::max(st.max_rel_i, ei);
    sum_q += eq;
    sum_i += ei;
  }
  if (st.count > 0) {
    st.mean_rel_q = sum_q / static_cast<double>(st.count);
    st.mean_rel_i = sum_i / static_cast<double>(st.count);
  }
  st.pass = st.max_rel_q <= tolerance && st.max_rel_i <= tolerance;
  return st;
}

}  // namespace lczeno
