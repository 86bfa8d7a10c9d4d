#include "lczeno/switch_engine.hpp"

#include <cmath>
#include <string>

#include "lczeno/detail/sampling.hpp"

namespace lczeno {

namespace {

using detail::make_sample;
using detail::push_sample;
using detail::segment_fractions;

CircuitState propagate_on(const CircuitState& s, double omega, double dt, Evolution evolution) {
  return evolution == Evolution::Exact ? lc_segment_exact(s, omega, dt)
                                       : lc_segment_quadratic(s, omega, dt);
}

struct CycleContext {
  const CircuitParams& params;
  const SwitchSchedule& schedule;
  EngineMode mode;
  double omega;
  const std::vector<double>& fractions;
  long long cycle;
  double t_end;
  double dissipated_before;
};

CycleOutcome advance_cycle(const CircuitState& start, const CycleContext& ctx) {
  const double T_C = ctx.schedule.T_C();
  const double T_R = ctx.schedule.T_R();
  const double L = ctx.params.L();
  CycleOutcome out;

  // ON: LC evolution.
  CircuitState at_switch = propagate_on(start, ctx.omega, T_C, ctx.mode.evolution);
  at_switch.t = start.t + T_C;
  for (double f : ctx.fractions) {
    CircuitState s = f == 1.0 ? at_switch : propagate_on(start, ctx.omega, f * T_C, ctx.mode.evolution);
    if (f == 1.0) s.t = at_switch.t;
    push_sample(out.samples, make_sample(s, Regime::On, ctx.cycle, ctx.dissipated_before, ctx.params));
  }

  // OFF: charge frozen, current shunted.
  const OffPlan plan =
      plan_off_segment(ctx.params, ctx.schedule, ctx.mode.reset, at_switch.q, at_switch.i);
  const double i_sw = at_switch.i;
  for (double f : ctx.fractions) {
    CircuitState s{f == 1.0 ? ctx.t_end : at_switch.t + f * T_R, at_switch.q,
                   plan.current_at(i_sw, L, T_R, f)};
    const double lost = 0.5 * L * (i_sw * i_sw - s.i * s.i);
    push_sample(out.samples,
                make_sample(s, Regime::Off, ctx.cycle, ctx.dissipated_before + lost, ctx.params));
  }

  out.state = {ctx.t_end, at_switch.q, plan.current_at(i_sw, L, T_R, 1.0)};
  out.dissipated = 0.5 * L * (i_sw * i_sw - out.state.i * out.state.i);
  out.i_at_switch = i_sw;
  return out;
}

}  // namespace

double OffPlan::current_at(double i_at_switch, double L, double T_R, double f) const {
  if (f == 0.0) return i_at_switch;
  switch (kind) {
    case Kind::Open:
      return 0.0;
    case Kind::Instant:
      return target;
    case Kind::Decay:
      break;
  }
  return lr_segment(i_at_switch, R, L, f == 1.0 ? T_R : f * T_R);
}

OffPlan plan_off_segment(const CircuitParams& params, const SwitchSchedule& schedule,
                         ResetMode reset, double q_at_switch, double i_at_switch) {
  if (params.i0() == 0.0) return {OffPlan::Kind::Open, Resistance::open_circuit(), 0.0};

  if (reset == ResetMode::FixedR) {
    const Resistance R = select_R_fixed(params, schedule.T_C(), schedule.T_R());
    return {OffPlan::Kind::Decay, R, lr_segment(i_at_switch, R, params.L(), schedule.T_R())};
  }

  const double target = reset == ResetMode::PerCycleExact
                            ? params.i0()
                            : params.i0() * q_at_switch / params.q0();
  if (schedule.T_R() == 0.0) {
    if (!(target != 0.0 && i_at_switch / target >= 1.0)) {
      throw ResetUnreachable("instantaneous reset: current " + std::to_string(i_at_switch) +
                             " cannot decay to " + std::to_string(target));
    }
    return {OffPlan::Kind::Instant, Resistance::open_circuit(), target};
  }
  if (target == 0.0) {
    throw ResetUnreachable("reset target vanished: capacitor fully discharged");
  }
  const Resistance R = select_R_exact(i_at_switch, target, params.L(), schedule.T_R());
  return {OffPlan::Kind::Decay, R, target};
}

CycleOutcome run_cycle(const CircuitState& state, const CircuitParams& params,
                       const SwitchSchedule& schedule, EngineMode mode, SamplingPolicy sampling) {
  const auto fractions = segment_fractions(sampling);
  const CycleContext ctx{params,
                         schedule,
                         mode,
                         derive_scales(params).omega,
                         fractions,
                         0,
                         state.t + schedule.T_C() + schedule.T_R(),
                         0.0};
  return advance_cycle(state, ctx);
}

Trajectory run_switched(const CircuitParams& params, const SwitchSchedule& schedule,
                        EngineMode mode, SamplingPolicy sampling) {
  const auto fractions = segment_fractions(sampling);
  const double omega = derive_scales(params).omega;
  Trajectory traj;
  traj.regime_valid = validate_regime(params, schedule).ok;
  const std::size_t per_cycle = 2 * fractions.size();
  traj.samples.reserve(static_cast<std::size_t>(schedule.N()) * per_cycle + 2);
  traj.cycle_ends.reserve(static_cast<std::size_t>(schedule.N()));
  traj.switch_currents.reserve(static_cast<std::size_t>(schedule.N()));

  CircuitState state{0.0, params.q0(), params.i0()};
  double dissipated = 0.0;
  push_sample(traj.samples, make_sample(state, Regime::On, 0, 0.0, params));

  for (long long k = 0; k < schedule.N(); ++k) {
    state.t = schedule.cycle_start(k);
    const CycleContext ctx{params,    schedule, mode, omega, fractions, k,
                           schedule.cycle_start(k + 1), dissipated};
    CycleOutcome c = advance_cycle(state, ctx);
    for (const Sample& s : c.samples) push_sample(traj.samples, s);
    dissipated += c.dissipated;
    state = c.state;
    traj.cycle_ends.push_back(state);
    traj.switch_currents.push_back(c.i_at_switch);
  }

  if (traj.samples.back().t != schedule.T() || !sampling.include_endpoints) {
    state.t = schedule.T();
    push_sample(traj.samples,
                make_sample(state, Regime::Off, schedule.N() - 1, dissipated, params));
  }
  return traj;
}

Trajectory run_unswitched(const CircuitParams& params, double T_end, SamplingPolicy sampling) {
  if (!(T_end >= 0.0)) throw std::invalid_argument("run_unswitched: T_end must be >= 0");
  const auto fractions = segment_fractions(sampling);
  const double omega = derive_scales(params).omega;
  const CircuitState start{0.0, params.q0(), params.i0()};
  Trajectory traj;
  push_sample(traj.samples, make_sample(start, Regime::On, 0, 0.0, params));
  for (double f : fractions) {
    CircuitState s = lc_segment_exact(start, omega, f * T_end);
    s.t = f * T_end;
    push_sample(traj.samples, make_sample(s, Regime::On, 0, 0.0, params));
  }
  if (traj.samples.back().t != T_end) {
    CircuitState s = lc_segment_exact(start, omega, T_end);
    s.t = T_end;
    push_sample(traj.samples, make_sample(s, Regime::On, 0, 0.0, params));
  }
  return traj;
}

double charge_bound(const CircuitParams& params, const SwitchSchedule& schedule) {
  const double omega = derive_scales(params).omega;
  const double p = schedule.period();
  const double bracket =
      1.0 - 0.5 * omega * omega * p * p - std::abs(params.i0()) / params.q0() * p;
  if (bracket < 0.0) {
    throw BoundInapplicable("charge_bound: bracket " + std::to_string(bracket) +
                            " is negative; the bound is vacuous");
  }
  return params.q0() * std::pow(bracket, static_cast<double>(schedule.N()));
}

const char* to_string(Evolution e) { return e == Evolution::Exact ? "exact" : "quadratic"; }

const char* to_string(ResetMode r) {
  switch (r) {
    case ResetMode::FixedR:
      return "fixed";
    case ResetMode::PerCycleExact:
      return "percycle";
    case ResetMode::Proportional:
      return "proportional";
  }
  return "?";
}

const char* to_string(Regime r) { return r == Regime::On ? "ON" : "OFF"; }

}  // namespace lczeno
