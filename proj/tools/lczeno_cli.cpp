// lczeno: command-line front end for the switched LC/LR simulator.
//
// Exit codes: 0 success, 1 validation or check failure, 2 configuration or
// usage error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lczeno/core_model.hpp"
#include "lczeno/emit.hpp"
#include "lczeno/oracle.hpp"
#include "lczeno/phase_analysis.hpp"
#include "lczeno/sweep.hpp"
#include "lczeno/switch_engine.hpp"

namespace {

using namespace lczeno;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, Evolution> kEvolutions{{"exact", Evolution::Exact},
                                                   {"quadratic", Evolution::Quadratic}};
const std::map<std::string, ResetMode> kResets{{"fixed", ResetMode::FixedR},
                                               {"percycle", ResetMode::PerCycleExact},
                                               {"proportional", ResetMode::Proportional}};
const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};

struct Physics {
  double L = 0, C = 0, q0 = 0, i0 = 0, T = 0;
  long long N = 0;
  double tr_ratio = 0.01;
  Evolution evolution = Evolution::Exact;
  ResetMode reset = ResetMode::PerCycleExact;
  double margin = kDefaultMargin;

  CircuitParams params() const { return CircuitParams(L, C, q0, i0); }
  SwitchSchedule schedule() const { return SwitchSchedule::from_ratio(T, N, tr_ratio); }
  EngineMode mode() const { return {evolution, reset}; }
};

void add_circuit(CLI::App* app, Physics& p, bool required) {
  auto req = [required](CLI::Option* o) { return required ? o->required() : o; };
  req(app->add_option("--L", p.L, "inductance (H)"));
  req(app->add_option("--C", p.C, "capacitance (F)"));
  req(app->add_option("--q0", p.q0, "initial charge (C)"));
  req(app->add_option("--i0", p.i0, "initial current (A)"));
  req(app->add_option("--T", p.T, "horizon (s)"));
}

void add_physics(CLI::App* app, Physics& p, bool with_N = true) {
  add_circuit(app, p, true);
  if (with_N) app->add_option("--N", p.N, "number of cycles")->required();
  app->add_option("--tr-ratio", p.tr_ratio, "T_R / T_C")->capture_default_str();
  app->add_option("--mode", p.evolution, "ON evolution: exact|quadratic")
      ->transform(CLI::CheckedTransformer(kEvolutions, CLI::ignore_case))
      ->default_str("exact");
  app->add_option("--reset", p.reset, "current reset: fixed|percycle|proportional")
      ->transform(CLI::CheckedTransformer(kResets, CLI::ignore_case))
      ->default_str("percycle");
  app->add_option("--margin", p.margin, "phase and validity margin")->capture_default_str();
}

// Writes through `write` to PATH, or to stdout for "-".
template <class F>
void with_output(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void warn_if_outside_regime(const Physics& p) {
  const ValidityReport r = validate_regime(p.params(), p.schedule(), p.margin);
  for (const ValidityCheck& c : r.checks) {
    if (!c.satisfied) {
      std::cerr << "warning: outside the short-time regime: " << c.name << " (" << format_real(c.lhs)
                << " vs " << format_real(c.rhs) << ")\n";
    }
  }
}

int cmd_simulate(const Physics& p, int samples, Format format, const std::string& out) {
  warn_if_outside_regime(p);
  const Trajectory tr = run_switched(p.params(), p.schedule(), p.mode(), {samples, true});
  with_output(out, [&](std::ostream& os) { emit(tr, format, os); });
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, unsigned threads) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw UsageError("cannot read config '" + config_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const SweepConfig cfg = parse_config(text.str());
  const SweepResult r = run_sweep(cfg, threads);
  with_output(out, [&](std::ostream& os) { emit(r, cfg.format, os); });
  return kOk;
}

int cmd_classify(const Physics& p) {
  const PhaseReport r = classify_phase(p.params(), p.schedule(), p.margin);
  const ValidityReport v = validate_regime(p.params(), p.schedule(), p.margin);
  const DerivedScales d = derive_scales(p.params());
  std::cout << "phase: " << to_string(r.phase) << "\n"
            << "ratio: " << format_real(r.ratio) << "\n"
            << "margin: " << format_real(r.margin) << "\n"
            << "degenerate: " << (r.degenerate ? "true" : "false") << "\n"
            << "omega: " << format_real(d.omega) << "\n"
            << "tau_omega: " << format_real(d.tau_omega) << "\n"
            << "tau_i: " << format_real(d.tau_i) << "\n"
            << "valid: " << (v.ok ? "true" : "false") << "\n";
  for (const ValidityCheck& c : v.checks) {
    std::cout << "check " << c.name << ": " << (c.satisfied ? "ok" : "violated") << " ("
              << format_real(c.lhs) << " vs " << format_real(c.rhs) << ")\n";
  }
  return kOk;
}

int cmd_limits(const Physics& p, bool have_circuit, const std::vector<double>& deltas, double x,
               const std::vector<double>& Ns) {
  std::cout << "# universality: N ln(1 + (x/N)^delta)\n"
            << "delta,x,N,log_value,value,class,limit_log\n";
  for (double delta : deltas) {
    for (double N : Ns) {
      const UniversalityValue u = universality_log_value({x, delta, N});
      std::cout << format_real(delta) << ',' << format_real(x) << ',' << format_real(N) << ','
                << format_real(u.log_value) << ',' << format_real(std::exp(u.log_value)) << ','
                << to_string(u.limit_class) << ',' << format_real(u.limit_log) << '\n';
    }
  }
  if (!have_circuit) return kOk;

  const CircuitParams params = p.params();
  std::cout << "\n# circuit limits\n"
            << "N,zeno_limit_charge,zeno_relative_deficit,anti_zeno_limit\n";
  for (double N : Ns) {
    if (N != std::floor(N) || N < 1) throw UsageError("--N values must be positive integers");
    const ZenoLimit z = zeno_limit(params, SwitchSchedule::from_ratio(p.T, static_cast<long long>(N), 0.0));
    std::cout << format_real(N) << ',' << format_real(z.limit_charge) << ','
              << format_real(z.relative_deficit) << ',' << format_real(anti_zeno_limit(params, p.T))
              << '\n';
  }
  return kOk;
}

int cmd_oracle_check(const Physics& p, double step, double tol, int samples) {
  const SwitchSchedule s = p.schedule();
  if (step <= 0.0) {
    const double shortest = std::min(s.T_C(), s.T_R()) > 0.0 ? std::min(s.T_C(), s.T_R())
                                                              : std::max(s.T_C(), s.T_R());
    step = shortest > 0.0 ? shortest / 100.0 : 1.0;
  }
  const Trajectory a = run_switched(p.params(), s, p.mode(), {samples, true});
  const Trajectory b = oracle_trajectory(p.params(), s, p.reset, {step, tol}, {samples, true});
  const ComparisonStats st = compare(a, b, tol);
  std::cout << "step: " << format_real(step) << "\n"
            << "samples: " << st.count << "\n"
            << "max_rel_q: " << format_real(st.max_rel_q) << "\n"
            << "mean_rel_q: " << format_real(st.mean_rel_q) << "\n"
            << "max_rel_i: " << format_real(st.max_rel_i) << "\n"
            << "mean_rel_i: " << format_real(st.mean_rel_i) << "\n"
            << "tolerance: " << format_real(tol) << "\n"
            << "result: " << (st.pass ? "pass" : "fail") << "\n";
  return st.pass ? kOk : kCheckFailed;
}

int cmd_convergence(const Physics& p, const std::vector<long long>& Ns, Format format,
                    const std::string& out) {
  const auto rows = convergence_study(p.params(), p.T, p.tr_ratio, Ns, p.mode());
  with_output(out, [&](std::ostream& os) { emit(rows, format, os); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switched LC/LR circuit simulator: Zeno and anti-Zeno discharge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lczeno 0.1.0");

  Physics phys;
  int samples = 1;
  Format format = Format::Csv;
  std::string out = "-";

  auto* simulate = app.add_subcommand("simulate", "run the switching protocol and write the trajectory");
  add_physics(simulate, phys);
  simulate->add_option("--samples", samples, "samples per segment")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--out", out, "output path, - for stdout")->capture_default_str();
  simulate->add_option("--format", format, "csv|json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_str("csv");

  std::string config_path;
  unsigned threads = 1;
  auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid from a config file");
  sweep->add_option("--config", config_path, "sweep configuration")->required();
  sweep->add_option("--out", out, "output path, - for stdout")->capture_default_str();
  sweep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* classify = app.add_subcommand("classify", "print the phase report and regime checks");
  add_physics(classify, phys);

  std::vector<double> deltas{0.5, 1.0, 2.0};
  double x = 1.0;
  std::vector<double> limit_Ns{1e2, 1e4, 1e6};
  auto* limits = app.add_subcommand("limits", "print limit values and the universality table");
  limits->add_option("--delta", deltas, "exponents delta")->delimiter(',')->check(CLI::PositiveNumber);
  limits->add_option("--x", x, "scaled horizon x")->check(CLI::PositiveNumber)->capture_default_str();
  limits->add_option("--N", limit_Ns, "cycle counts")->delimiter(',')->check(CLI::Range(1.0, 1e300));
  add_circuit(limits, phys, false);

  double step = 0.0;
  double tol = 1e-8;
  auto* oracle = app.add_subcommand("oracle-check", "compare the closed-form run with RK4");
  add_physics(oracle, phys);
  oracle->add_option("--step", step, "RK4 step (default min(T_C, T_R)/100)");
  oracle->add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  oracle->add_option("--samples", samples, "samples per segment")->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<long long> conv_Ns;
  auto* convergence = app.add_subcommand("convergence", "tabulate q(T) against N");
  add_physics(convergence, phys, false);
  convergence->add_option("--Ns", conv_Ns, "ascending cycle counts")->delimiter(',')->required();
  convergence->add_option("--out", out, "output path, - for stdout")->capture_default_str();
  convergence->add_option("--format", format, "csv|json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_str("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(phys, samples, format, out);
    if (*sweep) return cmd_sweep(config_path, out, threads);
    if (*classify) return cmd_classify(phys);
    if (*limits) {
      int given = 0;
      for (const char* name : {"--L", "--C", "--q0", "--i0", "--T"}) given += limits->count(name) > 0;
      if (given != 0 && given != 5) throw UsageError("circuit limits need all of --L --C --q0 --i0 --T");
      return cmd_limits(phys, given == 5, deltas, x, limit_Ns);
    }
    if (*oracle) return cmd_oracle_check(phys, step, tol, samples);
    if (*convergence) return cmd_convergence(phys, conv_Ns, format, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kConfigError;
}
