#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lczeno/core_model.hpp"
#include "lczeno/emit.hpp"
#include "lczeno/oracle.hpp"
#include "lczeno/phase_analysis.hpp"
#include "lczeno/sweep.hpp"
#include "lczeno/switch_engine.hpp"

namespace py = pybind11;
using namespace lczeno;

namespace {

template <class F>
py::array_t<double> column(const Trajectory& tr, F&& get) {
  std::vector<double> v;
  v.reserve(tr.samples.size());
  for (const Sample& s : tr.samples) v.push_back(get(s));
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict trajectory_arrays(const Trajectory& tr) {
  py::dict d;
  d["t"] = column(tr, [](const Sample& s) { return s.t; });
  d["q"] = column(tr, [](const Sample& s) { return s.q; });
  d["i"] = column(tr, [](const Sample& s) { return s.i; });
  d["on"] = column(tr, [](const Sample& s) { return s.regime == Regime::On ? 1.0 : 0.0; });
  d["cycle"] = column(tr, [](const Sample& s) { return static_cast<double>(s.cycle); });
  d["E_cap"] = column(tr, [](const Sample& s) { return s.E_cap; });
  d["E_ind"] = column(tr, [](const Sample& s) { return s.E_ind; });
  d["E_dissipated"] = column(tr, [](const Sample& s) { return s.E_dissipated; });
  return d;
}

template <class T>
std::string emit_to_string(const T& artifact, Format format) {
  std::ostringstream out;
  emit(artifact, format, out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_lczeno, m) {
  m.doc() = "Switched LC/LR circuit simulator";

  py::register_exception<ResetUnreachable>(m, "ResetUnreachable", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BoundInapplicable>(m, "BoundInapplicable", PyExc_ValueError);

  py::enum_<Evolution>(m, "Evolution").value("Exact", Evolution::Exact).value("Quadratic", Evolution::Quadratic);
  py::enum_<ResetMode>(m, "ResetMode")
      .value("FixedR", ResetMode::FixedR)
      .value("PerCycleExact", ResetMode::PerCycleExact)
      .value("Proportional", ResetMode::Proportional);
  py::enum_<Regime>(m, "Regime").value("On", Regime::On).value("Off", Regime::Off);
  py::enum_<Phase>(m, "Phase")
      .value("Zeno", Phase::Zeno)
      .value("AntiZeno", Phase::AntiZeno)
      .value("Intermediate", Phase::Intermediate);
  py::enum_<UniversalityClass>(m, "UniversalityClass")
      .value("Unity", UniversalityClass::Unity)
      .value("Exponential", UniversalityClass::Exponential)
      .value("Divergent", UniversalityClass::Divergent);
  py::enum_<Format>(m, "Format").value("Csv", Format::Csv).value("Json", Format::Json);

  py::class_<CircuitParams>(m, "CircuitParams")
      .def(py::init<double, double, double, double>(), py::arg("L"), py::arg("C"), py::arg("q0"),
           py::arg("i0"))
      .def_property_readonly("L", &CircuitParams::L)
      .def_property_readonly("C", &CircuitParams::C)
      .def_property_readonly("q0", &CircuitParams::q0)
      .def_property_readonly("i0", &CircuitParams::i0);

  py::class_<SwitchSchedule>(m, "SwitchSchedule")
      .def_static("from_ratio", &SwitchSchedule::from_ratio, py::arg("T"), py::arg("N"), py::arg("ratio"))
      .def_static("from_durations", &SwitchSchedule::from_durations, py::arg("N"), py::arg("T_C"),
                  py::arg("T_R"))
      .def_property_readonly("T", &SwitchSchedule::T)
      .def_property_readonly("N", &SwitchSchedule::N)
      .def_property_readonly("T_C", &SwitchSchedule::T_C)
      .def_property_readonly("T_R", &SwitchSchedule::T_R)
      .def_property_readonly("period", &SwitchSchedule::period);

  py::class_<DerivedScales>(m, "DerivedScales")
      .def_readonly("omega", &DerivedScales::omega)
      .def_readonly("tau_omega", &DerivedScales::tau_omega)
      .def_readonly("tau_i", &DerivedScales::tau_i);

  py::class_<ValidityCheck>(m, "ValidityCheck")
      .def_readonly("name", &ValidityCheck::name)
      .def_readonly("satisfied", &ValidityCheck::satisfied)
      .def_readonly("lhs", &ValidityCheck::lhs)
      .def_readonly("rhs", &ValidityCheck::rhs);
  py::class_<ValidityReport>(m, "ValidityReport")
      .def_readonly("ok", &ValidityReport::ok)
      .def_readonly("checks", &ValidityReport::checks);

  py::class_<CircuitState>(m, "CircuitState")
      .def(py::init<double, double, double>(), py::arg("t"), py::arg("q"), py::arg("i"))
      .def_readwrite("t", &CircuitState::t)
      .def_readwrite("q", &CircuitState::q)
      .def_readwrite("i", &CircuitState::i);

  py::class_<EngineMode>(m, "EngineMode")
      .def(py::init<Evolution, ResetMode>(), py::arg("evolution") = Evolution::Exact,
           py::arg("reset") = ResetMode::PerCycleExact)
      .def_readwrite("evolution", &EngineMode::evolution)
      .def_readwrite("reset", &EngineMode::reset);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("arrays", &trajectory_arrays)
      .def_readonly("cycle_ends", &Trajectory::cycle_ends)
      .def_readonly("switch_currents", &Trajectory::switch_currents)
      .def_readonly("regime_valid", &Trajectory::regime_valid)
      .def("__len__", [](const Trajectory& t) { return t.samples.size(); })
      .def("to_csv", [](const Trajectory& t) { return emit_to_string(t, Format::Csv); })
      .def("to_json", [](const Trajectory& t) { return emit_to_string(t, Format::Json); });

  py::class_<PhaseReport>(m, "PhaseReport")
      .def_readonly("phase", &PhaseReport::phase)
      .def_readonly("ratio", &PhaseReport::ratio)
      .def_readonly("margin", &PhaseReport::margin)
      .def_readonly("degenerate", &PhaseReport::degenerate);

  py::class_<GenericZenoCriteria>(m, "GenericZenoCriteria")
      .def(py::init<double, double, double, double, double, long long>(), py::arg("R0"), py::arg("a"),
           py::arg("b"), py::arg("a_prime"), py::arg("T"), py::arg("N"));

  py::class_<ZenoLimit>(m, "ZenoLimit")
      .def_readonly("limit_charge", &ZenoLimit::limit_charge)
      .def_readonly("relative_deficit", &ZenoLimit::relative_deficit);

  py::class_<UniversalityValue>(m, "UniversalityValue")
      .def_readonly("log_value", &UniversalityValue::log_value)
      .def_readonly("limit_class", &UniversalityValue::limit_class)
      .def_readonly("limit_log", &UniversalityValue::limit_log);

  py::class_<DeviationMetrics>(m, "DeviationMetrics")
      .def_readonly("peak_dev_cosine", &DeviationMetrics::peak_dev_cosine)
      .def_readonly("end_dev_cosine", &DeviationMetrics::end_dev_cosine)
      .def_readonly("peak_dev_envelope", &DeviationMetrics::peak_dev_envelope)
      .def_readonly("end_dev_envelope", &DeviationMetrics::end_dev_envelope)
      .def_readonly("cycle_decrements", &DeviationMetrics::cycle_decrements)
      .def_readonly("segment_curvature", &DeviationMetrics::segment_curvature);

  py::class_<ComparisonStats>(m, "ComparisonStats")
      .def_readonly("count", &ComparisonStats::count)
      .def_readonly("max_rel_q", &ComparisonStats::max_rel_q)
      .def_readonly("mean_rel_q", &ComparisonStats::mean_rel_q)
      .def_readonly("max_rel_i", &ComparisonStats::max_rel_i)
      .def_readonly("mean_rel_i", &ComparisonStats::mean_rel_i)
      .def_readonly("passed", &ComparisonStats::pass);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def_property_readonly("point_count", &SweepConfig::point_count)
      .def_readonly("margin", &SweepConfig::margin)
      .def_readonly("format", &SweepConfig::format);

  py::class_<SweepResult>(m, "SweepResult")
      .def("__len__", [](const SweepResult& r) { return r.points.size(); })
      .def("to_csv", [](const SweepResult& r) { return emit_to_string(r, Format::Csv); })
      .def("to_json", [](const SweepResult& r) { return emit_to_string(r, Format::Json); });

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("N", &ConvergenceRow::N)
      .def_readonly("q_norm", &ConvergenceRow::q_norm)
      .def_readonly("deficit", &ConvergenceRow::deficit)
      .def_readonly("bound_norm", &ConvergenceRow::bound_norm)
      .def_readonly("envelope_dev", &ConvergenceRow::envelope_dev);

  m.def("derive_scales", &derive_scales, py::arg("params"));
  m.def("validate_regime", &validate_regime, py::arg("params"), py::arg("schedule"),
        py::arg("margin") = kDefaultMargin);
  m.def("lc_segment_exact", &lc_segment_exact, py::arg("state"), py::arg("omega"), py::arg("dt"));
  m.def("lc_segment_quadratic", &lc_segment_quadratic, py::arg("state"), py::arg("omega"), py::arg("dt"));
  m.def(
      "run_switched",
      [](const CircuitParams& p, const SwitchSchedule& s, EngineMode mode, int samples) {
        py::gil_scoped_release release;
        return run_switched(p, s, mode, {samples, true});
      },
      py::arg("params"), py::arg("schedule"), py::arg("mode") = EngineMode{}, py::arg("samples") = 1);
  m.def(
      "run_unswitched",
      [](const CircuitParams& p, double T_end, int samples) { return run_unswitched(p, T_end, {samples, true}); },
      py::arg("params"), py::arg("T_end"), py::arg("samples") = 1);
  m.def("charge_bound", &charge_bound, py::arg("params"), py::arg("schedule"));
  m.def("classify_phase", &classify_phase, py::arg("params"), py::arg("schedule"),
        py::arg("margin") = kDefaultMargin);
  m.def("classify_generic", &classify_generic, py::arg("criteria"), py::arg("margin") = kDefaultMargin);
  m.def("lc_lr_criteria", &lc_lr_criteria, py::arg("params"), py::arg("schedule"));
  m.def("zeno_limit", &zeno_limit, py::arg("params"), py::arg("schedule"));
  m.def("anti_zeno_limit", &anti_zeno_limit, py::arg("params"), py::arg("t"));
  m.def(
      "universality_log_value",
      [](double x, double delta, double N) { return universality_log_value({x, delta, N}); },
      py::arg("x"), py::arg("delta"), py::arg("N"));
  m.def("deviation_metrics", &deviation_metrics, py::arg("trajectory"), py::arg("params"),
        py::arg("schedule"));
  m.def(
      "oracle_trajectory",
      [](const CircuitParams& p, const SwitchSchedule& s, ResetMode reset, double step, int samples) {
        py::gil_scoped_release release;
        return oracle_trajectory(p, s, reset, {step}, {samples, true});
      },
      py::arg("params"), py::arg("schedule"), py::arg("reset"), py::arg("step"), py::arg("samples") = 1);
  m.def("compare", &compare, py::arg("a"), py::arg("b"), py::arg("tolerance"));
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def(
      "run_sweep",
      [](const SweepConfig& c, unsigned threads) {
        py::gil_scoped_release release;
        return run_sweep(c, threads);
      },
      py::arg("config"), py::arg("threads") = 1);
  m.def("convergence_study", &convergence_study, py::arg("params"), py::arg("T"), py::arg("tr_ratio"),
        py::arg("Ns"), py::arg("mode") = EngineMode{});
  m.def(
      "convergence_csv",
      [](const std::vector<ConvergenceRow>& rows) { return emit_to_string(rows, Format::Csv); },
      py::arg("rows"));
}
