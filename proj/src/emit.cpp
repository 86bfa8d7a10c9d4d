#include "lczeno/emit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lczeno {

namespace {

using nlohmann::ordered_json;

constexpr const char* kTrajectoryHeader = "t,q,i,regime,cycle,E_cap,E_ind,E_dissipated";
constexpr const char* kSweepTail =
    "omega,tau_omega,tau_i,valid,phase,ratio,q_final_norm,bound_norm,dev_cosine,dev_envelope";
constexpr const char* kConvergenceHeader = "N,q_norm,deficit,bound_norm,envelope_dev";

// JSON has no NaN or infinity.
ordered_json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void finish(std::ostream& out) {
  out.flush();
  if (!out) throw std::runtime_error("emit: write to destination failed");
}

void write_json(const ordered_json& doc, std::ostream& out) {
  out << doc.dump(1, ' ') << '\n';
  finish(out);
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const Trajectory& traj, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    out << kTrajectoryHeader << '\n';
    for (const Sample& s : traj.samples) {
      out << format_real(s.t) << ',' << format_real(s.q) << ',' << format_real(s.i) << ','
          << to_string(s.regime) << ',' << s.cycle << ',' << format_real(s.E_cap) << ','
          << format_real(s.E_ind) << ',' << format_real(s.E_dissipated) << '\n';
    }
    finish(out);
    return;
  }
  ordered_json doc;
  doc["format"] = "lczeno-trajectory";
  doc["version"] = 1;
  doc["regime_valid"] = traj.regime_valid;
  ordered_json samples = ordered_json::array();
  for (const Sample& s : traj.samples) {
    samples.push_back({{"t", real(s.t)},
                       {"q", real(s.q)},
                       {"i", real(s.i)},
                       {"regime", to_string(s.regime)},
                       {"cycle", s.cycle},
                       {"E_cap", real(s.E_cap)},
                       {"E_ind", real(s.E_ind)},
                       {"E_dissipated", real(s.E_dissipated)}});
  }
  doc["samples"] = std::move(samples);
  write_json(doc, out);
}

void emit(const SweepResult& result, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    for (Param p : kAllParams) out << to_string(p) << ',';
    out << kSweepTail << '\n';
    for (const SweepPoint& pt : result.points) {
      for (double v : pt.values) out << format_real(v) << ',';
      out << format_real(pt.scales.omega) << ',' << format_real(pt.scales.tau_omega) << ','
          << format_real(pt.scales.tau_i) << ',' << (pt.valid ? "true" : "false") << ','
          << (pt.phase ? to_string(pt.phase->phase) : "") << ','
          << format_real(pt.phase ? pt.phase->ratio : NAN) << ',' << format_real(pt.q_final_norm)
          << ',' << format_real(pt.bound_norm) << ',' << format_real(pt.dev_cosine) << ','
          << format_real(pt.dev_envelope) << '\n';
    }
    finish(out);
    return;
  }
  ordered_json doc;
  doc["format"] = "lczeno-sweep";
  doc["version"] = 1;
  doc["mode"] = {{"evolution", to_string(result.mode.evolution)},
                 {"reset", to_string(result.mode.reset)}};
  doc["margin"] = result.margin;
  ordered_json points = ordered_json::array();
  for (const SweepPoint& pt : result.points) {
    ordered_json rec;
    for (Param p : kAllParams) rec[to_string(p)] = real(pt.values[static_cast<std::size_t>(p)]);
    rec["omega"] = real(pt.scales.omega);
    rec["tau_omega"] = real(pt.scales.tau_omega);
    rec["tau_i"] = real(pt.scales.tau_i);
    rec["valid"] = pt.valid;
    rec["phase"] = pt.phase ? ordered_json(to_string(pt.phase->phase)) : ordered_json(nullptr);
    rec["ratio"] = pt.phase ? real(pt.phase->ratio) : ordered_json(nullptr);
    rec["q_final_norm"] = real(pt.q_final_norm);
    rec["bound_norm"] = real(pt.bound_norm);
    rec["dev_cosine"] = real(pt.dev_cosine);
    rec["dev_envelope"] = real(pt.dev_envelope);
    rec["error"] = pt.error;
    points.push_back(std::move(rec));
  }
  doc["points"] = std::move(points);
  write_json(doc, out);
}

void emit(const std::vector<ConvergenceRow>& rows, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    out << kConvergenceHeader << '\n';
    for (const ConvergenceRow& r : rows) {
      out << r.N << ',' << format_real(r.q_norm) << ',' << format_real(r.deficit) << ','
          << format_real(r.bound_norm) << ',' << format_real(r.envelope_dev) << '\n';
    }
    finish(out);
    return;
  }
  ordered_json doc;
  doc["format"] = "lczeno-convergence";
  doc["version"] = 1;
  ordered_json arr = ordered_json::array();
  for (const ConvergenceRow& r : rows) {
    arr.push_back({{"N", r.N},
                   {"q_norm", real(r.q_norm)},
                   {"deficit", real(r.deficit)},
                   {"bound_norm", real(r.bound_norm)},
                   {"envelope_dev", real(r.envelope_dev)}});
  }
  doc["rows"] = std::move(arr);
  write_json(doc, out);
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::runtime_error("trajectory csv: bad header");
  }
  Trajectory traj;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) {
      throw std::runtime_error("trajectory csv: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " fields");
    }
    auto num = [&](const std::string& c) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || p != c.data() + c.size()) {
        throw std::runtime_error("trajectory csv: row " + std::to_string(row) + ": bad number '" +
                                 c + "'");
      }
      return v;
    };
    Regime regime;
    if (cells[3] == "ON") {
      regime = Regime::On;
    } else if (cells[3] == "OFF") {
      regime = Regime::Off;
    } else {
      throw std::runtime_error("trajectory csv: row " + std::to_string(row) + ": bad regime");
    }
    traj.samples.push_back({num(cells[0]), num(cells[1]), num(cells[2]), regime,
                            static_cast<long long>(num(cells[4])), num(cells[5]), num(cells[6]),
                            num(cells[7])});
  }
  return traj;
}

}  // namespace lczeno
