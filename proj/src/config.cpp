#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "lczeno/sweep.hpp"

namespace lczeno {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double parse_number(std::string_view text, const std::string& path) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    fail(path, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text, const std::string& path) {
  const double v = parse_number(text, path);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(path, "expected an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(std::string_view text, const std::string& path) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(trim(text.substr(0, comma)), path));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

// key -> value for one section.
using Section = std::map<std::string, std::string, std::less<>>;

struct Document {
  // Section names in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, Section, std::less<>> sections;
};

Document tokenize(std::string_view text) {
  Document doc;
  Section* current = nullptr;
  std::string current_name;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.rfind("axis ", 0) == 0) name = "axis." + std::string(trim(name.substr(5)));
      if (name.empty()) fail(where, "empty section name");
      if (doc.sections.find(name) != doc.sections.end()) fail(name, "section repeated");
      doc.order.push_back(name);
      current = &doc.sections[name];
      current_name = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(where, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (current == nullptr) fail(key, "key outside of any section");
    if (key.empty()) fail(current_name, "empty key on " + where);
    if (!current->emplace(key, value).second) fail(current_name + "." + key, "duplicate key");
  }
  return doc;
}

void reject_unknown(const Section& s, const std::string& section,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : s) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(section + "." + key, "unknown key");
    }
  }
}

double integral_N(double v, const std::string& path) {
  if (v != std::floor(v)) fail(path, "N must be an integer");
  return v;
}

Axis parse_axis(Param p, const Section& s, const std::string& section) {
  reject_unknown(s, section, {"spacing", "min", "max", "count", "values"});
  Axis axis{p, {}};
  if (const auto it = s.find("values"); it != s.end()) {
    for (const char* k : {"spacing", "min", "max", "count"}) {
      if (s.count(k)) fail(section + "." + k, "cannot be combined with 'values'");
    }
    axis.values = parse_list(it->second, section + ".values");
  } else {
    for (const char* k : {"spacing", "min", "max", "count"}) {
      if (!s.count(k)) fail(section + "." + k, "missing required key");
    }
    const double lo = parse_number(s.at("min"), section + ".min");
    const double hi = parse_number(s.at("max"), section + ".max");
    const int count = parse_int(s.at("count"), section + ".count");
    if (count < 1) fail(section + ".count", "must be >= 1");
    const std::string& spacing = s.at("spacing");
    try {
      if (spacing == "linear") {
        axis.values = linear_grid(lo, hi, count);
      } else if (spacing == "log") {
        axis.values = log_grid(lo, hi, count);
      } else {
        fail(section + ".spacing", "expected 'linear' or 'log', got '" + spacing + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail(section, e.what());
    }
    if (p == Param::N) {
      for (double& v : axis.values) v = std::round(v);
    }
  }
  if (p == Param::N) {
    for (double v : axis.values) integral_N(v, section + ".values");
  }
  return axis;
}

}  // namespace

const char* to_string(Param p) {
  switch (p) {
    case Param::L:
      return "L";
    case Param::C:
      return "C";
    case Param::q0:
      return "q0";
    case Param::i0:
      return "i0";
    case Param::T:
      return "T";
    case Param::N:
      return "N";
    case Param::tr_ratio:
      return "tr_ratio";
  }
  return "?";
}

std::optional<Param> param_from_string(std::string_view name) {
  for (Param p : kAllParams) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

std::size_t SweepConfig::point_count() const {
  std::size_t n = 1;
  for (const Axis& a : axes) n *= a.values.size();
  return n;
}

std::vector<double> linear_grid(double min, double max, int count) {
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (!std::isfinite(min) || !std::isfinite(max)) throw std::invalid_argument("grid bounds must be finite");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      v.push_back(min);
    } else if (k == count - 1) {
      v.push_back(max);
    } else {
      v.push_back(min + (max - min) * k / (count - 1));
    }
  }
  return v;
}

std::vector<double> log_grid(double min, double max, int count) {
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (!(min != 0.0 && max != 0.0 && std::signbit(min) == std::signbit(max)) ||
      !std::isfinite(min) || !std::isfinite(max)) {
    throw std::invalid_argument("log grid needs finite nonzero bounds of equal sign");
  }
  const double sign = min < 0.0 ? -1.0 : 1.0;
  const double a = std::log(std::abs(min));
  const double b = std::log(std::abs(max));
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      v.push_back(min);
    } else if (k == count - 1) {
      v.push_back(max);
    } else {
      v.push_back(sign * std::exp(a + (b - a) * k / (count - 1)));
    }
  }
  return v;
}

SweepConfig parse_config(std::string_view text) {
  const Document doc = tokenize(text);
  SweepConfig cfg;
  std::array<std::string, kParamCount> defined_at{};

  auto define = [&](Param p, const std::string& path) {
    auto& slot = defined_at[static_cast<std::size_t>(p)];
    if (!slot.empty()) {
      fail(path, std::string("duplicate parameter '") + to_string(p) + "', already set at " + slot);
    }
    slot = path;
  };

  for (const std::string& name : doc.order) {
    const Section& s = doc.sections.at(name);
    if (name == "fixed") {
      for (const auto& [key, value] : s) {
        const std::string path = "fixed." + key;
        const auto p = param_from_string(key);
        if (!p) fail(path, "unknown parameter");
        define(*p, path);
        double v = parse_number(value, path);
        if (*p == Param::N) v = integral_N(v, path);
        cfg.fixed[static_cast<std::size_t>(*p)] = v;
      }
    } else if (name.rfind("axis.", 0) == 0) {
      const auto p = param_from_string(name.substr(5));
      if (!p) fail(name, "unknown parameter '" + name.substr(5) + "'");
      define(*p, name);
      cfg.axes.push_back(parse_axis(*p, s, name));
    } else if (name == "mode") {
      reject_unknown(s, name, {"evolution", "reset"});
      if (const auto it = s.find("evolution"); it != s.end()) {
        if (it->second == "exact") {
          cfg.mode.evolution = Evolution::Exact;
        } else if (it->second == "quadratic") {
          cfg.mode.evolution = Evolution::Quadratic;
        } else {
          fail("mode.evolution", "expected 'exact' or 'quadratic'");
        }
      }
      if (const auto it = s.find("reset"); it != s.end()) {
        if (it->second == "fixed") {
          cfg.mode.reset = ResetMode::FixedR;
        } else if (it->second == "percycle") {
          cfg.mode.reset = ResetMode::PerCycleExact;
        } else if (it->second == "proportional") {
          cfg.mode.reset = ResetMode::Proportional;
        } else {
          fail("mode.reset", "expected 'fixed', 'percycle' or 'proportional'");
        }
      }
    } else if (name == "analysis") {
      reject_unknown(s, name, {"margin", "samples"});
      if (const auto it = s.find("margin"); it != s.end()) {
        cfg.margin = parse_number(it->second, "analysis.margin");
        if (!(cfg.margin > 0.0 && cfg.margin < 1.0)) fail("analysis.margin", "must lie in (0, 1)");
      }
      if (const auto it = s.find("samples"); it != s.end()) {
        cfg.samples = parse_int(it->second, "analysis.samples");
        if (cfg.samples < 1) fail("analysis.samples", "must be >= 1");
      }
    } else if (name == "outputs") {
      reject_unknown(s, name, {"format"});
      if (const auto it = s.find("format"); it != s.end()) {
        if (it->second == "csv") {
          cfg.format = Format::Csv;
        } else if (it->second == "json") {
          cfg.format = Format::Json;
        } else {
          fail("outputs.format", "expected 'csv' or 'json'");
        }
      }
    } else {
      fail(name, "unknown section");
    }
  }

  const auto ratio_slot = static_cast<std::size_t>(Param::tr_ratio);
  if (defined_at[ratio_slot].empty()) {
    cfg.fixed[ratio_slot] = 0.01;
    defined_at[ratio_slot] = "default";
  }
  for (Param p : kAllParams) {
    if (defined_at[static_cast<std::size_t>(p)].empty()) {
      fail(std::string("fixed.") + to_string(p), "missing required parameter");
    }
  }
  return cfg;
}

}  // namespace lczeno
