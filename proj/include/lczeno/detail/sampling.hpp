#pragma once

// Sample-grid helpers shared by the closed-form engine and the RK4 oracle so
// that both produce identical time grids.

#include <stdexcept>
#include <vector>

#include "lczeno/switch_engine.hpp"

namespace lczeno::detail {

inline std::vector<double> segment_fractions(SamplingPolicy sampling) {
  if (sampling.per_segment_points < 1) {
    throw std::invalid_argument("SamplingPolicy: per_segment_points must be >= 1");
  }
  const int k = sampling.per_segment_points;
  std::vector<double> f;
  f.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    f.push_back(sampling.include_endpoints ? static_cast<double>(j) / k
                                           : static_cast<double>(j) / (k + 1));
  }
  return f;
}

// Samples sharing an instant collapse to the later state, which keeps t
// strictly increasing when a segment has zero length.
inline void push_sample(std::vector<Sample>& out, const Sample& s) {
  if (!out.empty() && s.t <= out.back().t) {
    out.back() = s;
  } else {
    out.push_back(s);
  }
}

inline Sample make_sample(const CircuitState& s, Regime regime, long long cycle,
                          double dissipated, const CircuitParams& params) {
  const StoredEnergy e = energies(s, params);
  return {s.t, s.q, s.i, regime, cycle, e.E_cap, e.E_ind, dissipated};
}

}  // namespace lczeno::detail
