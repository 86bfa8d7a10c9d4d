#pragma once

// CSV and JSON serialization. Output is a pure function of the input: the
// same artifact always produces the same bytes.
//
// Trajectory CSV: t,q,i,regime,cycle,E_cap,E_ind,E_dissipated
// Sweep CSV:      L,C,q0,i0,T,N,tr_ratio,omega,tau_omega,tau_i,valid,phase,
//                 ratio,q_final_norm,bound_norm,dev_cosine,dev_envelope
// Convergence:    N,q_norm,deficit,bound_norm,envelope_dev
//
// Reals are printed with 17 significant digits ("%.17g"); NaN and infinities
// as nan, inf, -inf in CSV and null in JSON.

#include <iosfwd>
#include <string>
#include <vector>

#include "lczeno/sweep.hpp"
#include "lczeno/switch_engine.hpp"

namespace lczeno {

/// Throws std::runtime_error when the stream reports a write failure.
void emit(const Trajectory& traj, Format format, std::ostream& out);
void emit(const SweepResult& result, Format format, std::ostream& out);
void emit(const std::vector<ConvergenceRow>& rows, Format format, std::ostream& out);

std::string format_real(double v);

/// Reads the trajectory CSV schema back. Throws std::runtime_error on a
/// malformed header or row.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace lczeno
