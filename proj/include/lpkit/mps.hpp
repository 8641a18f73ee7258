#pragma once

#include <iosfwd>
#include <string>

#include "lpkit/lp.hpp"

namespace lpkit {

// MPS subset: NAME, ROWS (N/L/G/E), COLUMNS, RHS, RANGES,
// BOUNDS (LO/UP/FX/FR/MI/PL), ENDATA. Tokens are whitespace-separated, so
// both fixed and free layouts of these sections parse. The first N row is
// the objective; an RHS entry on it becomes the negated objective offset.
// Throws std::runtime_error with a line number on malformed input.
LPProblem read_mps(std::istream& in);
LPProblem read_mps_file(const std::string& path);

// Free-format writer. Values are printed with round-trip precision, so
// write-then-read reproduces the problem exactly.
void write_mps(const LPProblem& lp, std::ostream& out, const std::string& name = "LP");
void write_mps_file(const LPProblem& lp, const std::string& path, const std::string& name = "LP");

}  // namespace lpkit
