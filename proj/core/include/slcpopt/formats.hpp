#pragma once

#include <string>

#include "slcpopt/conic.hpp"

namespace slcpopt {

// Conic Benchmark Format v3. Scalar rows grouped by cone, PSD blocks as
// PSDVAR matrix variables coupled through L= rows, exponential triples as
// EXP groups.
std::string export_cbf(const ConicProgram& prog);

// Parses the section subset export_cbf emits (free vars, L=/L+/L-/EXP
// rows, PSDVAR/HCOORD) plus PSDCON with FCOORD/DCOORD. Throws
// std::runtime_error on malformed or unsupported input.
ConicProgram parse_cbf(const std::string& text);

// SDPA sparse (.dat-s): pure SDP only. Nonnegative scalar rows go to a
// negative (diagonal) block; equality rows are written as opposing
// inequality pairs. Throws UnsupportedConeError on exponential cones.
std::string export_sdpa(const ConicProgram& prog);

std::string format_double(double v);

}  // namespace slcpopt
