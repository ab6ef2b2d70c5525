#pragma once

#include <iosfwd>
#include <string>

#include "specseq/abelian.hpp"

namespace specseq::cli {

/// Runs one command line. Exit status: 0 on success, 2 when the library
/// rejects the input (an {"error": ...} object goes to err), 1 on I/O,
/// JSON or command-line parse failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "Z", "Q", or "Z[1/2,1/3]". Throws Error(InvalidInput).
LocalizationRing parse_ring(const std::string& text);
/// "Z", "Q", "Z/m", or "Z[1/2]" as a rank-one or cyclic module.
FGModule parse_coefficient(const std::string& text);

}  // namespace specseq::cli
