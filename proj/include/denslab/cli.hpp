#pragma once

#include "denslab/intervals.hpp"
#include "denslab/seqcore.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace denslab::cli {

// "arith:step,offset" | "poly:c0,c1,..." | "primes:N" |
// "blocks:lo,hi;lo,hi;..." | "list:t1,t2,...[;tail-arith:step]"
seqcore::SequenceSpec parse_sequence_arg(const std::string& s);

// "geo:rho" | "pow:c,p" (symbolic family with empty prefix)
intervals::IntervalFamily parse_family_arg(const std::string& s);

// {"prefix": [["a","b"], ...], "tail": {"kind": "geo"|"pow"|"finite", ...}}
intervals::IntervalFamily parse_family_json_text(const std::string& text);

// Decimal digits used for rendered values in reports; the
// DENSITY_LAB_PRECISION environment variable overrides the default of 50.
unsigned render_digits();

// Full command dispatch. Reports go to --out or `out`; diagnostics to `err`.
// Exit codes: 0 success, 1 suite failure, 2 validation error, 3 I/O error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace denslab::cli
