#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace denslab {

// All arithmetic that feeds a comparison or a ceiling is exact. Floating
// point appears only in rendering and in the placement of sample grids.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// floor/ceil of a rational as big integers.
Int floor_rat(const Rat& r);
Int ceil_rat(const Rat& r);

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

// base^e for integer e (negative allowed; base must be nonzero then).
Rat rpow(const Rat& base, long e);

// floor(x^(1/n)) for x >= 0, n >= 1.
Int iroot_floor(const Int& x, unsigned n);

// Accepts "p/q", integer, decimal ("0.25") and scientific ("1e9", "2.5e-3")
// literals; every form is parsed exactly.
Rat parse_rat(const std::string& s);

// Exact-to-string: "p/q", or just "p" when integral.
std::string rat_to_string(const Rat& r);

// Decimal rendering with `digits` fractional digits, round half away from
// zero, trailing zeros stripped.
std::string rat_to_decimal(const Rat& r, std::size_t digits);

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace denslab
