#pragma once

#include "denslab/rational.hpp"

namespace denslab {

// Certified rational enclosures of the few transcendental values the
// library needs: e^{-s}, ln z and k-th roots. Every bound is one-sided
// exact; a decision made against .lo or .hi is sound regardless of the
// enclosure width.
struct RatInterval {
  Rat lo, hi;
  Rat width() const { return hi - lo; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

// e^{-s} for s >= 0, width <= tol.
RatInterval exp_neg_enclosure(const Rat& s, const Rat& tol);

// phi(t) = 1 - e^{-t}.
RatInterval one_minus(const RatInterval& i);

// ln z for z > 1, width <= tol.
RatInterval ln_enclosure(const Rat& z, const Rat& tol);

// log(xi)/log(eta) for 0 < xi < 1, 0 < eta < 1 (a positive quantity),
// width <= tol.
RatInterval log_ratio_enclosure(const Rat& xi, const Rat& eta, const Rat& tol);

// Directed k-th roots of w >= 0 at granularity 10^-digits:
//   lower^k <= w  and  upper^k >= w,  upper - lower <= 10^-digits.
Rat nth_root_lower(const Rat& w, unsigned k, unsigned digits);
Rat nth_root_upper(const Rat& w, unsigned k, unsigned digits);

}  // namespace denslab
