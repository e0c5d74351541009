#include "denslab/enclosure.hpp"

#include "denslab/errors.hpp"

namespace denslab {

namespace {

// Rationals grow while a series is summed; rounding the running interval
// outward onto a coarse grid caps the operand size without giving up
// soundness. 10^-40 is far below every tolerance used in the library.
const Int kGrid = pow(Int(10), 40);

Rat round_down(const Rat& v) { return Rat(floor_rat(v * kGrid), kGrid); }
Rat round_up(const Rat& v) { return Rat(ceil_rat(v * kGrid), kGrid); }

RatInterval round_out(const RatInterval& i) { return {round_down(i.lo), round_up(i.hi)}; }

// e^{-u} for 0 <= u <= 1/2 by the alternating Taylor series; the error of a
// partial sum is bounded by the first omitted term.
RatInterval exp_neg_small(const Rat& u, const Rat& tol) {
  Rat sum(1), term(1);
  unsigned k = 1;
  for (;;) {
    term *= u;
    term /= k;
    Rat mag = term;
    if (k % 2 == 1) {
      sum -= term;
      if (mag <= tol) return round_out({sum, sum + mag});
    } else {
      sum += term;
      if (mag <= tol) return round_out({sum - mag, sum});
    }
    ++k;
    if (k > 200) fail(Errc::validation, "exp series failed to converge");
  }
}

// atanh(u) = sum u^(2k+1)/(2k+1) for 0 <= u < 1; remainder after the K-th
// term is below u^(2K+3)/((2K+3)(1-u^2)).
RatInterval atanh_enclosure(const Rat& u, const Rat& tol) {
  Rat sum = 0, p = u;
  Rat u2 = u * u;
  unsigned k = 0;
  for (;;) {
    sum += p / (2 * k + 1);
    Rat rem = p * u2 / ((2 * k + 3) * (1 - u2));
    if (rem <= tol) return round_out({sum, sum + rem});
    p *= u2;
    ++k;
    if (k > 4000) fail(Errc::validation, "atanh series failed to converge");
  }
}

RatInterval ln2_enclosure(const Rat& tol) {
  // ln 2 = 2 atanh(1/3)
  RatInterval a = atanh_enclosure(Rat(1, 3), tol / 2);
  return {2 * a.lo, 2 * a.hi};
}

}  // namespace

RatInterval exp_neg_enclosure(const Rat& s, const Rat& tol) {
  if (s < 0) fail(Errc::validation, "exp_neg_enclosure needs s >= 0");
  if (tol <= 0) fail(Errc::validation, "tolerance must be positive");
  if (s == 0) return {Rat(1), Rat(1)};
  // Halve the argument until it is <= 1/2, then square back up. Squaring at
  // most doubles the width of an interval inside (0, 1].
  unsigned m = 0;
  Rat u = s;
  while (u > Rat(1, 2)) {
    u /= 2;
    ++m;
    if (m > 64) fail(Errc::validation, "exp argument out of range");
  }
  Rat inner_tol = tol / rpow(Rat(2), m + 2);
  RatInterval e = exp_neg_small(u, inner_tol);
  for (unsigned i = 0; i < m; ++i) {
    e.lo = e.lo < 0 ? Rat(0) : e.lo;
    e = round_out({e.lo * e.lo, e.hi * e.hi});
  }
  if (e.lo < 0) e.lo = 0;
  return e;
}

RatInterval one_minus(const RatInterval& i) { return {1 - i.hi, 1 - i.lo}; }

RatInterval ln_enclosure(const Rat& z, const Rat& tol) {
  if (z <= 1) fail(Errc::validation, "ln_enclosure needs z > 1");
  if (tol <= 0) fail(Errc::validation, "tolerance must be positive");
  long m = 0;
  Rat zt = z;
  while (zt >= 2) {
    zt /= 2;
    ++m;
    if (m > 1000000) fail(Errc::validation, "ln argument out of range");
  }
  Rat inner = tol / (2 * (m + 1));
  RatInterval series{Rat(0), Rat(0)};
  if (zt > 1) {
    RatInterval a = atanh_enclosure((zt - 1) / (zt + 1), inner / 2);
    series = {2 * a.lo, 2 * a.hi};
  }
  if (m == 0) return series;
  RatInterval l2 = ln2_enclosure(inner);
  return round_out({m * l2.lo + series.lo, m * l2.hi + series.hi});
}

RatInterval log_ratio_enclosure(const Rat& xi, const Rat& eta, const Rat& tol) {
  if (!(xi > 0 && xi < 1 && eta > 0 && eta < 1))
    fail(Errc::validation, "log_ratio_enclosure needs xi, eta in (0,1)");
  // log xi / log eta = ln(1/xi) / ln(1/eta), both factors positive.
  Rat t = tol / 4;
  for (int pass = 0; pass < 40; ++pass) {
    RatInterval num = ln_enclosure(1 / xi, t);
    RatInterval den = ln_enclosure(1 / eta, t);
    RatInterval out{num.lo / den.hi, num.hi / den.lo};
    if (out.width() <= tol) return out;
    t /= 16;
  }
  fail(Errc::validation, "log ratio enclosure failed to converge");
}

Rat nth_root_lower(const Rat& w, unsigned k, unsigned digits) {
  if (w < 0) fail(Errc::validation, "root of negative value");
  Int scale = pow(Int(10), digits);
  // floor(w * scale^k) then an integer k-th root: monotone, hence a valid
  // lower bound of w^(1/k) * scale.
  Rat scaled = w * rpow(Rat(scale), static_cast<long>(k));
  Int t = iroot_floor(floor_rat(scaled), k);
  return Rat(t, scale);
}

Rat nth_root_upper(const Rat& w, unsigned k, unsigned digits) {
  Rat lo = nth_root_lower(w, k, digits);
  if (rpow(lo, static_cast<long>(k)) == w) return lo;
  Int scale = pow(Int(10), digits);
  return lo + Rat(1, scale);
}

}  // namespace denslab
