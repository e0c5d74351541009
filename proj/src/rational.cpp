#include "denslab/rational.hpp"

#include "denslab/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace denslab {

Int floor_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);
  Int q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) --q;
  return q;
}

Int ceil_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);
  Int q = n / d;
  if (n > 0 && q * d != n) ++q;
  return q;
}

Rat rpow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0 && e < 0) fail(Errc::validation, "0 cannot be raised to a negative power");
  unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
  Int n = numerator(base), d = denominator(base);
  Int pn = pow(n, static_cast<unsigned>(m));
  Int pd = pow(d, static_cast<unsigned>(m));
  return e > 0 ? Rat(pn, pd) : Rat(pd, pn);
}

Int iroot_floor(const Int& x, unsigned n) {
  if (x < 0) fail(Errc::validation, "iroot of negative value");
  if (n == 0) fail(Errc::validation, "iroot with n = 0");
  if (n == 1 || x == 0 || x == 1) return x;
  std::size_t bits = msb(x) + 1;
  Int y = Int(1) << (bits / n + 1);
  for (;;) {
    Int yp = pow(y, n - 1);
    Int t = ((n - 1) * y + x / yp) / n;
    if (t >= y) break;
    y = t;
  }
  while (pow(y, n) > x) --y;
  while (pow(y + 1, n) <= x) ++y;
  return y;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rat parse_decimal(const std::string& s) {
  // [sign] digits [. digits] [eE [sign] digits]
  std::string t = s;
  bool neg = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  long expo = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string es = t.substr(epos + 1);
    t = t.substr(0, epos);
    if (es.empty()) fail(Errc::validation, "bad exponent in '" + s + "'");
    bool eneg = false;
    if (es[0] == '+' || es[0] == '-') {
      eneg = es[0] == '-';
      es = es.substr(1);
    }
    if (!all_digits(es) || es.size() > 6) fail(Errc::validation, "bad exponent in '" + s + "'");
    expo = std::strtol(es.c_str(), nullptr, 10);
    if (eneg) expo = -expo;
  }
  std::string ip = t, fp;
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    ip = t.substr(0, dot);
    fp = t.substr(dot + 1);
  }
  if (ip.empty() && fp.empty()) fail(Errc::validation, "empty numeric literal '" + s + "'");
  if (!ip.empty() && !all_digits(ip)) fail(Errc::validation, "bad numeric literal '" + s + "'");
  if (!fp.empty() && !all_digits(fp)) fail(Errc::validation, "bad numeric literal '" + s + "'");
  Int mant = 0;
  for (char c : ip + fp) mant = mant * 10 + (c - '0');
  long shift = expo - static_cast<long>(fp.size());
  Rat v(mant);
  if (shift > 0)
    v *= rpow(Rat(10), shift);
  else if (shift < 0)
    v /= rpow(Rat(10), -shift);
  return neg ? -v : v;
}

}  // namespace

Rat parse_rat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) fail(Errc::validation, "empty numeric literal");
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    Rat num = parse_decimal(t.substr(0, slash));
    Rat den = parse_decimal(t.substr(slash + 1));
    if (!is_integer(num) || !is_integer(den))
      fail(Errc::validation, "fractional parts in rational literal '" + s + "'");
    if (den == 0) fail(Errc::validation, "zero denominator in '" + s + "'");
    return num / den;
  }
  return parse_decimal(t);
}

std::string rat_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (!is_integer(r)) s += "/" + denominator(r).str();
  return s;
}

std::string rat_to_decimal(const Rat& r, std::size_t digits) {
  bool neg = r < 0;
  Rat v = neg ? Rat(-r) : r;
  Int scale = pow(Int(10), static_cast<unsigned>(digits));
  Int num = numerator(v) * scale;
  Int den = denominator(v);
  Int q = num / den, rem = num % den;
  if (2 * rem >= den) ++q;  // round half away from zero
  Int ip = q / scale, frac = q % scale;
  std::string fs = frac.str();
  fs.insert(fs.begin(), digits - fs.size(), '0');
  while (!fs.empty() && fs.back() == '0') fs.pop_back();
  std::string out = ip.str();
  if (!fs.empty()) out += "." + fs;
  if (neg && (ip != 0 || !fs.empty())) out.insert(out.begin(), '-');
  return out;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::validation: return "ValidationError";
    case Errc::horizon_exceeded: return "HorizonExceeded";
    case Errc::invalid_window: return "InvalidWindow";
    case Errc::invalid_k: return "InvalidK";
    case Errc::invalid_eta: return "InvalidEta";
    case Errc::not_a_covering: return "NotACovering";
    case Errc::param_error: return "ParamError";
    case Errc::threshold_unmet: return "ThresholdUnmet";
    case Errc::too_few_witnesses: return "TooFewWitnesses";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::degenerate_ratio: return "DegenerateRatio";
    case Errc::consequence_violation: return "ConsequenceViolation";
    case Errc::stalled_recursion: return "StalledRecursion";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace denslab
