#include "denslab/intervals.hpp"

#include "denslab/enclosure.hpp"
#include "denslab/errors.hpp"

#include <algorithm>

namespace denslab::intervals {

namespace {

constexpr unsigned kPowerRatioDigits = 12;

// Directed rational stand-in for n^(-p), p = u/v > 0: the floor of the real
// value at 12 decimal digits. Monotone and exact.
Rat power_ratio_term(std::size_t n, const Rat& p) {
  Int u = numerator(p), v = denominator(p);
  if (u > 64) fail(Errc::validation, "power-ratio exponent too large");
  unsigned uu = u.convert_to<unsigned>();
  unsigned vv = v.convert_to<unsigned>();
  Rat npow = rpow(Rat(Int(n)), static_cast<long>(uu));  // n^u
  return nth_root_lower(1 / npow, vv, kPowerRatioDigits);
}

Rat tail_ratio(const TailClass& tail, std::size_t n) {
  if (const auto* cr = std::get_if<ConstantRatio>(&tail)) return cr->rho;
  if (const auto* pr = std::get_if<PowerRatio>(&tail)) {
    Rat t = pr->c * power_ratio_term(n, pr->p);
    if (t <= 0)
      fail(Errc::validation,
           "power-ratio term underflows at n = " + std::to_string(n));
    return 1 + t;
  }
  fail(Errc::validation, "finite-prefix family has no interval at index " +
                             std::to_string(n));
}

void validate_tail(const TailClass& tail) {
  if (const auto* cr = std::get_if<ConstantRatio>(&tail)) {
    if (cr->rho <= 1) fail(Errc::validation, "constant-ratio rho must exceed 1");
  } else if (const auto* pr = std::get_if<PowerRatio>(&tail)) {
    if (pr->c <= 0 || pr->p <= 0)
      fail(Errc::validation, "power-ratio parameters must be positive");
  }
}

}  // namespace

void validate_family(const IntervalFamily& f) {
  validate_tail(f.tail);
  Rat prev_b(0);
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    const auto& iv = f.prefix[i];
    if (iv.a <= 0 || iv.b <= iv.a)
      fail(Errc::validation, "interval " + std::to_string(i + 1) +
                                 " must satisfy 0 < a < b");
    if (iv.a < prev_b)
      fail(Errc::validation, "interval " + std::to_string(i + 1) +
                                 " starts before the previous one ends");
    prev_b = iv.b;
  }
}

std::vector<HalfOpenInterval> realize(const IntervalFamily& f, std::size_t n) {
  validate_family(f);
  std::vector<HalfOpenInterval> out = f.prefix;
  if (out.size() > n) out.resize(n);
  if (out.size() < n && std::holds_alternative<FinitePrefixOnly>(f.tail))
    fail(Errc::validation, "finite-prefix family has only " +
                               std::to_string(f.prefix.size()) + " intervals");
  Rat a = out.empty() ? Rat(1) : out.back().b;
  for (std::size_t i = out.size(); i < n; ++i) {
    Rat b = a * tail_ratio(f.tail, i + 1);
    out.push_back(HalfOpenInterval{a, b});
    a = b;
  }
  return out;
}

std::string tail_to_string(const TailClass& t) {
  if (const auto* cr = std::get_if<ConstantRatio>(&t))
    return "geo:" + rat_to_string(cr->rho);
  if (const auto* pr = std::get_if<PowerRatio>(&t))
    return "pow:" + rat_to_string(pr->c) + "," + rat_to_string(pr->p);
  return "finite";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::substantial: return "substantial";
    case Verdict::not_substantial: return "not_substantial";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

SubstantialityReport substantiality_report(const IntervalFamily& f, std::size_t n) {
  auto ivs = realize(f, n);
  Rat sum = 0;
  for (const auto& iv : ivs) {
    Rat t = iv.ratio() - 1;
    sum += t * t;
  }
  Verdict v = Verdict::undetermined;
  if (std::holds_alternative<ConstantRatio>(f.tail)) {
    v = Verdict::substantial;  // constant positive terms diverge
  } else if (const auto* pr = std::get_if<PowerRatio>(&f.tail)) {
    // terms ~ c^2 n^(-2p): diverges iff 2p <= 1
    v = pr->p <= Rat(1, 2) ? Verdict::substantial : Verdict::not_substantial;
  }
  return {sum, v, ivs.size()};
}

Rat long_report(const IntervalFamily& f, std::size_t n) {
  auto ivs = realize(f, n);
  Rat sum = 0;
  for (const auto& iv : ivs) {
    Rat len = iv.length();
    sum += len * len / (1 + iv.a * iv.a);
  }
  return sum;
}

bool LimsupClass::contains(const Rat& v) const {
  if (lo_closed ? v < lo : v <= lo) return false;
  if (hi) {
    if (hi_closed ? v > *hi : v >= *hi) return false;
  }
  return true;
}

std::string LimsupClass::str() const {
  if (hi && *hi == lo && lo_closed && hi_closed) return "{" + rat_to_string(lo) + "}";
  std::string s = lo_closed ? "[" : "(";
  s += rat_to_string(lo);
  s += ",";
  s += hi ? rat_to_string(*hi) : "inf";
  s += hi_closed ? "]" : ")";
  return s;
}

LimsupClass LimsupClass::parse(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail(Errc::validation, "empty class");
  if (s.front() == '{' && s.back() == '}')
    return singleton(parse_rat(s.substr(1, s.size() - 2)));
  if (s.front() != '[' && s.front() != '(') return singleton(parse_rat(s));
  if (s.size() < 5 || (s.back() != ']' && s.back() != ')'))
    fail(Errc::validation, "bad class literal '" + in + "'");
  auto comma = s.find(',');
  if (comma == std::string::npos) fail(Errc::validation, "bad class literal '" + in + "'");
  LimsupClass out;
  out.lo_closed = s.front() == '[';
  out.hi_closed = s.back() == ']';
  out.lo = parse_rat(s.substr(1, comma - 1));
  std::string hi = s.substr(comma + 1, s.size() - comma - 2);
  if (hi == "inf" || hi == "+inf" || hi == "oo")
    out.hi = std::nullopt;
  else
    out.hi = parse_rat(hi);
  if (out.lo < 1) fail(Errc::validation, "class must lie inside [1, inf]");
  if (out.hi && *out.hi < out.lo) fail(Errc::validation, "empty class '" + in + "'");
  return out;
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::not_member: return "not_member";
    case Membership::undetermined: return "undetermined";
  }
  return "?";
}

RatioClassReport ratio_class(const IntervalFamily& f, std::size_t n,
                             const LimsupClass& a) {
  if (n == 0) fail(Errc::validation, "ratio_class needs n >= 1");
  auto ivs = realize(f, n);
  std::size_t first = (n + 1) / 2;  // ceil(N/2), 1-based
  Rat best = 0;
  for (std::size_t i = first; i <= ivs.size(); ++i) {
    Rat r = ivs[i - 1].ratio();
    if (r > best) best = r;
  }
  RatioClassReport rep;
  rep.finite_limsup_estimate = best;
  if (const auto* cr = std::get_if<ConstantRatio>(&f.tail))
    rep.symbolic_limsup = cr->rho;
  else if (std::holds_alternative<PowerRatio>(f.tail))
    rep.symbolic_limsup = Rat(1);  // ratios tend to 1 from above
  if (rep.symbolic_limsup)
    rep.member_of_a = a.contains(*rep.symbolic_limsup) ? Membership::member
                                                       : Membership::not_member;
  else
    rep.member_of_a = Membership::undetermined;
  return rep;
}

Rat RootPower::lower(unsigned digits) const {
  // scale * base^(num/den): directed den-th root of base^num.
  Rat core = rpow(base, num);
  return scale * nth_root_lower(core, static_cast<unsigned>(den), digits);
}

Rat RootPower::upper(unsigned digits) const {
  Rat core = rpow(base, num);
  return scale * nth_root_upper(core, static_cast<unsigned>(den), digits);
}

std::string RootPower::decimal(unsigned digits) const {
  return rat_to_decimal(lower(digits + 2), digits);
}

RootPower GeometricSplit::endpoint(long i) const {
  if (i < 0 || i > r) fail(Errc::validation, "endpoint index out of range");
  if (i == 0) return RootPower{a, Rat(1), 0, 1};
  if (i == r) return RootPower{b, Rat(1), 0, 1};
  return RootPower{a, b / a, i, r};
}

GeometricSplit split_geometric(const Rat& a, const Rat& b, const Rat& k) {
  if (a <= 0 || b <= a) fail(Errc::invalid_window, "need 0 < a < b");
  if (k <= 1) fail(Errc::invalid_k, "need k > 1");
  Rat q = b / a;
  // r = floor(log_k(b/a)) + 1, located by exact power comparisons.
  long m = 0;
  Rat p(1);
  while (p * k <= q) {
    p *= k;
    ++m;
    if (m > 1000000) fail(Errc::invalid_k, "ratio b/a too large for this k");
  }
  GeometricSplit out{a, b, k, m + 1};
  // alpha = q^(1/r) satisfies 1 < alpha <= k iff 1 < q <= k^r; both sides
  // are exact. q > 1 holds by the window check; q <= k^r by maximality of m.
  if (q > p * k) fail(Errc::validation, "split_geometric ratio bound failed");
  return out;
}

std::vector<HalfOpenInterval> split_eta(const Rat& a, const Rat& b, const Rat& eta) {
  if (a <= 0 || b <= a) fail(Errc::invalid_window, "need 0 < a < b");
  if (eta <= 1) fail(Errc::invalid_eta, "need eta > 1");
  std::vector<HalfOpenInterval> out;
  Rat c = a;
  for (;;) {
    Rat d = c * eta;
    if (d >= b) {
      out.push_back({c, b});
      break;
    }
    out.push_back({c, d});
    c = d;
    if (out.size() > 10000000) fail(Errc::invalid_eta, "eta too close to 1");
  }
  return out;
}

PigeonholeResult pigeonhole_select(const seqcore::CountingOracle& oracle,
                                   const std::vector<HalfOpenInterval>& covering,
                                   const HalfOpenInterval& target) {
  if (covering.empty()) fail(Errc::not_a_covering, "empty covering");
  if (target.a < 0 || target.b <= target.a)
    fail(Errc::invalid_window, "bad target interval");
  for (const auto& iv : covering)
    if (iv.a < 0 || iv.b <= iv.a) fail(Errc::invalid_window, "bad covering interval");
  // Sweep check that the union of the (c_i, d_i] contains (a, b].
  auto sorted = covering;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });
  Rat cur = target.a;
  for (const auto& iv : sorted) {
    if (cur >= target.b) break;
    if (iv.a <= cur && iv.b > cur) cur = iv.b;
  }
  if (cur < target.b)
    fail(Errc::not_a_covering, "union misses (" + rat_to_string(cur) + ", " +
                                   rat_to_string(target.b) + "]");

  Rat total_len = 0;
  std::size_t best = 0;
  Rat best_ratio(-1);
  for (std::size_t i = 0; i < covering.size(); ++i) {
    total_len += covering[i].length();
    Rat r = oracle.window_ratio(covering[i].a, covering[i].b);
    if (r > best_ratio) {  // ties break to the smallest index
      best_ratio = r;
      best = i;
    }
  }
  Rat bound = Rat(oracle.count_leq(target.b) - oracle.count_leq(target.a)) / total_len;
  if (best_ratio < bound)
    fail(Errc::consequence_violation, "pigeonhole bound failed");  // cannot happen
  return {best, best_ratio, bound};
}

EllEstimate ell_estimate(const seqcore::CountingOracle& oracle,
                         const IntervalFamily& f, std::size_t n) {
  if (n == 0) fail(Errc::validation, "ell_estimate needs n >= 1");
  auto ivs = realize(f, n);
  auto window_min = [&](std::size_t first) {
    Rat best;
    bool have = false;
    for (std::size_t i = first; i <= ivs.size(); ++i) {
      Rat r = oracle.window_ratio(ivs[i - 1].a, ivs[i - 1].b);
      if (!have || r < best) {
        best = r;
        have = true;
      }
    }
    return best;
  };
  return {window_min((n + 1) / 2), window_min((n + 3) / 4)};
}

Certificate bm_certificate(const seqcore::CountingOracle& oracle,
                           const IntervalFamily& f, std::size_t n, const Rat& rate,
                           const LimsupClass& a) {
  if (n == 0) fail(Errc::validation, "bm_certificate needs n >= 1");
  if (rate < 0) fail(Errc::validation, "rate must be nonnegative");
  Certificate cert;
  cert.rate = rate;
  cert.family = f;
  cert.checked_upto = n;
  cert.substantial_verdict = substantiality_report(f, n).verdict;
  cert.class_report = ratio_class(f, n, a);

  auto ivs = realize(f, n);
  cert.transcript.reserve(n);
  for (const auto& iv : ivs) cert.transcript.push_back(oracle.window_ratio(iv.a, iv.b));

  // start_index = smallest s with ratio_n >= R for all n in [s, N].
  std::size_t start = 1;
  for (std::size_t i = n; i >= 1; --i) {
    if (cert.transcript[i - 1] < rate) {
      start = i + 1;
      break;
    }
  }
  cert.start_index = start <= n ? start : 0;

  if (cert.substantial_verdict != Verdict::substantial) {
    cert.rejection_reason = "substantiality";
    return cert;
  }
  if (cert.class_report.member_of_a == Membership::not_member) {
    cert.rejection_reason = "ratio_class";
    return cert;
  }
  if (cert.class_report.member_of_a == Membership::undetermined) {
    if (!a.contains(cert.class_report.finite_limsup_estimate)) {
      cert.rejection_reason = "ratio_class";
      return cert;
    }
    cert.class_undetermined = true;
  }
  if (cert.start_index == 0 || cert.start_index > n / 2) {
    cert.rejection_reason = "ratio";
    return cert;
  }
  cert.accepted = true;
  return cert;
}

}  // namespace denslab::intervals
