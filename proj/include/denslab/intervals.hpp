#pragma once

#include "denslab/rational.hpp"
#include "denslab/seqcore.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace denslab::intervals {

// (a, b] with 0 < a < b.
struct HalfOpenInterval {
  Rat a, b;
  Rat length() const { return b - a; }
  Rat ratio() const { return b / a; }
};

// Symbolic tail classes. A family is an explicit prefix plus one of these
// rules for every later index; divergence of the substantiality sum is
// decided from the rule, never from finitely many terms.
//
// ConstantRatio(rho):  b_n = rho * a_n, a_{n+1} = b_n  (rho > 1)
// PowerRatio(c, p):    b_n/a_n = 1 + c * n^(-p), a_{n+1} = b_n
// FinitePrefixOnly:    nothing beyond the prefix is claimed.
struct ConstantRatio {
  Rat rho;
};
struct PowerRatio {
  Rat c, p;
};
struct FinitePrefixOnly {};
using TailClass = std::variant<ConstantRatio, PowerRatio, FinitePrefixOnly>;

struct IntervalFamily {
  std::vector<HalfOpenInterval> prefix;
  TailClass tail;
};

// Throws ValidationError unless 0 < a_n < b_n <= a_{n+1} holds along the
// prefix and the tail parameters are in range.
void validate_family(const IntervalFamily& f);

// First n intervals of the family. Tail intervals continue from the end of
// the prefix (from a_1 = 1 when the prefix is empty). PowerRatio realizes
// n^(-p) as a directed rational approximation at 12 decimal digits, so the
// realized family is exact-rational.
std::vector<HalfOpenInterval> realize(const IntervalFamily& f, std::size_t n);

std::string tail_to_string(const TailClass& t);

enum class Verdict { substantial, not_substantial, undetermined };
const char* verdict_name(Verdict v);

struct SubstantialityReport {
  Rat partial_sum;  // sum over n <= N of (b_n/a_n - 1)^2, realized terms
  Verdict verdict;
  std::size_t terms;
};
SubstantialityReport substantiality_report(const IntervalFamily& f, std::size_t n);

// Partial sum of |I_n|^2 / (1 + dist(0, I_n)^2) with dist(0, (a,b]) = a.
// Diagnostic only; no divergence verdict is attached.
Rat long_report(const IntervalFamily& f, std::size_t n);

// A subinterval of [1, +inf]; the right endpoint may be +infinity and
// +infinity itself may be a member (e.g. "(1,inf]").
struct LimsupClass {
  Rat lo;
  bool lo_closed = true;
  std::optional<Rat> hi;  // nullopt = +infinity endpoint
  bool hi_closed = true;  // with hi == nullopt: +infinity is a member
  bool contains(const Rat& v) const;
  bool contains_infinity() const { return !hi && hi_closed; }
  std::string str() const;
  static LimsupClass singleton(const Rat& v) { return {v, true, v, true}; }
  static LimsupClass parse(const std::string& s);
};

enum class Membership { member, not_member, undetermined };
const char* membership_name(Membership m);

struct RatioClassReport {
  Rat finite_limsup_estimate;        // max of b_n/a_n over n in [ceil(N/2), N]
  std::optional<Rat> symbolic_limsup;  // known for ConstantRatio / PowerRatio
  Membership member_of_a;
};
RatioClassReport ratio_class(const IntervalFamily& f, std::size_t n, const LimsupClass& a);

// Endpoint of a geometric split: scale * base^(num/den). Exact comparisons
// go through integer powers; decimal rendering is directed.
struct RootPower {
  Rat scale, base;
  long num = 0, den = 1;
  Rat lower(unsigned digits) const;
  Rat upper(unsigned digits) const;
  std::string decimal(unsigned digits) const;
};

struct GeometricSplit {
  Rat a, b, k;
  long r = 0;                      // number of subintervals
  RootPower endpoint(long i) const;  // i = 0..r; endpoint(0) = a, endpoint(r) = b
};

// Splits (a, b] into r = floor(log_k(b/a)) + 1 consecutive subintervals of
// common ratio alpha = (b/a)^(1/r), 1 < alpha <= k.
GeometricSplit split_geometric(const Rat& a, const Rat& b, const Rat& k);

// Splits (a, b] into (c_i, d_i] with c_i = eta^(i-1) a and d_i = min(eta^i a, b);
// all ratios equal eta except possibly the last. Needs eta > 1.
std::vector<HalfOpenInterval> split_eta(const Rat& a, const Rat& b, const Rat& eta);

struct PigeonholeResult {
  std::size_t index;  // smallest index attaining the maximal window ratio
  Rat ratio;
  Rat bound;  // (F(b)-F(a)) / sum of covering lengths; ratio >= bound holds
};
PigeonholeResult pigeonhole_select(const seqcore::CountingOracle& oracle,
                                   const std::vector<HalfOpenInterval>& covering,
                                   const HalfOpenInterval& target);

struct EllEstimate {
  Rat value;       // min window ratio over n in [ceil(N/2), N]
  Rat diagnostic;  // same min over n in [ceil(N/4), N]
};
EllEstimate ell_estimate(const seqcore::CountingOracle& oracle,
                         const IntervalFamily& f, std::size_t n);

struct Certificate {
  Rat rate;
  IntervalFamily family;
  std::size_t start_index = 0;   // 1-based; 0 when no qualifying index exists
  std::size_t checked_upto = 0;
  Verdict substantial_verdict = Verdict::undetermined;
  RatioClassReport class_report;
  bool class_undetermined = false;  // membership granted on the finite estimate only
  std::vector<Rat> transcript;      // window ratios for n = 1..N
  bool accepted = false;
  std::string rejection_reason;     // "substantiality" | "ratio_class" | "ratio"
};

// Finite-horizon evidence that R is an admissible rate for the family:
// accepted iff the family is substantial (symbolically), its limsup class
// meets A, and every window ratio from some start_index <= N/2 onward is
// >= R. Rejection is a verdict, not an exception.
Certificate bm_certificate(const seqcore::CountingOracle& oracle,
                           const IntervalFamily& f, std::size_t n, const Rat& rate,
                           const LimsupClass& a);

}  // namespace denslab::intervals
