#pragma once

#include "denslab/enclosure.hpp"
#include "denslab/rational.hpp"
#include "denslab/seqcore.hpp"

#include <optional>
#include <vector>

namespace denslab::covering {

// Parameters of the covering of (xi*x, x]: 0 < xi < eta < 1, x > 0.
struct CoveringParams {
  Rat x, xi, eta;
};

// p = floor(log xi / log eta) and whether the ratio is an integer
// (eta^p == xi exactly). Decided by exact power comparisons
// eta^(p+1) < xi <= eta^p; no floating logs.
struct LogRatioInfo {
  long p = 0;
  bool integral = false;
  long ceil() const { return integral ? p : p + 1; }
};
LogRatioInfo floor_log_ratio(const Rat& xi, const Rat& eta);

// (f^m o phi)(x) with phi = ceiling and f(t) = ceil(eta * t); satisfies
// eta^m x <= result <= eta^m x + sum_{k<=m} eta^k.
Int ceil_eta_iterate(const Rat& x, const Rat& eta, unsigned m);

// r(t) = (1 - eta^(t+1)) / (eta^(t-1) (1-eta)^2), exact at integer t >= 1.
Rat r_threshold(const Rat& eta, long t);
// Certified upper bound r(ceil(t)) for rational t >= 1 (r is increasing).
Rat r_threshold_upper(const Rat& eta, const Rat& t);

// (1 - eta^2 xi) / (xi (1-eta)^2) == r(log xi / log eta + 1): above it the
// chain inequalities hold up to index ceil(log xi / log eta) and
// d <= ceil(log xi / log eta).
Rat d_bound_threshold(const Rat& xi, const Rat& eta);

// M(xi, eta) = max(d_bound_threshold, (log xi/log eta + 2)/(eta^2 xi (1-eta)));
// the second term carries a log, so the result is a certified enclosure.
RatInterval m_threshold(const Rat& xi, const Rat& eta);

// The three-way max controlling d = floor(log xi / log eta) in the
// non-integer case. Exact. Throws DegenerateRatio when eta^q == xi.
Rat eq35_threshold(const Rat& xi, const Rat& eta);

// Threshold of the integer case (eta^q == xi): max(d_bound_threshold,
// (q+2)/(xi (1-eta))). Exact. Requires the integral case.
Rat integer_case_threshold(const Rat& xi, const Rat& eta);

// sum eta^k = 1/(1-eta): bound on f^m(ceil(x)) - eta^m x.
inline Rat s_eta(const Rat& eta) { return 1 / (1 - eta); }

struct ThresholdFlags {
  long chain_q = 0;       // largest q >= 0 with r(q) <= x
  bool d_bound_met = false;   // x >= d_bound_threshold
  bool length_met = false;    // x >= M(xi,eta).hi
  bool predicted_met = false; // x >= eq35 / integer-case threshold
};

struct EtaCovering {
  CoveringParams params;
  std::vector<Int> b;  // b_0..b_d; b_0 = ceil(x), b_{i+1} = ceil(a_i)
  std::vector<Rat> a;  // a_i = eta * b_i
  long d = 0;          // first index with a_d <= xi*x
  LogRatioInfo logratio;
  ThresholdFlags thresholds;
};

// Runs the exact recursion until a_d <= xi*x. Below the thresholds the
// construction still proceeds (flags record what is not guaranteed), but
// the recursion can then reach a fixed point ceil(eta*b) == b while still
// above xi*x; that raises StalledRecursion.
EtaCovering build_eta_covering(const CoveringParams& params);

enum class CheckStatus { pass, fail, not_applicable };
const char* check_status_name(CheckStatus s);

struct CoveringChecks {
  CheckStatus recursion;      // b_0 = ceil(x), b_{i+1} = ceil(a_i), a_i = eta b_i
  CheckStatus d_minimal;      // a_d <= xi x < a_{d-1}
  CheckStatus chain;          // eta^{i+1}x <= a_i <= eta^i x <= a_{i-1} <= b_i <= eta^{i-1}x <= b_{i-1}
  CheckStatus d_bound_ceil;   // d <= ceil(log xi / log eta)
  CheckStatus d_bound_plus1;  // d <= log xi / log eta + 1
  CheckStatus total_length;   // sum (b_i - a_i) <= (1 - xi eta^3) x
  CheckStatus coverage;       // union of (a_i, b_i] contains (xi x, x]
  CheckStatus overlaps;       // b_i - a_{i-1} <= 1
  bool all_applicable_pass() const;
};
CoveringChecks verify_covering(const EtaCovering& cov);

struct PredictedD {
  std::vector<long> candidates;
  bool sharp = false;  // a Prop-17 branch applied (x above its threshold)
};
PredictedD predicted_d(const CoveringParams& params);

// Degeneracy eta^{i+1} x == a_i: reports the largest such i <= d after
// verifying the forced identities eta = b_1/b_0, x = b_0 and
// a_j = b_1^{j+1}/b_0^j for j <= i. A failed identity is an internal bug
// and raises ConsequenceViolation.
struct DegeneracyRecord {
  long index;
};
std::optional<DegeneracyRecord> degenerate_check(const EtaCovering& cov);

struct WitnessResult {
  Int n;          // an integer b_j from the covering
  Rat achieved;   // (F(n) - F(eta n)) / ((1-eta) n)
  Rat bound;      // (F(x) - F(xi x)) / ((1 - xi eta^3) x)
  std::size_t covering_index;
};
// Requires x >= M(xi,eta) (certified upper bound) and ceil(x) within the
// oracle horizon; the returned inequality achieved >= bound is re-checked
// exactly before returning.
WitnessResult witness_integer(const seqcore::CountingOracle& oracle,
                              const CoveringParams& params);

// Minimal delta such that every eta in (delta, 1) satisfies
// 1 - xi eta^3 < (1-xi)/(1-eps); equals xi itself when eps >= xi, otherwise
// a certified rational upper bound of the cube root of
// (xi-eps)/(xi(1-eps)) within 1e-12 (re-verified exactly).
Rat delta_for(const Rat& xi, const Rat& eps);

}  // namespace denslab::covering
