#include "denslab/covering.hpp"

#include "denslab/errors.hpp"
#include "denslab/intervals.hpp"

#include <algorithm>
#include <string>

namespace denslab::covering {

namespace {

void check_params(const Rat& xi, const Rat& eta) {
  if (!(xi > 0 && xi < 1)) fail(Errc::param_error, "xi must lie in (0,1)");
  if (!(eta > xi && eta < 1)) fail(Errc::param_error, "eta must lie in (xi,1)");
}

const Rat kLogTol = Rat(1, Int("1000000000000"));  // 1e-12

}  // namespace

LogRatioInfo floor_log_ratio(const Rat& xi, const Rat& eta) {
  check_params(xi, eta);
  // smallest k with eta^k <= xi; then p = k-1 unless eta^k == xi exactly.
  Rat p(1);
  long k = 0;
  while (p > xi) {
    p *= eta;
    ++k;
    if (k > 2000000) fail(Errc::param_error, "log xi / log eta too large");
  }
  if (p == xi) return {k, true};
  return {k - 1, false};
}

Int ceil_eta_iterate(const Rat& x, const Rat& eta, unsigned m) {
  if (x <= 0) fail(Errc::param_error, "x must be positive");
  if (!(eta > 0 && eta < 1)) fail(Errc::param_error, "eta must lie in (0,1)");
  Int v = ceil_rat(x);
  for (unsigned i = 0; i < m; ++i) v = ceil_rat(eta * v);
  return v;
}

Rat r_threshold(const Rat& eta, long t) {
  if (!(eta > 0 && eta < 1)) fail(Errc::param_error, "eta must lie in (0,1)");
  if (t < 1) fail(Errc::param_error, "r(t) needs t >= 1");
  Rat num = 1 - rpow(eta, t + 1);
  Rat den = rpow(eta, t - 1) * (1 - eta) * (1 - eta);
  return num / den;
}

Rat r_threshold_upper(const Rat& eta, const Rat& t) {
  if (t < 1) fail(Errc::param_error, "r(t) needs t >= 1");
  return r_threshold(eta, ceil_rat(t).convert_to<long>());
}

Rat d_bound_threshold(const Rat& xi, const Rat& eta) {
  check_params(xi, eta);
  return (1 - eta * eta * xi) / (xi * (1 - eta) * (1 - eta));
}

RatInterval m_threshold(const Rat& xi, const Rat& eta) {
  Rat t1 = d_bound_threshold(xi, eta);
  RatInterval lr = log_ratio_enclosure(xi, eta, kLogTol);
  Rat den = eta * eta * xi * (1 - eta);
  RatInterval t2{(lr.lo + 2) / den, (lr.hi + 2) / den};
  return {std::max(t1, t2.lo), std::max(t1, t2.hi)};
}

Rat eq35_threshold(const Rat& xi, const Rat& eta) {
  LogRatioInfo lr = floor_log_ratio(xi, eta);
  if (lr.integral)
    fail(Errc::degenerate_ratio, "log xi / log eta is an integer; use the integer-case threshold");
  Rat t1 = d_bound_threshold(xi, eta);
  Rat ep = rpow(eta, lr.p);
  Rat t2 = Rat(lr.p + 2) / (xi - ep * eta);  // xi - eta^(p+1) > 0 here
  Rat t3 = 1 / (ep - xi);                    // eta^p - xi > 0 here
  return std::max({t1, t2, t3});
}

Rat integer_case_threshold(const Rat& xi, const Rat& eta) {
  LogRatioInfo lr = floor_log_ratio(xi, eta);
  if (!lr.integral)
    fail(Errc::degenerate_ratio, "log xi / log eta is not an integer");
  Rat t1 = d_bound_threshold(xi, eta);
  Rat t2 = Rat(lr.p + 2) / (xi * (1 - eta));
  return std::max(t1, t2);
}

namespace {

ThresholdFlags compute_flags(const CoveringParams& pr, const LogRatioInfo& lr) {
  ThresholdFlags fl;
  // chain_q: r is increasing, so scan until r(q) exceeds x. Powers of eta
  // are maintained incrementally.
  long q = 0;
  Rat den2 = (1 - pr.eta) * (1 - pr.eta);
  Rat hi = pr.eta * pr.eta;  // eta^(q+2) at q+1
  Rat lo(1);                 // eta^q at q+1
  while (q < 1000000 && (1 - hi) / (lo * den2) <= pr.x) {
    ++q;
    hi *= pr.eta;
    lo *= pr.eta;
  }
  fl.chain_q = q;
  fl.d_bound_met = pr.x >= d_bound_threshold(pr.xi, pr.eta);
  fl.length_met = pr.x >= m_threshold(pr.xi, pr.eta).hi;
  fl.predicted_met = lr.integral
                         ? pr.x >= integer_case_threshold(pr.xi, pr.eta)
                         : pr.x >= eq35_threshold(pr.xi, pr.eta);
  return fl;
}

}  // namespace

EtaCovering build_eta_covering(const CoveringParams& params) {
  check_params(params.xi, params.eta);
  if (params.x <= 0) fail(Errc::param_error, "x must be positive");
  EtaCovering cov;
  cov.params = params;
  cov.logratio = floor_log_ratio(params.xi, params.eta);
  cov.thresholds = compute_flags(params, cov.logratio);

  const Rat target = params.xi * params.x;
  cov.b.push_back(ceil_rat(params.x));
  cov.a.push_back(params.eta * cov.b.back());
  while (cov.a.back() > target) {
    Int next = ceil_rat(cov.a.back());
    if (next == cov.b.back())
      fail(Errc::stalled_recursion,
           "ceil(eta*b) = b = " + next.str() + " while a = " +
               rat_to_string(cov.a.back()) + " > xi*x; x is below the r(q) threshold");
    cov.b.push_back(next);
    cov.a.push_back(params.eta * next);
  }
  cov.d = static_cast<long>(cov.b.size()) - 1;
  return cov;
}

const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "not_applicable";
  }
  return "?";
}

bool CoveringChecks::all_applicable_pass() const {
  for (CheckStatus s : {recursion, d_minimal, chain, d_bound_ceil, d_bound_plus1,
                        total_length, coverage, overlaps})
    if (s == CheckStatus::fail) return false;
  return true;
}

CoveringChecks verify_covering(const EtaCovering& cov) {
  const Rat& x = cov.params.x;
  const Rat& xi = cov.params.xi;
  const Rat& eta = cov.params.eta;
  const Rat target = xi * x;
  const long d = cov.d;
  auto ok = [](bool b) { return b ? CheckStatus::pass : CheckStatus::fail; };

  CoveringChecks out;

  bool rec = cov.b[0] == ceil_rat(x);
  for (long i = 0; i <= d; ++i) {
    rec = rec && cov.a[i] == eta * cov.b[i];
    if (i >= 1) rec = rec && cov.b[i] == ceil_rat(cov.a[i - 1]);
  }
  out.recursion = ok(rec);

  out.d_minimal = ok(cov.a[d] <= target && (d == 0 || cov.a[d - 1] > target));

  // One extra index beyond d participates in the chain check.
  Int b_next = ceil_rat(cov.a[d]);
  Rat a_next = eta * b_next;
  auto b_at = [&](long i) { return i <= d ? Rat(cov.b[i]) : Rat(b_next); };
  auto a_at = [&](long i) { return i <= d ? cov.a[i] : a_next; };

  long imax = std::min(d + 1, cov.thresholds.chain_q);
  if (imax < 1) {
    out.chain = CheckStatus::not_applicable;
  } else {
    bool chain = true;
    Rat ei = eta;  // eta^i
    for (long i = 1; i <= imax && chain; ++i) {
      Rat exi = ei * x;  // eta^i x
      chain = eta * exi <= a_at(i) && a_at(i) <= exi && exi <= a_at(i - 1) &&
              a_at(i - 1) <= b_at(i) && b_at(i) <= exi / eta && exi / eta <= b_at(i - 1);
      ei *= eta;
    }
    out.chain = ok(chain);
  }

  if (!cov.thresholds.d_bound_met) {
    out.d_bound_ceil = CheckStatus::not_applicable;
    out.d_bound_plus1 = CheckStatus::not_applicable;
  } else {
    out.d_bound_ceil = ok(d <= cov.logratio.ceil());
    // d <= log xi / log eta + 1 is equivalent to eta^(d-1) >= xi.
    out.d_bound_plus1 = ok(d <= 1 || rpow(eta, d - 1) >= xi);
  }

  if (!cov.thresholds.length_met) {
    out.total_length = CheckStatus::not_applicable;
  } else {
    Rat sum = 0;
    for (long i = 0; i <= d; ++i) sum += Rat(cov.b[i]) - cov.a[i];
    out.total_length = ok(sum <= (1 - xi * rpow(eta, 3)) * x);
  }

  bool cover = Rat(cov.b[0]) >= x && cov.a[d] <= target;
  bool laps = true;
  for (long i = 1; i <= d; ++i) {
    cover = cover && cov.a[i - 1] <= Rat(cov.b[i]);
    laps = laps && Rat(cov.b[i]) - cov.a[i - 1] <= 1;
  }
  out.coverage = ok(cover);
  out.overlaps = ok(laps);
  return out;
}

PredictedD predicted_d(const CoveringParams& params) {
  check_params(params.xi, params.eta);
  if (params.x <= 0) fail(Errc::param_error, "x must be positive");
  LogRatioInfo lr = floor_log_ratio(params.xi, params.eta);
  PredictedD out;
  if (lr.integral) {
    if (params.x >= integer_case_threshold(params.xi, params.eta)) {
      out.candidates = {lr.p - 1, lr.p};
      out.sharp = true;
      return out;
    }
  } else if (params.x >= eq35_threshold(params.xi, params.eta)) {
    out.candidates = {lr.p};
    out.sharp = true;
    return out;
  }
  // Weak fallback: the full range 1..ceil(log xi / log eta).
  for (long i = 1; i <= lr.ceil(); ++i) out.candidates.push_back(i);
  return out;
}

std::optional<DegeneracyRecord> degenerate_check(const EtaCovering& cov) {
  const Rat& eta = cov.params.eta;
  long found = -1;
  Rat pw = eta;  // eta^(i+1)
  for (long i = 0; i <= cov.d; ++i) {
    if (pw * cov.params.x == cov.a[i]) found = i;
    pw *= eta;
  }
  if (found < 0) return std::nullopt;
  // Forced identities from the degeneracy; d >= 1 always, so b_1 exists.
  const Rat b0(cov.b[0]);
  const Rat b1(cov.b[1]);
  bool consistent = eta == b1 / b0 && cov.params.x == b0;
  Rat num = b1, den = 1;
  for (long j = 0; j <= found && consistent; ++j) {
    consistent = cov.a[j] == num / den;
    num *= b1;
    den *= b0;
  }
  if (!consistent)
    fail(Errc::consequence_violation,
         "degenerate covering violates the forced identities at i = " +
             std::to_string(found));
  return DegeneracyRecord{found};
}

WitnessResult witness_integer(const seqcore::CountingOracle& oracle,
                              const CoveringParams& params) {
  check_params(params.xi, params.eta);
  RatInterval m = m_threshold(params.xi, params.eta);
  if (params.x < m.hi)
    fail(Errc::threshold_unmet, "x = " + rat_to_string(params.x) +
                                    " below M(xi,eta) <= " + rat_to_string(m.hi));
  EtaCovering cov = build_eta_covering(params);
  if (oracle.horizon() && Rat(cov.b[0]) > *oracle.horizon())
    fail(Errc::horizon_exceeded, "covering right end beyond oracle horizon");

  std::vector<intervals::HalfOpenInterval> ivs;
  ivs.reserve(cov.b.size());
  for (std::size_t i = 0; i < cov.b.size(); ++i)
    ivs.push_back({cov.a[i], Rat(cov.b[i])});
  intervals::HalfOpenInterval target{params.xi * params.x, params.x};
  auto pick = intervals::pigeonhole_select(oracle, ivs, target);

  WitnessResult w;
  w.n = cov.b[pick.index];
  w.covering_index = pick.index;
  w.achieved = pick.ratio;  // a_j = eta b_j, so this is the eta-window ratio at n
  Rat fx = Rat(oracle.count_leq(params.x) - oracle.count_leq(target.a));
  w.bound = fx / ((1 - params.xi * rpow(params.eta, 3)) * params.x);
  if (w.achieved < w.bound)
    fail(Errc::consequence_violation, "witness inequality failed");  // cannot happen
  return w;
}

Rat delta_for(const Rat& xi, const Rat& eps) {
  if (!(xi > 0 && xi < 1)) fail(Errc::param_error, "xi must lie in (0,1)");
  if (!(eps > 0 && eps < 1)) fail(Errc::param_error, "eps must lie in (0,1)");
  if (eps >= xi) return xi;  // the inequality is vacuous below xi
  Rat w = (xi - eps) / (xi * (1 - eps));  // need eta^3 > w
  unsigned digits = 12;
  for (;;) {
    Rat delta = nth_root_upper(w, 3, digits);
    if (delta < 1) {
      if (rpow(delta, 3) < w) fail(Errc::consequence_violation, "cube-root bound failed");
      return std::max(delta, xi);
    }
    digits += 12;  // w close to 1; tighten until the bound drops below 1
    if (digits > 200) fail(Errc::param_error, "delta_for failed to converge");
  }
}

}  // namespace denslab::covering
