#include "denslab/lemma_suite.hpp"

#include "denslab/covering.hpp"
#include "denslab/errors.hpp"
#include "denslab/intervals.hpp"
#include "denslab/seqcore.hpp"

#include <algorithm>
#include <random>

namespace denslab::lemma_suite {

namespace {

using covering::CoveringParams;
using covering::EtaCovering;
using intervals::HalfOpenInterval;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  // Deterministic across platforms (no std::uniform_int_distribution).
  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  Rat rat(long lo_num, long hi_num, long den) {  // uniform p/den, p in [lo,hi]
    return Rat(range(lo_num, hi_num), den);
  }
};

struct Recorder {
  SuiteResult& res;
  void check(const std::string& name, bool ok) {
    ++res.checks;
    if (!ok) {
      ++res.failures;
      ++res.failed_by_check[name];
    }
  }
};

// Draws (xi, eta) with eta of small denominator and log xi / log eta capped,
// so every exact power computation stays small. With integral = true the
// pair satisfies eta^q == xi exactly.
CoveringParams draw_params(Rng& rng, bool integral, long max_q) {
  long den = rng.range(4, 40);
  long num = rng.range(den / 3 + 1, den - den / 12 - 1);
  if (num <= 0) num = 1;
  if (num >= den) num = den - 1;
  Rat eta(num, den);
  // q >= 2 keeps xi strictly below eta in both branches.
  long q = rng.range(2, max_q);
  Rat xi;
  if (integral) {
    xi = rpow(eta, q);
  } else {
    // strictly between eta^q and eta^(q-1)
    Rat t = rng.rat(2, 14, 16);
    xi = rpow(eta, q) * (1 - t) + rpow(eta, q - 1) * t;
  }
  return {Rat(0), xi, eta};
}

// Independent naive recursion for d: a deliberately different code path
// (ceiling via explicit integer division on the sign-free case).
long brute_force_d(const CoveringParams& p) {
  auto ceil_pos = [](const Rat& v) {
    Int n = numerator(v), d = denominator(v);
    return (n + d - 1) / d;
  };
  Rat target = p.xi * p.x;
  Int b = ceil_pos(p.x);
  long d = 0;
  for (;;) {
    Rat a = p.eta * b;
    if (a <= target) return d;
    b = ceil_pos(a);
    ++d;
    if (d > 10000000) fail(Errc::stalled_recursion, "brute-force recursion diverged");
  }
}

}  // namespace

void SuiteResult::merge(const SuiteResult& other) {
  trials += other.trials;
  checks += other.checks;
  failures += other.failures;
  for (const auto& [k, v] : other.failed_by_check) failed_by_check[k] += v;
}

SuiteResult run_covering_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.trials = trials;
  Recorder rec{res};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    bool integral = t % 4 == 0;
    CoveringParams p = draw_params(rng, integral, 18);
    // x above every threshold: chain, d bound, total length, predicted d.
    Rat thr = covering::d_bound_threshold(p.xi, p.eta);
    thr = std::max(thr, covering::m_threshold(p.xi, p.eta).hi);
    thr = std::max(thr, integral ? covering::integer_case_threshold(p.xi, p.eta)
                                 : covering::eq35_threshold(p.xi, p.eta));
    p.x = Rat(ceil_rat(thr)) + rng.range(0, 999) + rng.rat(0, 7, 8);

    EtaCovering cov = covering::build_eta_covering(p);
    auto checks = covering::verify_covering(cov);
    using covering::CheckStatus;
    rec.check("recursion", checks.recursion == CheckStatus::pass);
    rec.check("d_minimal", checks.d_minimal == CheckStatus::pass);
    rec.check("chain", checks.chain == CheckStatus::pass);
    rec.check("d_bound_ceil", checks.d_bound_ceil == CheckStatus::pass);
    rec.check("d_bound_plus1", checks.d_bound_plus1 == CheckStatus::pass);
    rec.check("total_length", checks.total_length == CheckStatus::pass);
    rec.check("coverage", checks.coverage == CheckStatus::pass);
    rec.check("overlaps", checks.overlaps == CheckStatus::pass);

    auto pred = covering::predicted_d(p);
    rec.check("predicted_sharp", pred.sharp);
    rec.check("predicted_contains_d",
              std::find(pred.candidates.begin(), pred.candidates.end(), cov.d) !=
                  pred.candidates.end());
    rec.check("brute_force_d", brute_force_d(p) == cov.d);

    if (degenerate_check(cov)) {
      // consequences already verified inside; count the sighting
      rec.check("degenerate_consistent", true);
    }
  }
  return res;
}

SuiteResult run_split_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.trials = trials;
  Recorder rec{res};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rat a = rng.rat(1, 4000, rng.range(1, 9));
    Rat b = a + rng.rat(1, 6000, rng.range(1, 7));
    // geometric split with k in (1, 8]
    Rat k = 1 + rng.rat(1, 112, 16);
    auto gs = intervals::split_geometric(a, b, k);
    Rat q = b / a;
    rec.check("geo_r_formula",
              rpow(k, gs.r - 1) <= q || gs.r == 1);  // k^(r-1) <= b/a (maximality)
    rec.check("geo_ratio_bound", q <= rpow(k, gs.r));  // alpha <= k exactly
    rec.check("geo_endpoints", gs.endpoint(0).lower(20) == a &&
                                   gs.endpoint(gs.r).lower(20) == b);
    // directed rendering brackets the true power: lower^r <= a^r q^i <= upper^r
    long i = rng.range(0, gs.r);
    auto ep = gs.endpoint(i);
    Rat lo = ep.lower(25), hi = ep.upper(25);
    Rat core = rpow(a, gs.r) * rpow(q, i);
    rec.check("geo_rendering",
              rpow(lo, gs.r) <= core && core <= rpow(hi, gs.r) && hi - lo <= Rat(1, 1000000));

    // eta split with eta in (1, 4]
    Rat eta = 1 + rng.rat(1, 48, 16);
    auto ivs = intervals::split_eta(a, b, eta);
    bool consec = ivs.front().a == a && ivs.back().b == b;
    for (std::size_t j = 1; j < ivs.size(); ++j)
      consec = consec && ivs[j].a == ivs[j - 1].b;
    rec.check("eta_telescopes", consec);
    bool ratios = true;
    for (std::size_t j = 0; j + 1 < ivs.size(); ++j)
      ratios = ratios && ivs[j].ratio() == eta;
    ratios = ratios && ivs.back().ratio() <= eta;
    rec.check("eta_ratios", ratios);
    rec.check("eta_r_maximal", rpow(eta, static_cast<long>(ivs.size()) - 1) * a < b ||
                                   ivs.size() == 1);
  }
  return res;
}

SuiteResult run_pigeonhole_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.trials = trials;
  Recorder rec{res};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto oracle = seqcore::build_sequence(seqcore::ArithmeticProgression{
        rng.rat(1, 12, 4), rng.rat(0, 20, 5)});
    Rat a = rng.rat(1, 400, 4);
    Rat b = a + rng.rat(1, 800, 2);
    Rat eta = 1 + rng.rat(1, 24, 8);
    auto cov = intervals::split_eta(a, b, eta);
    // overlaps and clutter are allowed by the lemma: duplicate an interval
    // and stretch another's right end.
    if (cov.size() > 1 && t % 2 == 0) {
      cov.push_back(cov[rng.range(0, static_cast<long>(cov.size()) - 1)]);
      cov[0].b += rng.rat(1, 8, 4);
    }
    auto pick = intervals::pigeonhole_select(oracle, cov, {a, b});
    rec.check("pigeonhole_bound", pick.ratio >= pick.bound);
    bool minimal = true;
    for (std::size_t j = 0; j < pick.index; ++j)
      minimal = minimal &&
                oracle.window_ratio(cov[j].a, cov[j].b) < pick.ratio;
    rec.check("pigeonhole_smallest_index", minimal);
  }
  return res;
}

SuiteResult run_iterate_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.trials = trials;
  Recorder rec{res};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rat x = rng.rat(1, 100000, rng.range(1, 9));
    long den = rng.range(3, 24);
    Rat eta(rng.range(1, den - 1), den);
    unsigned m = static_cast<unsigned>(rng.range(0, 28));
    Int v = covering::ceil_eta_iterate(x, eta, m);
    Rat em = rpow(eta, static_cast<long>(m));
    Rat geo = (1 - rpow(eta, static_cast<long>(m) + 1)) / (1 - eta);  // sum_{k<=m} eta^k
    rec.check("iterate_lower", em * x <= Rat(v));
    rec.check("iterate_upper", Rat(v) <= em * x + geo);
    rec.check("iterate_series_cap", Rat(v) - em * x <= covering::s_eta(eta));
  }
  return res;
}

SuiteResult run_witness_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.trials = trials;
  Recorder rec{res};
  Rng rng(seed);

  std::vector<seqcore::CountingOracle> oracles;
  oracles.push_back(seqcore::build_sequence(seqcore::ArithmeticProgression{Rat(1), Rat(0)}));
  oracles.push_back(seqcore::build_sequence(seqcore::ArithmeticProgression{Rat(2), Rat(0)}));
  {
    seqcore::BlockIntegers blocks;
    for (long k = 0; k <= 8; ++k)
      blocks.blocks.push_back({rpow(Rat(4), k), 2 * rpow(Rat(4), k)});
    oracles.push_back(seqcore::build_sequence(blocks));
  }
  const Rat max_x(60000);

  for (std::size_t t = 0; t < trials; ++t) {
    CoveringParams p;
    Rat m_hi;
    for (int attempt = 0;; ++attempt) {
      long den = rng.range(5, 40);
      long num = rng.range(2 * den / 5, den - den / 12 - 1);
      Rat eta(num, den);
      long q = rng.range(2, 4);
      Rat t_mix = rng.rat(2, 14, 16);
      Rat xi = t % 5 == 0 ? rpow(eta, q)
                          : rpow(eta, q) * (1 - t_mix) + rpow(eta, q - 1) * t_mix;
      if (!(xi > 0 && xi < eta)) continue;
      p = {Rat(0), xi, eta};
      m_hi = covering::m_threshold(xi, eta).hi;
      if (m_hi <= max_x) break;
      if (attempt > 200) fail(Errc::validation, "witness generator stalled");
    }
    p.x = m_hi + rng.range(0, 1000) + rng.rat(0, 7, 8);
    const auto& oracle = oracles[t % oracles.size()];
    auto w = covering::witness_integer(oracle, p);
    Rat lhs = Rat(oracle.count_leq(Rat(w.n)) - oracle.count_leq(p.eta * w.n)) /
              ((1 - p.eta) * w.n);
    rec.check("witness_inequality", lhs >= w.bound);
    rec.check("witness_ratio_reported", lhs == w.achieved);
  }
  return res;
}

SuiteResult run_delta_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.trials = trials;
  Recorder rec{res};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rat xi = rng.rat(1, 97, 98);
    Rat eps = rng.rat(1, 97, 98);
    Rat delta = covering::delta_for(xi, eps);
    rec.check("delta_range", delta >= xi && delta < 1);
    Rat rhs = (1 - xi) / (1 - eps);
    bool ok = true;
    for (long j = 1; j <= 12; ++j) {
      Rat eta = delta + (1 - delta) * Rat(j, 13);
      ok = ok && 1 - xi * rpow(eta, 3) < rhs;
    }
    rec.check("delta_guarantee", ok);
  }
  return res;
}

SuiteResult run_all(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.merge(run_covering_suite(trials, seed));
  res.merge(run_split_suite(trials, seed + 1));
  res.merge(run_pigeonhole_suite(trials, seed + 2));
  res.merge(run_iterate_suite(trials, seed + 3));
  res.merge(run_witness_suite(trials / 4 + 1, seed + 4));
  res.merge(run_delta_suite(trials, seed + 5));
  return res;
}

}  // namespace denslab::lemma_suite
