#pragma once

#include "denslab/intervals.hpp"
#include "denslab/rational.hpp"
#include "denslab/seqcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace denslab::density {

enum class Sampling { integer, real_geometric };

struct EstimatorConfig {
  std::vector<Rat> xi_grid;  // each in (0,1)
  Rat t0, t;                 // tail window, 0 < t0 < t
  Sampling sampling = Sampling::integer;
  Rat gamma = Rat(1001, 1000);  // geometric grid factor (> 1)
  bool merge_integers = true;   // real sampling: include all integers in [t0, t]
};
void validate_config(const EstimatorConfig& c);

// Sample abscissae of the window sup. Integer sampling: every integer in
// [t0, t]. Real sampling: the geometric grid t0 * gamma^j (grid points are
// placed in double precision and converted exactly), optionally merged with
// the integers.
std::vector<Rat> sample_points(const EstimatorConfig& c);

// Gap-debiased window ratio max(0, F(x) - F(xi x) - 1) / ((1 - xi) x).
// Subtracting one count removes the boundary inflation of narrow windows
// (which otherwise pushes the sup above the true density by the term
// granularity / window length); the debiased and raw ratios share the same
// x -> infinity limsup.
Rat window_value(const seqcore::CountingOracle& oracle, const Rat& xi, const Rat& x);

struct XiRow {
  Rat xi;
  Rat phat;        // sup of window_value over the sample set
  Rat x_star;      // smallest abscissa attaining it
  Rat phat_drift;  // same sup restricted to x >= 4*t0
};

struct DensityReport {
  EstimatorConfig config;
  std::vector<XiRow> rows;
  Rat phat;  // max over the xi grid; a lower-bound-style estimate
  Rat xi_star, x_star;
  std::size_t sample_count = 0;
};
DensityReport polya_estimate(const seqcore::CountingOracle& oracle,
                             const EstimatorConfig& config);

// g(s): the same tail-sup with the window factor e^{-s} replaced by a
// certified rational approximation rho(s) (upper bound within 1e-12).
struct GSample {
  Rat s;
  Rat rho;
  Rat value;
};
GSample g_eval(const seqcore::CountingOracle& oracle, const Rat& s,
               const EstimatorConfig& config);

// Constructs a GSample carrying an externally computed value (used when g
// is known analytically).
inline GSample g_sample(const Rat& s, const Rat& value) { return {s, Rat(0), value}; }

struct FeketeViolation {
  Rat a, b;
  Rat magnitude;  // g(a+b) - sup_w [w g(a) + (1-w) g(b)] over the w enclosure
};

// Tests g(a+b) <= w g(a) + (1-w) g(b), w = phi(a)/phi(a+b), phi(t) = 1-e^{-t},
// over every pair (a, b) of sample arguments whose sum is also sampled
// (up to pair_budget pairs, in deterministic order). The weight is evaluated
// as a certified enclosure and the comparison uses its worst side, so a
// reported violation is a real one at tolerance tau.
std::vector<FeketeViolation> fekete_check(const std::vector<GSample>& samples,
                                          std::size_t pair_budget, const Rat& tau);

struct Extraction {
  intervals::IntervalFamily family;  // {(xi y_k, y_k]} with a geo(1/xi) tail
  intervals::EllEstimate ell;
  std::vector<Rat> y;  // extracted witnesses
};

// Greedy subsequence extraction: y_1 = first witness, y_{k+1} = first
// witness >= y_k / xi. Throws TooFewWitnesses when fewer than two survive.
Extraction extract_polya_family(const seqcore::CountingOracle& oracle, const Rat& xi,
                                const std::vector<Rat>& witnesses);

struct CompareRow {
  Rat xi;
  Rat phat_xi;
  std::size_t witnesses = 0;
  bool extracted = false;
  std::string note;  // extraction failure reason, if any
  std::optional<Extraction> extraction;
  std::optional<intervals::Certificate> certificate;
};

struct ConsistencyReport {
  DensityReport density;
  std::vector<CompareRow> rows;
  Rat best_ell;   // max of ell over the certified rows
  Rat gap;        // |phat - best_ell|
  bool any_certified = false;
  Rat rate_slack;        // certificates are requested at R = phat - rate_slack
  Rat witness_rel_tol;   // witnesses: window_value >= (1 - tol) * phat(xi)
};

// Desk-scale evidence for "upper Polya density == BM density over (1,inf]":
// estimates phat, extracts a family from near-sup abscissae per xi,
// certifies each family at R = phat - rate_slack and reports |phat - ell|.
ConsistencyReport compare_bm_polya(const seqcore::CountingOracle& oracle,
                                   const EstimatorConfig& config,
                                   const Rat& rate_slack = Rat(1, 20),
                                   const Rat& witness_rel_tol = Rat(1, 100));

}  // namespace denslab::density
