#pragma once

#include "denslab/rational.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace denslab::lemma_suite {

// Randomized exact check suites. Every comparison inside a suite is exact
// rational arithmetic; a nonzero failure count means a broken implementation,
// never numerical noise. All suites are deterministic given (trials, seed).
struct SuiteResult {
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::map<std::string, std::size_t> failed_by_check;

  void merge(const SuiteResult& other);
};

// eta-covering construction: recursion identities, chain inequalities,
// d-minimality, both d bounds, the total-length bound, containment of d in
// the predicted set, and agreement with an independent naive recursion.
// Instances are generated with x above every applicable threshold.
SuiteResult run_covering_suite(std::size_t trials, std::uint64_t seed);

// Interval splitting: geometric splits (count formula, exact ratio bounds,
// directed endpoint rendering) and eta-splits (telescoping union, ratios).
SuiteResult run_split_suite(std::size_t trials, std::uint64_t seed);

// Pigeonhole selection over random oracles and coverings: the selected
// window dominates the average bound, exactly.
SuiteResult run_pigeonhole_suite(std::size_t trials, std::uint64_t seed);

// Ceiling-iteration bounds eta^m x <= f^m(ceil x) <= eta^m x + sum eta^k
// and the geometric-series cap 1/(1-eta).
SuiteResult run_iterate_suite(std::size_t trials, std::uint64_t seed);

// Witness integers over the bundled oracles (identity, doubled, block):
// the returned n satisfies the window-domination inequality exactly.
SuiteResult run_witness_suite(std::size_t trials, std::uint64_t seed);

// delta_for guarantee: every eta sampled in (delta, 1) satisfies
// 1 - xi eta^3 < (1-xi)/(1-eps), exactly.
SuiteResult run_delta_suite(std::size_t trials, std::uint64_t seed);

// All of the above with a shared trial count.
SuiteResult run_all(std::size_t trials, std::uint64_t seed);

}  // namespace denslab::lemma_suite
