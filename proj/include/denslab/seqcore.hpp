#pragma once

#include "denslab/rational.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace denslab::seqcore {

// lambda_n = offset + step * n, n = 1, 2, ...
struct ArithmeticProgression {
  Rat step;    // > 0
  Rat offset;  // >= 0
};

// lambda_n = P(n) with integer coefficients; must be strictly increasing
// over n = 1, 2, ... and P(1) >= 0.
struct PolynomialValues {
  std::vector<Int> coeffs;  // coeffs[i] multiplies n^i
};

struct PrimesUpTo {
  long bound;  // > 0
};

// Lambda = integers lying in the union of the half-open ranges (lo, hi].
struct BlockIntegers {
  std::vector<std::pair<Rat, Rat>> blocks;
};

// Optional symbolic continuation of an explicit list: after the last listed
// term the sequence continues arithmetically with the given step.
struct ArithmeticTail {
  Rat step;  // > 0
};

struct ExplicitList {
  std::vector<Rat> terms;  // strictly increasing, terms[0] >= 0
  std::optional<ArithmeticTail> tail;
};

struct FileBacked {
  std::string path;
};

using SequenceSpec = std::variant<ArithmeticProgression, PolynomialValues,
                                  PrimesUpTo, BlockIntegers, ExplicitList,
                                  FileBacked>;

// A sequence packaged as an exact evaluator of its counting function
// F(t) = #{ n : lambda_n <= t } (with F(0) = 0 by definition). Immutable
// after construction; safe to share across threads.
class CountingOracle {
 public:
  Int count_leq(const Rat& t) const;

  // (F(b) - F(a)) / (b - a), exact. Requires 0 <= a < b <= horizon.
  Rat window_ratio(const Rat& a, const Rat& b) const;

  // Largest t at which F is trustworthy; nullopt for unbounded variants.
  const std::optional<Rat>& horizon() const { return horizon_; }

  const std::string& describe() const { return describe_; }

  struct Impl;
  explicit CountingOracle(std::shared_ptr<const Impl> impl);

 private:
  void check_horizon(const Rat& t) const;
  std::shared_ptr<const Impl> impl_;
  std::optional<Rat> horizon_;
  std::string describe_;
};

// Validates the spec (strict increase, first term >= 0) and returns the
// oracle. Throws ValidationError on repetitions, decreasing terms or a
// negative first term, IoError for an unreadable file.
CountingOracle build_sequence(const SequenceSpec& spec);

Int count_leq(const CountingOracle& o, const Rat& t);
Rat window_ratio(const CountingOracle& o, const Rat& a, const Rat& b);

// Sequence file format: one term per line, decimal or "p/q" literals,
// strictly increasing, '#' starts a comment.
std::vector<Rat> parse_sequence_stream(std::istream& in);

}  // namespace denslab::seqcore
