#include "denslab/seqcore.hpp"

#include "denslab/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace denslab::seqcore {

namespace {

Int poly_eval(const std::vector<Int>& coeffs, const Int& n) {
  Int v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * n + *it;
  return v;
}

std::vector<long> sieve_primes(long bound) {
  std::vector<bool> comp(static_cast<std::size_t>(bound) + 1, false);
  std::vector<long> primes;
  for (long i = 2; i <= bound; ++i) {
    if (comp[i]) continue;
    primes.push_back(i);
    for (long j = i; j <= bound / i; ++j) comp[i * j] = true;
  }
  return primes;
}

std::string rat_pair(const Rat& a, const Rat& b) {
  return rat_to_string(a) + "," + rat_to_string(b);
}

}  // namespace

struct CountingOracle::Impl {
  struct Arith {
    Rat step, offset;
  };
  struct Poly {
    std::vector<Int> coeffs;
  };
  struct Primes {
    std::vector<long> primes;
    long bound;
  };
  struct Blocks {
    std::vector<std::pair<Rat, Rat>> blocks;
  };
  struct Listed {
    std::vector<Rat> terms;
    std::optional<ArithmeticTail> tail;
  };
  std::variant<Arith, Poly, Primes, Blocks, Listed> eval;
  std::optional<Rat> horizon;
  std::string describe;

  Int count(const Rat& t) const {
    if (t <= 0) return 0;  // F(0) = 0 by definition; terms are >= 0
    return std::visit([&](const auto& e) { return count_impl(e, t); }, eval);
  }

  static Int count_impl(const Arith& a, const Rat& t) {
    // #{n >= 1 : offset + step*n <= t}
    Rat n = (t - a.offset) / a.step;
    Int f = floor_rat(n);
    return f < 0 ? Int(0) : f;
  }

  static Int count_impl(const Poly& p, const Rat& t) {
    // P is strictly increasing over n >= 1; binary search the last n with
    // P(n) <= t.
    if (Rat(poly_eval(p.coeffs, 1)) > t) return 0;
    Int lo = 1, hi = 2;
    while (Rat(poly_eval(p.coeffs, hi)) <= t) {
      lo = hi;
      hi *= 2;
    }
    while (hi - lo > 1) {
      Int mid = (lo + hi) / 2;
      if (Rat(poly_eval(p.coeffs, mid)) <= t)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  static Int count_impl(const Primes& ps, const Rat& t) {
    Int ft = floor_rat(t);
    if (ft < 2) return 0;
    long v = ft.convert_to<long>();
    auto it = std::upper_bound(ps.primes.begin(), ps.primes.end(), v);
    return Int(it - ps.primes.begin());
  }

  static Int count_impl(const Blocks& bs, const Rat& t) {
    // integers in (lo, min(hi, t)] summed over blocks
    Int total = 0;
    for (const auto& [lo, hi] : bs.blocks) {
      if (t <= lo) break;  // blocks are sorted
      const Rat& u = t < hi ? t : hi;
      total += floor_rat(u) - floor_rat(lo);
    }
    return total;
  }

  static Int count_impl(const Listed& ls, const Rat& t) {
    auto it = std::upper_bound(ls.terms.begin(), ls.terms.end(), t);
    Int n = Int(it - ls.terms.begin());
    if (ls.tail && it == ls.terms.end() && !ls.terms.empty()) {
      const Rat& last = ls.terms.back();
      if (t > last) n += floor_rat((t - last) / ls.tail->step);
    }
    return n;
  }
};

CountingOracle::CountingOracle(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)), horizon_(impl_->horizon), describe_(impl_->describe) {}

void CountingOracle::check_horizon(const Rat& t) const {
  if (horizon_ && t > *horizon_)
    fail(Errc::horizon_exceeded,
         "t = " + rat_to_string(t) + " beyond horizon " + rat_to_string(*horizon_));
}

Int CountingOracle::count_leq(const Rat& t) const {
  if (t < 0) fail(Errc::validation, "count_leq needs t >= 0");
  check_horizon(t);
  return impl_->count(t);
}

Rat CountingOracle::window_ratio(const Rat& a, const Rat& b) const {
  if (a < 0 || a >= b) fail(Errc::invalid_window, "window needs 0 <= a < b");
  check_horizon(b);
  return Rat(impl_->count(b) - impl_->count(a)) / (b - a);
}

Int count_leq(const CountingOracle& o, const Rat& t) { return o.count_leq(t); }

Rat window_ratio(const CountingOracle& o, const Rat& a, const Rat& b) {
  return o.window_ratio(a, b);
}

namespace {

void validate_listed(const std::vector<Rat>& terms) {
  if (terms.empty()) fail(Errc::validation, "sequence has no terms");
  if (terms.front() < 0) fail(Errc::validation, "first term is negative");
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i] <= terms[i - 1])
      fail(Errc::validation, "terms must be strictly increasing (index " +
                                 std::to_string(i + 1) + ")");
}

using Impl = CountingOracle::Impl;

Impl make_impl(const ArithmeticProgression& a) {
  if (a.step <= 0) fail(Errc::validation, "arithmetic step must be positive");
  if (a.offset < 0) fail(Errc::validation, "arithmetic offset must be nonnegative");
  Impl im;
  im.eval = Impl::Arith{a.step, a.offset};
  im.describe = "arith:" + rat_pair(a.step, a.offset);
  return im;
}

Impl make_impl(const PolynomialValues& p) {
  if (p.coeffs.empty()) fail(Errc::validation, "polynomial has no coefficients");
  std::vector<Int> c = p.coeffs;
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (poly_eval(c, 1) < 0) fail(Errc::validation, "P(1) is negative");
  // D(n) = P(n+1) - P(n) must be positive for every n >= 1. Expand D
  // exactly; with a positive leading coefficient it is positive beyond the
  // Cauchy root bound, so only finitely many n need an explicit check.
  if (c.size() < 2) fail(Errc::validation, "constant polynomial never increases");
  std::vector<Int> d(c.size() - 1, 0);
  {
    // P(n+1) = sum_i c[i] (n+1)^i via binomials
    std::vector<Int> shifted(c.size(), 0);
    std::vector<std::vector<Int>> binom(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      binom[i].assign(i + 1, 1);
      for (std::size_t j = 1; j < i; ++j)
        binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
    }
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) shifted[j] += c[i] * binom[i][j];
    for (std::size_t j = 0; j + 1 < c.size(); ++j) d[j] = shifted[j] - c[j];
  }
  while (d.size() > 1 && d.back() == 0) d.pop_back();
  if (d.back() <= 0)
    fail(Errc::validation, "polynomial is not eventually increasing");
  Int maxc = 0;
  for (const Int& v : d) {
    Int av = abs(v);
    if (av > maxc) maxc = av;
  }
  Int bound = 1 + maxc / d.back() + 1;
  for (Int n = 1; n <= bound; ++n)
    if (poly_eval(d, n) <= 0)
      fail(Errc::validation, "polynomial values are not strictly increasing at n = " + n.str());
  Impl im;
  im.eval = Impl::Poly{c};
  std::string desc = "poly:";
  for (std::size_t i = 0; i < c.size(); ++i) desc += (i ? "," : "") + c[i].str();
  im.describe = desc;
  return im;
}

Impl make_impl(const PrimesUpTo& p) {
  if (p.bound <= 0) fail(Errc::validation, "prime bound must be positive");
  if (p.bound > 100000000) fail(Errc::validation, "prime bound above 1e8 not supported");
  Impl im;
  im.eval = Impl::Primes{sieve_primes(p.bound), p.bound};
  im.horizon = Rat(p.bound);
  im.describe = "primes:" + std::to_string(p.bound);
  return im;
}

Impl make_impl(const BlockIntegers& b) {
  if (b.blocks.empty()) fail(Errc::validation, "no blocks given");
  auto blocks = b.blocks;
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  Rat prev_hi(-1);
  for (const auto& [lo, hi] : blocks) {
    if (lo < 0) fail(Errc::validation, "block start must be nonnegative");
    if (hi <= lo) fail(Errc::validation, "block must satisfy lo < hi");
    if (lo < prev_hi) fail(Errc::validation, "blocks overlap");
    prev_hi = hi;
  }
  Impl im;
  std::string desc = "blocks:";
  for (std::size_t i = 0; i < blocks.size(); ++i)
    desc += (i ? ";" : "") + rat_pair(blocks[i].first, blocks[i].second);
  im.horizon = blocks.back().second;
  im.eval = Impl::Blocks{std::move(blocks)};
  im.describe = desc;
  return im;
}

Impl make_impl(const ExplicitList& l) {
  validate_listed(l.terms);
  Impl im;
  if (l.tail) {
    if (l.tail->step <= 0) fail(Errc::validation, "tail step must be positive");
  } else {
    im.horizon = l.terms.back();
  }
  std::string desc = "list:";
  for (std::size_t i = 0; i < l.terms.size(); ++i)
    desc += (i ? "," : "") + rat_to_string(l.terms[i]);
  if (l.tail) desc += ";tail-arith:" + rat_to_string(l.tail->step);
  im.eval = Impl::Listed{l.terms, l.tail};
  im.describe = desc;
  return im;
}

Impl make_impl(const FileBacked& f) {
  std::ifstream in(f.path);
  if (!in) fail(Errc::io_error, "cannot open sequence file '" + f.path + "'");
  std::vector<Rat> terms = parse_sequence_stream(in);
  validate_listed(terms);
  Impl im;
  im.horizon = terms.back();
  im.describe = "file:" + f.path;
  im.eval = Impl::Listed{std::move(terms), std::nullopt};
  return im;
}

}  // namespace

CountingOracle build_sequence(const SequenceSpec& spec) {
  Impl im = std::visit([](const auto& s) { return make_impl(s); }, spec);
  return CountingOracle(std::make_shared<const Impl>(std::move(im)));
}

std::vector<Rat> parse_sequence_stream(std::istream& in) {
  std::vector<Rat> terms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) continue;
    try {
      terms.push_back(parse_rat(t));
    } catch (const Error&) {
      fail(Errc::validation, "bad term at line " + std::to_string(lineno));
    }
  }
  return terms;
}

}  // namespace denslab::seqcore
