#include <doctest.h>

#include "denslab/errors.hpp"
#include "denslab/intervals.hpp"
#include "denslab/seqcore.hpp"

#include <random>

using namespace denslab;
using namespace denslab::intervals;

namespace {

seqcore::CountingOracle identity_oracle() {
  return seqcore::build_sequence(seqcore::ArithmeticProgression{Rat(1), Rat(0)});
}

seqcore::CountingOracle doubled_oracle() {
  return seqcore::build_sequence(seqcore::ArithmeticProgression{Rat(2), Rat(0)});
}

seqcore::CountingOracle block_oracle() {
  seqcore::BlockIntegers b;
  for (long k = 0; k <= 8; ++k)
    b.blocks.push_back({rpow(Rat(4), k), 2 * rpow(Rat(4), k)});
  return seqcore::build_sequence(b);
}

IntervalFamily geo2_family() { return {{}, ConstantRatio{Rat(2)}}; }

}  // namespace

TEST_CASE("family validation") {
  IntervalFamily bad{{{Rat(2), Rat(1)}}, FinitePrefixOnly{}};
  CHECK_THROWS_AS(validate_family(bad), Error);
  IntervalFamily overlap{{{Rat(1), Rat(3)}, {Rat(2), Rat(4)}}, FinitePrefixOnly{}};
  CHECK_THROWS_AS(validate_family(overlap), Error);
  CHECK_THROWS_AS(validate_family({{}, ConstantRatio{Rat(1)}}), Error);
  CHECK_THROWS_AS(validate_family({{}, PowerRatio{Rat(0), Rat(1)}}), Error);
  // touching intervals are fine
  validate_family({{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}, FinitePrefixOnly{}});
}

TEST_CASE("realize continues the prefix") {
  auto ivs = realize(geo2_family(), 5);
  REQUIRE(ivs.size() == 5);
  CHECK(ivs[0].a == 1);
  CHECK(ivs[0].b == 2);
  CHECK(ivs[4].a == 16);
  CHECK(ivs[4].b == 32);

  IntervalFamily mixed{{{Rat(3), Rat(6)}}, ConstantRatio{Rat(3)}};
  auto m = realize(mixed, 3);
  CHECK(m[1].a == 6);
  CHECK(m[1].b == 18);
  CHECK(m[2].b == 54);

  IntervalFamily finite{{{Rat(1), Rat(2)}}, FinitePrefixOnly{}};
  CHECK_THROWS_AS(realize(finite, 2), Error);
}

TEST_CASE("substantiality verdicts") {
  auto rep = substantiality_report(geo2_family(), 10);
  CHECK(rep.partial_sum == 10);  // ten terms of (2-1)^2
  CHECK(rep.verdict == Verdict::substantial);

  auto p1 = substantiality_report({{}, PowerRatio{Rat(1), Rat(1)}}, 10);
  CHECK(p1.verdict == Verdict::not_substantial);

  auto phalf = substantiality_report({{}, PowerRatio{Rat(1), Rat(1, 2)}}, 10);
  CHECK(phalf.verdict == Verdict::substantial);
  // terms are (n^{-1/2})^2 = 1/n: the sum sits just below H_10 = 2.9289...
  CHECK(phalf.partial_sum >= Rat(29, 10));
  CHECK(phalf.partial_sum <= Rat(2929, 1000));

  auto fin = substantiality_report({{{Rat(1), Rat(2)}}, FinitePrefixOnly{}}, 1);
  CHECK(fin.verdict == Verdict::undetermined);
  CHECK(fin.partial_sum == 1);
}

TEST_CASE("long_report partial sums") {
  IntervalFamily unit{{{Rat(1), Rat(2)}, {Rat(2), Rat(3)}, {Rat(3), Rat(4)}},
                      FinitePrefixOnly{}};
  CHECK(long_report(unit, 3) == Rat(1, 2) + Rat(1, 5) + Rat(1, 10));  // = 4/5

  IntervalFamily dyadic{{{Rat(2), Rat(4)}}, FinitePrefixOnly{}};
  CHECK(long_report(dyadic, 1) == Rat(4, 5));

  IntervalFamily empty{{}, FinitePrefixOnly{}};
  CHECK(long_report(empty, 0) == 0);
}

TEST_CASE("limsup class parsing and membership") {
  auto one = LimsupClass::parse("{1}");
  CHECK(one.contains(Rat(1)));
  CHECK(!one.contains(Rat(2)));
  CHECK(!one.contains_infinity());

  auto above1 = LimsupClass::parse("(1,inf]");
  CHECK(!above1.contains(Rat(1)));
  CHECK(above1.contains(Rat(2)));
  CHECK(above1.contains_infinity());

  auto seg = LimsupClass::parse("[1,2)");
  CHECK(seg.contains(Rat(1)));
  CHECK(seg.contains(Rat(3, 2)));
  CHECK(!seg.contains(Rat(2)));

  CHECK(LimsupClass::parse("2").contains(Rat(2)));
  CHECK_THROWS_AS(LimsupClass::parse("[0,1]"), Error);
  CHECK_THROWS_AS(LimsupClass::parse("[3,2]"), Error);
}

TEST_CASE("ratio_class reports") {
  auto r1 = ratio_class(geo2_family(), 10, LimsupClass::singleton(Rat(1)));
  REQUIRE(r1.symbolic_limsup.has_value());
  CHECK(*r1.symbolic_limsup == 2);
  CHECK(r1.member_of_a == Membership::not_member);
  CHECK(r1.finite_limsup_estimate == 2);

  auto r2 = ratio_class({{}, PowerRatio{Rat(1), Rat(1, 2)}}, 10,
                        LimsupClass::singleton(Rat(1)));
  CHECK(*r2.symbolic_limsup == 1);
  CHECK(r2.member_of_a == Membership::member);
  CHECK(r2.finite_limsup_estimate > 1);

  auto r3 = ratio_class(geo2_family(), 10, LimsupClass::parse("(1,inf]"));
  CHECK(r3.member_of_a == Membership::member);

  auto r4 = ratio_class({{{Rat(1), Rat(2)}}, FinitePrefixOnly{}}, 1,
                        LimsupClass::parse("(1,inf]"));
  CHECK(r4.member_of_a == Membership::undetermined);
}

TEST_CASE("split_geometric matches the proof formula") {
  auto g1 = split_geometric(Rat(1), Rat(8), Rat(2));
  CHECK(g1.r == 4);  // alpha = 8^(1/4)
  CHECK(g1.endpoint(0).lower(10) == 1);
  CHECK(g1.endpoint(4).lower(10) == 8);
  // 8^(1/4) = 1.68179283050742908606... (frozen reference)
  CHECK(g1.endpoint(1).decimal(10) == "1.6817928305");

  auto g2 = split_geometric(Rat(3), Rat(5), Rat(2));
  CHECK(g2.r == 1);  // b/a <= k: single interval

  auto g3 = split_geometric(Rat(1), Rat(16), Rat(4));
  CHECK(g3.r == 3);  // alpha = 16^(1/3) = 2.5198... <= 4
  // 16^(1/3) = 2.5198420997897...; 8-digit rounding carries and strips
  CHECK(g3.endpoint(1).decimal(8) == "2.5198421");

  CHECK_THROWS_AS(split_geometric(Rat(4), Rat(2), Rat(2)), Error);
  CHECK_THROWS_AS(split_geometric(Rat(1), Rat(8), Rat(1)), Error);
}

TEST_CASE("split_geometric rendering brackets the endpoints") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    Rat a(1 + static_cast<long>(rng() % 500), 1 + static_cast<long>(rng() % 6));
    Rat b = a + Rat(1 + static_cast<long>(rng() % 900), 1 + static_cast<long>(rng() % 4));
    Rat k = 1 + Rat(1 + static_cast<long>(rng() % 40), 8);
    auto gs = split_geometric(a, b, k);
    Rat q = b / a;
    CHECK(q <= rpow(k, gs.r));            // every ratio alpha <= k
    CHECK(rpow(k, gs.r - 1) <= q);        // r is minimal
    long i = static_cast<long>(rng() % (gs.r + 1));
    auto ep = gs.endpoint(i);
    Rat lo = ep.lower(20), hi = ep.upper(20);
    Rat core = rpow(a, gs.r) * rpow(q, i);  // the exact value of endpoint^r
    CHECK(rpow(lo, gs.r) <= core);
    CHECK(core <= rpow(hi, gs.r));
  }
}

TEST_CASE("split_eta produces exact rational splits") {
  auto s1 = split_eta(Rat(1), Rat(10), Rat(2));
  REQUIRE(s1.size() == 4);
  CHECK(s1[0].a == 1);
  CHECK(s1[0].b == 2);
  CHECK(s1[2].b == 8);
  CHECK(s1[3].a == 8);
  CHECK(s1[3].b == 10);

  auto s2 = split_eta(Rat(1), Rat(8), Rat(2));
  REQUIRE(s2.size() == 3);
  CHECK(s2[2].ratio() == 2);  // boundary case eta^r a = b

  auto s3 = split_eta(Rat(5), Rat(6), Rat(2));
  REQUIRE(s3.size() == 1);
  CHECK(s3[0].ratio() == Rat(6, 5));

  CHECK_THROWS_AS(split_eta(Rat(1), Rat(10), Rat(1)), Error);
  CHECK_THROWS_AS(split_eta(Rat(10), Rat(1), Rat(2)), Error);
}

TEST_CASE("pigeonhole_select") {
  auto id = identity_oracle();
  std::vector<HalfOpenInterval> cov{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  auto p1 = pigeonhole_select(id, cov, {Rat(1), Rat(4)});
  CHECK(p1.index == 0);  // ratios tie at 1; smallest index wins
  CHECK(p1.ratio == 1);

  // Lambda = {3, 3.5}: listed prefix with a far-away tail so the horizon
  // covers the target (counts in (1,4] are unaffected).
  auto sparse = seqcore::build_sequence(
      seqcore::ExplicitList{{Rat(3), Rat(7, 2)}, seqcore::ArithmeticTail{Rat(100)}});
  auto p2 = pigeonhole_select(sparse, cov, {Rat(1), Rat(4)});
  CHECK(p2.index == 1);
  CHECK(p2.ratio == 1);          // two terms in (2,4], length 2
  CHECK(p2.bound == Rat(2, 3));  // 2 counts over total length 3

  std::vector<HalfOpenInterval> single{{Rat(1), Rat(4)}};
  CHECK(pigeonhole_select(id, single, {Rat(1), Rat(4)}).index == 0);

  std::vector<HalfOpenInterval> gap{{Rat(1), Rat(2)}, {Rat(3), Rat(4)}};
  CHECK_THROWS_AS(pigeonhole_select(id, gap, {Rat(1), Rat(4)}), Error);
}

TEST_CASE("ell_estimate on dyadic families") {
  auto id = identity_oracle();
  auto e1 = ell_estimate(id, geo2_family(), 20);
  CHECK(e1.value == 1);
  CHECK(e1.diagnostic == 1);

  auto e2 = ell_estimate(doubled_oracle(), geo2_family(), 20);
  CHECK(e2.value == Rat(1, 2));

  IntervalFamily blocks{{}, FinitePrefixOnly{}};
  for (long k = 0; k <= 8; ++k)
    blocks.prefix.push_back({rpow(Rat(4), k), 2 * rpow(Rat(4), k)});
  auto e3 = ell_estimate(block_oracle(), blocks, 9);
  CHECK(e3.value == 1);
}

TEST_CASE("ell_estimate equals the constant window ratio") {
  IntervalFamily f{{}, ConstantRatio{Rat(3, 2)}};
  auto o = doubled_oracle();
  // window ratios vary; ell is their tail-window min, computed exactly
  auto e = ell_estimate(o, f, 16);
  auto ivs = realize(f, 16);
  Rat expect;
  bool have = false;
  for (std::size_t n = 8; n <= 16; ++n) {
    Rat r = o.window_ratio(ivs[n - 1].a, ivs[n - 1].b);
    if (!have || r < expect) {
      expect = r;
      have = true;
    }
  }
  CHECK(e.value == expect);
}

TEST_CASE("bm_certificate accepts and rejects per clause") {
  auto above1 = LimsupClass::parse("(1,inf]");
  auto id = identity_oracle();

  auto accept = bm_certificate(id, geo2_family(), 20, Rat(99, 100), above1);
  CHECK(accept.accepted);
  CHECK(accept.start_index == 1);
  CHECK(accept.substantial_verdict == Verdict::substantial);
  for (const auto& r : accept.transcript) CHECK(r == 1);

  auto reject_ratio = bm_certificate(doubled_oracle(), geo2_family(), 20,
                                     Rat(99, 100), above1);
  CHECK(!reject_ratio.accepted);
  CHECK(reject_ratio.rejection_reason == "ratio");

  auto trivially = bm_certificate(doubled_oracle(), geo2_family(), 20, Rat(0), above1);
  CHECK(trivially.accepted);

  auto reject_class = bm_certificate(id, geo2_family(), 20, Rat(99, 100),
                                     LimsupClass::singleton(Rat(1)));
  CHECK(!reject_class.accepted);
  CHECK(reject_class.rejection_reason == "ratio_class");

  IntervalFamily finite{{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}, FinitePrefixOnly{}};
  auto reject_subst = bm_certificate(id, finite, 2, Rat(0), above1);
  CHECK(!reject_subst.accepted);
  CHECK(reject_subst.rejection_reason == "substantiality");
}

TEST_CASE("certificate monotonicity in the rate") {
  auto id = identity_oracle();
  auto above1 = LimsupClass::parse("(1,inf]");
  // accepted at R implies accepted at every smaller R'
  for (long num : {99, 50, 10, 0}) {
    auto c = bm_certificate(id, geo2_family(), 24, Rat(num, 100), above1);
    CHECK(c.accepted);
  }
  auto blocks = block_oracle();
  IntervalFamily f = geo2_family();
  auto at = [&](const Rat& r) { return bm_certificate(blocks, f, 8, r, above1); };
  for (long num = 0; num <= 100; num += 20) {
    auto lo = at(Rat(num, 100));
    auto hi = at(Rat(num + 1, 100));
    if (hi.accepted) CHECK(lo.accepted);
  }
}

TEST_CASE("accepted certificates honor the transcript invariant") {
  auto id = identity_oracle();
  auto above1 = LimsupClass::parse("(1,inf]");
  auto c = bm_certificate(id, geo2_family(), 30, Rat(9, 10), above1);
  REQUIRE(c.accepted);
  for (std::size_t n = c.start_index; n <= c.checked_upto; ++n)
    CHECK(c.transcript[n - 1] >= c.rate);
}

TEST_CASE("unit-ratio families certify at 1 - eps under the singleton class") {
  // For the identity sequence, a power-ratio family (limsup 1) reaches the
  // same rates as the geometric one: evidence at the {1} class equals the
  // (1,inf] optimum.
  auto id = identity_oracle();
  IntervalFamily f{{}, PowerRatio{Rat(1), Rat(1, 2)}};
  for (long den : {10, 100}) {
    auto c = bm_certificate(id, f, 60, 1 - Rat(1, den), LimsupClass::singleton(Rat(1)));
    CHECK(c.accepted);
    auto g = bm_certificate(id, geo2_family(), 60, 1 - Rat(1, den),
                            LimsupClass::parse("(1,inf]"));
    CHECK(g.accepted);
  }
}
