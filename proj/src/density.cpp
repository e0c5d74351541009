#include "denslab/density.hpp"

#include "denslab/enclosure.hpp"
#include "denslab/errors.hpp"

#include <algorithm>
#include <map>

namespace denslab::density {

namespace {
const Rat kRhoTol = Rat(1, Int("1000000000000"));  // 1e-12
}

void validate_config(const EstimatorConfig& c) {
  if (c.xi_grid.empty()) fail(Errc::empty_grid, "xi grid is empty");
  for (const Rat& xi : c.xi_grid)
    if (!(xi > 0 && xi < 1)) fail(Errc::validation, "xi must lie in (0,1)");
  if (!(c.t0 > 0 && c.t0 < c.t)) fail(Errc::validation, "need 0 < t0 < t");
  if (c.sampling == Sampling::real_geometric && c.gamma <= 1)
    fail(Errc::validation, "gamma must exceed 1");
}

std::vector<Rat> sample_points(const EstimatorConfig& c) {
  validate_config(c);
  std::vector<Rat> pts;
  bool integers = c.sampling == Sampling::integer ||
                  (c.sampling == Sampling::real_geometric && c.merge_integers);
  if (integers) {
    for (Int n = ceil_rat(c.t0); Rat(n) <= c.t; ++n) pts.push_back(Rat(n));
  }
  if (c.sampling == Sampling::real_geometric) {
    // The grid is a discretization device, so the points themselves may be
    // placed in floating point; each is converted to an exact rational and
    // every evaluation at it stays exact.
    double factor = rat_to_double(c.gamma);
    for (double xd = rat_to_double(c.t0);; xd *= factor) {
      Rat x(xd);
      if (x > c.t) break;
      if (x >= c.t0) pts.push_back(x);
      if (pts.size() > 50000000) fail(Errc::validation, "grid too fine");
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) fail(Errc::empty_grid, "no sample points in [t0, t]");
  return pts;
}

Rat window_value(const seqcore::CountingOracle& oracle, const Rat& xi, const Rat& x) {
  Int cnt = oracle.count_leq(x) - oracle.count_leq(xi * x);
  if (cnt <= 1) return Rat(0);
  return Rat(cnt - 1) / ((1 - xi) * x);
}

DensityReport polya_estimate(const seqcore::CountingOracle& oracle,
                             const EstimatorConfig& config) {
  validate_config(config);
  if (oracle.horizon() && config.t > *oracle.horizon())
    fail(Errc::horizon_exceeded, "t = " + rat_to_string(config.t) +
                                     " beyond oracle horizon " +
                                     rat_to_string(*oracle.horizon()));
  auto pts = sample_points(config);
  const Rat drift_from = 4 * config.t0;

  DensityReport rep;
  rep.config = config;
  rep.sample_count = pts.size();
  for (const Rat& xi : config.xi_grid) {
    XiRow row{xi, Rat(0), pts.front(), Rat(0)};
    bool have = false;
    for (const Rat& x : pts) {
      Rat v = window_value(oracle, xi, x);
      if (!have || v > row.phat) {
        row.phat = v;
        row.x_star = x;
        have = true;
      }
      if (x >= drift_from && v > row.phat_drift) row.phat_drift = v;
    }
    rep.rows.push_back(std::move(row));
  }
  const XiRow* best = &rep.rows.front();
  for (const auto& row : rep.rows)
    if (row.phat > best->phat) best = &row;
  rep.phat = best->phat;
  rep.xi_star = best->xi;
  rep.x_star = best->x_star;
  return rep;
}

GSample g_eval(const seqcore::CountingOracle& oracle, const Rat& s,
               const EstimatorConfig& config) {
  if (s <= 0) fail(Errc::validation, "g argument must be positive");
  Rat rho = exp_neg_enclosure(s, kRhoTol).hi;
  auto pts = sample_points(config);
  if (oracle.horizon() && config.t > *oracle.horizon())
    fail(Errc::horizon_exceeded, "g window beyond oracle horizon");
  Rat best(0);
  for (const Rat& y : pts) {
    Int cnt = oracle.count_leq(y) - oracle.count_leq(rho * y);
    if (cnt <= 1) continue;
    Rat v = Rat(cnt - 1) / ((1 - rho) * y);
    if (v > best) best = v;
  }
  return {s, rho, best};
}

std::vector<FeketeViolation> fekete_check(const std::vector<GSample>& samples,
                                          std::size_t pair_budget, const Rat& tau) {
  if (samples.size() < 3) fail(Errc::insufficient_samples, "need at least 3 samples");
  std::map<Rat, Rat> value_at;
  for (const auto& g : samples) value_at[g.s] = g.value;

  std::vector<FeketeViolation> out;
  std::size_t tested = 0;
  std::map<Rat, RatInterval> phi_cache;
  auto phi = [&](const Rat& t) {
    auto it = phi_cache.find(t);
    if (it == phi_cache.end())
      it = phi_cache.emplace(t, one_minus(exp_neg_enclosure(t, kRhoTol))).first;
    return it->second;
  };

  for (auto ia = value_at.begin(); ia != value_at.end() && tested < pair_budget; ++ia) {
    for (auto ib = ia; ib != value_at.end() && tested < pair_budget; ++ib) {
      Rat sum = ia->first + ib->first;
      auto isum = value_at.find(sum);
      if (isum == value_at.end()) continue;
      ++tested;
      const Rat& ga = ia->second;
      const Rat& gb = ib->second;
      const Rat& gab = isum->second;
      RatInterval pa = phi(ia->first);
      RatInterval pab = phi(sum);
      // w = phi(a)/phi(a+b) in [lo, hi] (both positive, w <= 1).
      Rat wlo = pa.lo / pab.hi;
      Rat whi = pa.hi / pab.lo;
      if (whi > 1) whi = 1;
      if (wlo < 0) wlo = 0;
      // sup over the w enclosure of w ga + (1-w) gb
      Rat rhs = ga >= gb ? whi * (ga - gb) + gb : wlo * (ga - gb) + gb;
      Rat mag = gab - rhs;
      if (mag > tau) out.push_back({ia->first, ib->first, mag});
    }
  }
  if (tested == 0) fail(Errc::insufficient_samples, "no pair (a,b) with a+b sampled");
  return out;
}

Extraction extract_polya_family(const seqcore::CountingOracle& oracle, const Rat& xi,
                                const std::vector<Rat>& witnesses) {
  if (!(xi > 0 && xi < 1)) fail(Errc::validation, "xi must lie in (0,1)");
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    if (witnesses[i] <= 0) fail(Errc::validation, "witnesses must be positive");
    if (i && witnesses[i] <= witnesses[i - 1])
      fail(Errc::validation, "witnesses must be strictly increasing");
  }
  if (oracle.horizon() && !witnesses.empty() && witnesses.back() > *oracle.horizon())
    fail(Errc::horizon_exceeded, "witness beyond oracle horizon");

  std::vector<Rat> y;
  for (const Rat& w : witnesses) {
    if (y.empty() || w >= y.back() / xi) y.push_back(w);
  }
  if (y.size() < 2)
    fail(Errc::too_few_witnesses,
         "greedy extraction kept " + std::to_string(y.size()) + " witnesses");

  Extraction ex;
  ex.y = y;
  for (const Rat& yk : y) ex.family.prefix.push_back({xi * yk, yk});
  ex.family.tail = intervals::ConstantRatio{1 / xi};
  ex.ell = intervals::ell_estimate(oracle, ex.family, ex.family.prefix.size());
  return ex;
}

ConsistencyReport compare_bm_polya(const seqcore::CountingOracle& oracle,
                                   const EstimatorConfig& config,
                                   const Rat& rate_slack,
                                   const Rat& witness_rel_tol) {
  ConsistencyReport rep;
  rep.rate_slack = rate_slack;
  rep.witness_rel_tol = witness_rel_tol;
  rep.density = polya_estimate(oracle, config);
  auto pts = sample_points(config);
  intervals::LimsupClass above_one{Rat(1), false, std::nullopt, true};  // (1, inf]

  Rat rate = rep.density.phat - rate_slack;
  if (rate < 0) rate = 0;
  rep.best_ell = 0;

  for (const auto& row : rep.density.rows) {
    CompareRow out;
    out.xi = row.xi;
    out.phat_xi = row.phat;
    Rat cut = (1 - witness_rel_tol) * row.phat;
    std::vector<Rat> witnesses;
    for (const Rat& x : pts)
      if (window_value(oracle, row.xi, x) >= cut) witnesses.push_back(x);
    out.witnesses = witnesses.size();
    try {
      Extraction ex = extract_polya_family(oracle, row.xi, witnesses);
      out.extracted = true;
      out.certificate = intervals::bm_certificate(
          oracle, ex.family, ex.family.prefix.size(), rate, above_one);
      if (out.certificate->accepted && ex.ell.value > rep.best_ell) {
        rep.best_ell = ex.ell.value;
        rep.any_certified = true;
      }
      out.extraction = std::move(ex);
    } catch (const Error& e) {
      out.note = e.what();
    }
    rep.rows.push_back(std::move(out));
  }
  rep.gap = rep.density.phat >= rep.best_ell ? rep.density.phat - rep.best_ell
                                             : rep.best_ell - rep.density.phat;
  return rep;
}

}  // namespace denslab::density
