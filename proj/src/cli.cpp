#include "denslab/cli.hpp"

#include "denslab/covering.hpp"
#include "denslab/density.hpp"
#include "denslab/errors.hpp"
#include "denslab/lemma_suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace denslab::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Rat> parse_rat_list(const std::string& s) {
  std::vector<Rat> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_rat(p));
  return out;
}

}  // namespace

seqcore::SequenceSpec parse_sequence_arg(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    fail(Errc::validation, "sequence spec needs the form kind:args, got '" + s + "'");
  std::string kind = s.substr(0, colon), args = s.substr(colon + 1);
  if (kind == "arith") {
    auto parts = parse_rat_list(args);
    if (parts.size() != 2) fail(Errc::validation, "arith needs step,offset");
    return seqcore::ArithmeticProgression{parts[0], parts[1]};
  }
  if (kind == "poly") {
    std::vector<Int> coeffs;
    for (const auto& c : split(args, ',')) {
      Rat r = parse_rat(c);
      if (!is_integer(r)) fail(Errc::validation, "poly coefficients must be integers");
      coeffs.push_back(numerator(r));
    }
    return seqcore::PolynomialValues{coeffs};
  }
  if (kind == "primes") {
    Rat n = parse_rat(args);
    if (!is_integer(n) || n <= 0) fail(Errc::validation, "primes needs a positive integer bound");
    return seqcore::PrimesUpTo{numerator(n).convert_to<long>()};
  }
  if (kind == "blocks") {
    seqcore::BlockIntegers b;
    for (const auto& blk : split(args, ';')) {
      auto parts = parse_rat_list(blk);
      if (parts.size() != 2) fail(Errc::validation, "each block needs lo,hi");
      b.blocks.push_back({parts[0], parts[1]});
    }
    return b;
  }
  if (kind == "list") {
    auto sections = split(args, ';');
    seqcore::ExplicitList l;
    l.terms = parse_rat_list(sections[0]);
    for (std::size_t i = 1; i < sections.size(); ++i) {
      const std::string& sec = sections[i];
      if (sec.rfind("tail-arith:", 0) == 0)
        l.tail = seqcore::ArithmeticTail{parse_rat(sec.substr(11))};
      else
        fail(Errc::validation, "unknown list section '" + sec + "'");
    }
    return l;
  }
  fail(Errc::validation, "unknown sequence kind '" + kind + "'");
}

intervals::IntervalFamily parse_family_arg(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    fail(Errc::validation, "family spec needs the form kind:args, got '" + s + "'");
  std::string kind = s.substr(0, colon), args = s.substr(colon + 1);
  intervals::IntervalFamily f;
  if (kind == "geo") {
    f.tail = intervals::ConstantRatio{parse_rat(args)};
  } else if (kind == "pow") {
    auto parts = parse_rat_list(args);
    if (parts.size() != 2) fail(Errc::validation, "pow needs c,p");
    f.tail = intervals::PowerRatio{parts[0], parts[1]};
  } else {
    fail(Errc::validation, "unknown family kind '" + kind + "'");
  }
  intervals::validate_family(f);
  return f;
}

intervals::IntervalFamily parse_family_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::validation, std::string("bad family JSON: ") + e.what());
  }
  intervals::IntervalFamily f;
  if (j.contains("prefix")) {
    for (const auto& iv : j["prefix"]) {
      if (!iv.is_array() || iv.size() != 2)
        fail(Errc::validation, "family prefix entries must be [a, b]");
      f.prefix.push_back({parse_rat(iv[0].get<std::string>()),
                          parse_rat(iv[1].get<std::string>())});
    }
  }
  f.tail = intervals::FinitePrefixOnly{};
  if (j.contains("tail")) {
    const auto& t = j["tail"];
    std::string kind = t.value("kind", "finite");
    if (kind == "geo")
      f.tail = intervals::ConstantRatio{parse_rat(t.at("rho").get<std::string>())};
    else if (kind == "pow")
      f.tail = intervals::PowerRatio{parse_rat(t.at("c").get<std::string>()),
                                     parse_rat(t.at("p").get<std::string>())};
    else if (kind != "finite")
      fail(Errc::validation, "unknown tail kind '" + kind + "'");
  }
  intervals::validate_family(f);
  return f;
}

unsigned render_digits() {
  const char* env = std::getenv("DENSITY_LAB_PRECISION");
  if (!env) return 50;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v < 1 || v > 10000)
    fail(Errc::validation, "DENSITY_LAB_PRECISION must be an integer in [1, 10000]");
  return static_cast<unsigned>(v);
}

namespace {

json rat_json(const Rat& r, unsigned digits) {
  return json{{"exact", rat_to_string(r)}, {"decimal", rat_to_decimal(r, digits)}};
}

json family_json(const intervals::IntervalFamily& f) {
  json prefix = json::array();
  for (const auto& iv : f.prefix)
    prefix.push_back({rat_to_string(iv.a), rat_to_string(iv.b)});
  return json{{"prefix", prefix}, {"tail", intervals::tail_to_string(f.tail)}};
}

json certificate_json(const intervals::Certificate& c, unsigned digits) {
  json transcript = json::array();
  for (const auto& r : c.transcript) transcript.push_back(rat_to_string(r));
  json cls{{"finite_limsup_estimate", rat_to_string(c.class_report.finite_limsup_estimate)},
           {"symbolic_limsup", c.class_report.symbolic_limsup
                                   ? json(rat_to_string(*c.class_report.symbolic_limsup))
                                   : json(nullptr)},
           {"member_of_A", intervals::membership_name(c.class_report.member_of_a)}};
  return json{{"rate", rat_json(c.rate, digits)},
              {"accepted", c.accepted},
              {"rejection_reason", c.rejection_reason},
              {"substantial", intervals::verdict_name(c.substantial_verdict)},
              {"ratio_class", cls},
              {"class_undetermined", c.class_undetermined},
              {"start_index", c.start_index},
              {"checked_upto", c.checked_upto},
              {"family", family_json(c.family)},
              {"transcript", transcript}};
}

struct OutputTarget {
  std::string path;  // empty = stdout
  void write(const std::string& text, std::ostream& fallback) const {
    if (path.empty()) {
      fallback << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Errc::io_error, "cannot open output file '" + path + "'");
    f << text;
    if (!f) fail(Errc::io_error, "failed writing '" + path + "'");
  }
};

struct SequenceArgs {
  std::string seq, file;
  seqcore::CountingOracle build() const {
    if (seq.empty() == file.empty())
      fail(Errc::validation, "exactly one of --seq and --file is required");
    if (!seq.empty()) return seqcore::build_sequence(parse_sequence_arg(seq));
    return seqcore::build_sequence(seqcore::FileBacked{file});
  }
};

json config_json(const density::EstimatorConfig& c, const std::string& seq_desc) {
  json grid = json::array();
  for (const auto& xi : c.xi_grid) grid.push_back(rat_to_string(xi));
  return json{{"sequence", seq_desc},
              {"xi_grid", grid},
              {"t0", rat_to_string(c.t0)},
              {"t", rat_to_string(c.t)},
              {"sampling", c.sampling == density::Sampling::integer ? "integer" : "real"},
              {"gamma", rat_to_string(c.gamma)},
              {"merge_integers", c.merge_integers}};
}

json density_json(const density::DensityReport& rep, const std::string& seq_desc,
                  unsigned digits) {
  json rows = json::array();
  for (const auto& row : rep.rows)
    rows.push_back(json{{"xi", rat_to_string(row.xi)},
                        {"phat", rat_json(row.phat, digits)},
                        {"x_star", rat_to_string(row.x_star)},
                        {"phat_drift", rat_json(row.phat_drift, digits)}});
  return json{{"schema", 1},
              {"command", "density"},
              {"config", config_json(rep.config, seq_desc)},
              {"estimate_kind", "lower-bound-style window sup"},
              {"sample_count", rep.sample_count},
              {"rows", rows},
              {"phat", rat_json(rep.phat, digits)},
              {"xi_star", rat_to_string(rep.xi_star)},
              {"x_star", rat_to_string(rep.x_star)}};
}

std::string density_csv(const density::DensityReport& rep, unsigned digits) {
  std::ostringstream os;
  os << "xi,phat,x_star,phat_drift\n";
  for (const auto& row : rep.rows)
    os << rat_to_decimal(row.xi, digits) << "," << rat_to_decimal(row.phat, digits)
       << "," << rat_to_decimal(row.x_star, digits) << ","
       << rat_to_decimal(row.phat_drift, digits) << "\n";
  return os.str();
}

int cmd_density(const SequenceArgs& seq_args, density::EstimatorConfig cfg,
                const std::string& format, const OutputTarget& out_t,
                std::ostream& out) {
  auto oracle = seq_args.build();
  auto rep = density::polya_estimate(oracle, cfg);
  unsigned digits = render_digits();
  if (format == "csv")
    out_t.write(density_csv(rep, digits), out);
  else
    out_t.write(density_json(rep, oracle.describe(), digits).dump(2) + "\n", out);
  return 0;
}

int cmd_covering(const Rat& x, const Rat& xi, const Rat& eta,
                 const OutputTarget& out_t, std::ostream& out) {
  covering::CoveringParams params{x, xi, eta};
  auto cov = covering::build_eta_covering(params);
  auto checks = covering::verify_covering(cov);
  auto pred = covering::predicted_d(params);
  auto degen = covering::degenerate_check(cov);
  unsigned digits = render_digits();

  json table = json::array();
  for (std::size_t i = 0; i < cov.b.size(); ++i)
    table.push_back(json{{"i", i},
                         {"a", rat_to_string(cov.a[i])},
                         {"b", cov.b[i].str()}});
  json cand = json::array();
  for (long c : pred.candidates) cand.push_back(c);
  json rep{{"schema", 1},
           {"command", "covering"},
           {"config", {{"x", rat_to_string(x)}, {"xi", rat_to_string(xi)}, {"eta", rat_to_string(eta)}}},
           {"d", cov.d},
           {"log_ratio", {{"floor", cov.logratio.p}, {"integral", cov.logratio.integral}}},
           {"predicted_d", {{"candidates", cand}, {"sharp", pred.sharp}}},
           {"thresholds",
            {{"chain_q", cov.thresholds.chain_q},
             {"d_bound_met", cov.thresholds.d_bound_met},
             {"length_met", cov.thresholds.length_met},
             {"predicted_met", cov.thresholds.predicted_met}}},
           {"s_eta", rat_json(covering::s_eta(eta), digits)},
           {"intervals", table},
           {"checks",
            {{"recursion", check_status_name(checks.recursion)},
             {"d_minimal", check_status_name(checks.d_minimal)},
             {"chain", check_status_name(checks.chain)},
             {"d_bound_ceil", check_status_name(checks.d_bound_ceil)},
             {"d_bound_plus1", check_status_name(checks.d_bound_plus1)},
             {"total_length", check_status_name(checks.total_length)},
             {"coverage", check_status_name(checks.coverage)},
             {"overlaps", check_status_name(checks.overlaps)}}},
           {"degenerate", degen ? json{{"present", true}, {"index", degen->index}}
                                : json{{"present", false}}}};
  out_t.write(rep.dump(2) + "\n", out);
  return 0;
}

int cmd_certify_family(const SequenceArgs& seq_args,
                       const intervals::IntervalFamily& family, std::size_t n,
                       const Rat& rate, const intervals::LimsupClass& cls,
                       const OutputTarget& out_t, std::ostream& out) {
  auto oracle = seq_args.build();
  auto cert = intervals::bm_certificate(oracle, family, n, rate, cls);
  unsigned digits = render_digits();
  json rep{{"schema", 1},
           {"command", "certify"},
           {"config",
            {{"sequence", oracle.describe()},
             {"n", n},
             {"rate", rat_to_string(rate)},
             {"class", cls.str()}}},
           {"certificate", certificate_json(cert, digits)}};
  out_t.write(rep.dump(2) + "\n", out);
  return 0;
}

int cmd_certify_compare(const SequenceArgs& seq_args, density::EstimatorConfig cfg,
                        const Rat& rate_slack, const OutputTarget& out_t,
                        std::ostream& out) {
  auto oracle = seq_args.build();
  auto rep = density::compare_bm_polya(oracle, cfg, rate_slack);
  unsigned digits = render_digits();
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json jr{{"xi", rat_to_string(row.xi)},
            {"phat_xi", rat_json(row.phat_xi, digits)},
            {"witnesses", row.witnesses},
            {"extracted", row.extracted}};
    if (!row.note.empty()) jr["note"] = row.note;
    if (row.extraction) {
      jr["ell"] = rat_json(row.extraction->ell.value, digits);
      jr["ell_diagnostic"] = rat_json(row.extraction->ell.diagnostic, digits);
      jr["family"] = family_json(row.extraction->family);
    }
    if (row.certificate) jr["certificate"] = certificate_json(*row.certificate, digits);
    rows.push_back(std::move(jr));
  }
  json j{{"schema", 1},
         {"command", "certify"},
         {"mode", "compare"},
         {"config", config_json(cfg, oracle.describe())},
         {"rate_slack", rat_to_string(rep.rate_slack)},
         {"witness_rel_tol", rat_to_string(rep.witness_rel_tol)},
         {"density", density_json(rep.density, oracle.describe(), digits)},
         {"rows", rows},
         {"best_ell", rat_json(rep.best_ell, digits)},
         {"gap", rat_json(rep.gap, digits)},
         {"any_certified", rep.any_certified}};
  out_t.write(j.dump(2) + "\n", out);
  return 0;
}

int cmd_verify_lemmas(std::size_t trials, std::uint64_t seed,
                      const OutputTarget& out_t, std::ostream& out,
                      std::ostream& err) {
  if (trials == 0) {
    err << "warning: --trials 0 runs an empty suite\n";
    out_t.write("{\n  \"schema\": 1,\n  \"command\": \"verify-lemmas\",\n"
                "  \"trials\": 0,\n  \"checks\": 0,\n  \"failures\": 0\n}\n",
                out);
    return 0;
  }
  struct Named {
    const char* name;
    lemma_suite::SuiteResult res;
  };
  std::vector<Named> suites;
  suites.push_back({"covering", lemma_suite::run_covering_suite(trials, seed)});
  suites.push_back({"splits", lemma_suite::run_split_suite(trials, seed + 1)});
  suites.push_back({"pigeonhole", lemma_suite::run_pigeonhole_suite(trials, seed + 2)});
  suites.push_back({"ceil_iterate", lemma_suite::run_iterate_suite(trials, seed + 3)});
  suites.push_back({"witness", lemma_suite::run_witness_suite(trials / 4 + 1, seed + 4)});
  suites.push_back({"delta", lemma_suite::run_delta_suite(trials, seed + 5)});

  json jsuites = json::object();
  std::size_t failures = 0, checks = 0;
  for (const auto& s : suites) {
    json fb = json::object();
    for (const auto& [k, v] : s.res.failed_by_check) fb[k] = v;
    jsuites[s.name] = json{{"trials", s.res.trials},
                           {"checks", s.res.checks},
                           {"failures", s.res.failures},
                           {"failed_by_check", fb}};
    failures += s.res.failures;
    checks += s.res.checks;
    err << s.name << ": " << s.res.checks << " checks, " << s.res.failures
        << " failures\n";
  }
  json rep{{"schema", 1},
           {"command", "verify-lemmas"},
           {"config", {{"trials", trials}, {"seed", seed}}},
           {"checks", checks},
           {"failures", failures},
           {"suites", jsuites}};
  out_t.write(rep.dump(2) + "\n", out);
  return failures == 0 ? 0 : 1;
}

int exit_code_for(const Error& e) {
  return e.code() == Errc::io_error ? 3 : 2;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"density-lab: exact counting oracles, interval certificates and "
               "eta-coverings for sequence density estimation"};
  app.require_subcommand(1);

  SequenceArgs seq_args;
  std::string out_path, format = "json";
  std::string xi_list = "1/2,9/10,99/100";
  std::string t0_s = "1000", t_s = "100000", gamma_s = "1001/1000";
  std::string sampling = "integer";
  bool no_merge = false;

  auto add_seq_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seq", seq_args.seq, "inline sequence spec (kind:args)");
    cmd->add_option("--file", seq_args.file, "sequence file (one term per line)");
  };
  auto add_estimator_flags = [&](CLI::App* cmd) {
    cmd->add_option("--xi", xi_list, "comma-separated xi grid");
    cmd->add_option("--t0", t0_s, "window start");
    cmd->add_option("--t", t_s, "window end");
    cmd->add_option("--sampling", sampling, "integer|real")
        ->check(CLI::IsMember({"integer", "real"}));
    cmd->add_option("--gamma", gamma_s, "geometric grid factor (real sampling)");
    cmd->add_flag("--no-merge-integers", no_merge,
                  "real sampling: do not add the integers to the grid");
  };
  auto make_config = [&]() {
    density::EstimatorConfig cfg;
    cfg.xi_grid = parse_rat_list(xi_list);
    cfg.t0 = parse_rat(t0_s);
    cfg.t = parse_rat(t_s);
    cfg.sampling = sampling == "integer" ? density::Sampling::integer
                                         : density::Sampling::real_geometric;
    cfg.gamma = parse_rat(gamma_s);
    cfg.merge_integers = !no_merge;
    return cfg;
  };

  auto* density_cmd = app.add_subcommand("density", "window-density estimate over a tail window");
  add_seq_flags(density_cmd);
  add_estimator_flags(density_cmd);
  density_cmd->add_option("--out", out_path, "report path (default stdout)");
  density_cmd->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string x_s, cov_xi_s, cov_eta_s;
  auto* covering_cmd = app.add_subcommand("covering", "build and verify an eta-covering of (xi*x, x]");
  covering_cmd->add_option("--x", x_s, "right endpoint")->required();
  covering_cmd->add_option("--xi", cov_xi_s, "xi in (0,1)")->required();
  covering_cmd->add_option("--eta", cov_eta_s, "eta in (xi,1)")->required();
  covering_cmd->add_option("--out", out_path, "report path (default stdout)");

  std::string family_s, family_file, rate_s = "0", class_s = "(1,inf]";
  std::size_t cert_n = 24;
  std::string rate_slack_s = "1/20";
  auto* certify_cmd = app.add_subcommand(
      "certify", "rate certificate for an interval family (or extract one from the density run)");
  add_seq_flags(certify_cmd);
  add_estimator_flags(certify_cmd);
  certify_cmd->add_option("--family", family_s, "symbolic family (geo:rho | pow:c,p)");
  certify_cmd->add_option("--family-file", family_file, "family JSON document");
  certify_cmd->add_option("--rate", rate_s, "rate R to certify")->required();
  certify_cmd->add_option("--n", cert_n, "number of intervals to check");
  certify_cmd->add_option("--class", class_s, "limsup class A (e.g. {1}, (1,inf])");
  certify_cmd->add_option("--rate-slack", rate_slack_s,
                          "compare mode: certify at R = phat - slack");
  certify_cmd->add_option("--out", out_path, "report path (default stdout)");

  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  auto* verify_cmd = app.add_subcommand("verify-lemmas", "randomized exact check suites");
  verify_cmd->add_option("--trials", trials, "trials per suite");
  verify_cmd->add_option("--seed", seed, "PRNG seed");
  verify_cmd->add_option("--out", out_path, "report path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  OutputTarget out_t{out_path};
  try {
    if (density_cmd->parsed()) {
      return cmd_density(seq_args, make_config(), format, out_t, out);
    }
    if (covering_cmd->parsed()) {
      return cmd_covering(parse_rat(x_s), parse_rat(cov_xi_s), parse_rat(cov_eta_s),
                          out_t, out);
    }
    if (certify_cmd->parsed()) {
      if (!family_s.empty() && !family_file.empty())
        fail(Errc::validation, "--family and --family-file are mutually exclusive");
      if (!family_s.empty() || !family_file.empty()) {
        intervals::IntervalFamily family;
        if (!family_s.empty()) {
          family = parse_family_arg(family_s);
        } else {
          std::ifstream f(family_file);
          if (!f) fail(Errc::io_error, "cannot open family file '" + family_file + "'");
          std::stringstream ss;
          ss << f.rdbuf();
          family = parse_family_json_text(ss.str());
        }
        return cmd_certify_family(seq_args, family, cert_n, parse_rat(rate_s),
                                  intervals::LimsupClass::parse(class_s), out_t, out);
      }
      return cmd_certify_compare(seq_args, make_config(), parse_rat(rate_slack_s),
                                 out_t, out);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify_lemmas(trials, seed, out_t, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace denslab::cli
