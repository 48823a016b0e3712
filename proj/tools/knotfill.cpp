#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "knotfill.hpp"

using namespace knotfill;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kBudget = 3 };

struct Settings {
  bool as_json = false;
  std::string config_path;
  unsigned threads = 1;
  std::uint64_t seed = CheckOptions{}.seed;
  std::uint64_t budget = kDefaultBudget;
  std::vector<std::string> targets;
  std::size_t witness_factors = 3;
  std::size_t conjugator_length = 4;
  std::string facts_path;
};

void print(const Settings& s, const json& j, const std::string& text) {
  if (s.as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// Config file values apply wherever the flag was not given explicitly.
void apply_config(Settings& s, const CLI::App& app) {
  if (s.config_path.empty()) return;
  std::ifstream in(s.config_path);
  if (!in) throw ParseError("cannot open config '" + s.config_path + "'");
  json c = json::parse(in);
  auto unset = [&](const char* flag) { return app.get_option(flag)->count() == 0; };
  if (c.contains("threads") && unset("--threads")) s.threads = c["threads"];
  if (c.contains("seed") && unset("--seed")) s.seed = c["seed"];
  if (c.contains("budget") && unset("--budget")) s.budget = c["budget"];
  if (c.contains("targets") && unset("--targets")) s.targets = c["targets"].get<std::vector<std::string>>();
  if (c.contains("witness_factors") && unset("--witness-factors")) s.witness_factors = c["witness_factors"];
  if (c.contains("conjugator_length") && unset("--conjugator-length")) s.conjugator_length = c["conjugator_length"];
  if (c.contains("facts") && unset("--facts")) s.facts_path = c["facts"];
}

std::vector<TargetSpec> ladder(const Settings& s) {
  if (s.targets.empty()) return default_target_ladder();
  std::vector<TargetSpec> out;
  for (const auto& t : s.targets) out.push_back(parse_target(t));
  return out;
}

ScanOptions scan_options(const Settings& s) {
  ScanOptions o;
  o.ladder = ladder(s);
  o.budget = s.budget;
  o.witness_factors = s.witness_factors;
  o.conjugator_length = s.conjugator_length;
  o.threads = s.threads;
  return o;
}

std::string facts_path(const Settings& s) { return s.facts_path.empty() ? default_facts_path() : s.facts_path; }

FinitePresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open presentation '" + path + "'");
  return presentation_from_json(json::parse(in));
}

std::string presentation_text(const FinitePresentation& p) {
  std::ostringstream out;
  out << "generators:";
  for (const auto& g : p.generators()) out << " " << g.name();
  out << "\nrelators:\n";
  for (const auto& r : p.relators()) out << "  " << to_string(r) << "\n";
  return out.str();
}

json invariants_json(const AbelianInvariants& inv) {
  json torsion = json::array();
  for (const auto& t : inv.torsion) torsion.push_back(t.str());
  return {{"group", to_string(inv)}, {"torsion", torsion}, {"free_rank", inv.free_rank}};
}

std::string certificate_text(const HomCertificate& c, bool verified) {
  std::ostringstream out;
  out << "target: " << to_string(c.target) << "\n";
  for (const auto& [s, i] : c.images) out << s.name() << " -> " << format_element(c.target, i) << "\n";
  out << "witness: " << to_string(c.witness) << " -> " << format_element(c.target, c.witness_image) << "\n";
  out << "verified: " << (verified ? "yes" : "NO") << "\n";
  return out.str();
}

std::string evidence_name(const Evidence& e) {
  struct {
    std::string operator()(const CyclicSlopeRule&) const { return "CyclicSlopeRule"; }
    std::string operator()(const NormalClosureWitness& w) const {
      return "NormalClosureWitness(" + std::to_string(w.factors.size()) + " factors)";
    }
    std::string operator()(const AbelianizationEvidence& a) const {
      return "AbelianizationEvidence(" + to_string(a.group) + ")";
    }
    std::string operator()(const HomCertificate& c) const { return "HomCertificate(" + to_string(c.target) + ")"; }
    std::string operator()(const BudgetNote& b) const {
      return b.exhausted ? "BudgetNote(exhausted)" : "BudgetNote(no certificate)";
    }
  } v;
  return std::visit(v, e);
}

std::string report_text(const SlopeSetReport& r) {
  std::ostringstream out;
  out << "knot: " << r.knot << "\nelement: " << to_string(r.element) << "\n";
  for (const auto& [s, v] : r.verdicts) {
    std::string slope = to_string(s), status = to_string(v.status);
    out << slope << std::string(slope.size() < 10 ? 10 - slope.size() : 1, ' ') << status
        << std::string(status.size() < 16 ? 16 - status.size() : 1, ' ') << evidence_name(v.evidence) << "\n";
  }
  if (!r.constraints.empty()) {
    out << "constraints:\n";
    for (const auto& c : r.constraints) {
      out << "  " << (c.passed ? "PASS " : "FAIL ") << c.rule;
      for (const auto& [a, b] : c.offending) out << " [" << to_string(a) << ", " << to_string(b) << "]";
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dehn filling toolkit for knot groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_flag("--json", s.as_json, "JSON output");
  app.add_option("--config", s.config_path, "JSON file with targets, budget, witness bounds, threads, seed");
  app.add_option("--threads", s.threads, "worker threads for scans")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", s.seed, "seed for randomized checks");
  app.add_option("--budget", s.budget, "search budget in partial assignments");
  app.add_option("--targets", s.targets, "finite target ladder, e.g. S3,A5,PSL(2,7)")->delimiter(',');
  app.add_option("--witness-factors", s.witness_factors, "max conjugate factors in normal-closure witnesses");
  app.add_option("--conjugator-length", s.conjugator_length, "max conjugator length in witnesses");
  app.add_option("--facts", s.facts_path, "inclusion facts JSON");

  std::string word, word2, knot_spec, slope_text, pres_path, preset, rep_path;
  std::vector<std::string> slope_list, alphas, only;
  bool abelianize = false;
  std::int64_t max_p = 0, max_q = 0;

  auto* reduce_cmd = app.add_subcommand("reduce", "freely reduce a word");
  reduce_cmd->add_option("word", word, "word, e.g. \"x y y^-1 x\"")->required();

  auto* conj_cmd = app.add_subcommand("conjtest", "test conjugacy in the free group");
  conj_cmd->add_option("u", word)->required();
  conj_cmd->add_option("v", word2)->required();

  auto* ab_cmd = app.add_subcommand("abelianize", "abelian invariants of a presentation or knot group");
  auto* ab_pres = ab_cmd->add_option("--presentation", pres_path, "presentation JSON");
  ab_cmd->add_option("--knot", knot_spec, "torus:a,b | trefoil | figure8 | file")->excludes(ab_pres);

  auto* fill_cmd = app.add_subcommand("fill", "Dehn filling presentation");
  fill_cmd->add_option("--knot", knot_spec)->required();
  fill_cmd->add_option("--slope", slope_text)->required();
  fill_cmd->add_flag("--abelianize", abelianize, "print H_1 of the filling");

  auto* rep_cmd = app.add_subcommand("rep-eval", "evaluate a word under a PSL(2) representation");
  auto* rep_preset = rep_cmd->add_option("--preset", preset, "figure8");
  rep_cmd->add_option("--rep", rep_path, "representation JSON")->excludes(rep_preset);
  rep_cmd->add_option("--word", word)->required();

  auto* cert_cmd = app.add_subcommand("certify", "finite-quotient certificate that a word is nontrivial");
  auto* cert_pres = cert_cmd->add_option("--presentation", pres_path);
  cert_cmd->add_option("--knot", knot_spec)->excludes(cert_pres);
  cert_cmd->add_option("--slope", slope_text, "fill the knot first");
  cert_cmd->add_option("--word", word)->required();

  auto* scan_cmd = app.add_subcommand("scan", "per-slope verdicts for S_K(g)");
  scan_cmd->add_option("--knot", knot_spec)->required();
  scan_cmd->add_option("--word", word)->required();
  scan_cmd->add_option("--slopes", slope_list, "comma-separated slopes")->delimiter(',');
  scan_cmd->add_option("--max-p", max_p, "enumerate |p| <= max-p");
  scan_cmd->add_option("--max-q", max_q, "enumerate 1 <= q <= max-q");
  scan_cmd->add_option("--alpha", alphas, "also scan g^{g^alpha} g^-2 and compare")->delimiter(',');

  auto* verify_cmd = app.add_subcommand("verify-paper", "rerun the reference computations");
  verify_cmd->add_option("--only", only, "check groups to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_config(s, app);

    if (*reduce_cmd) {
      Word w = parse_word(word);
      auto cyc = cyclic_reduce(w);
      print(s,
            {{"reduced", to_string(w)},
             {"letters", w.letter_length()},
             {"cyclically_reduced", to_string(cyc.base)},
             {"conjugator", to_string(cyc.conjugator)}},
            to_string(w) + "\n");
      return kOk;
    }

    if (*conj_cmd) {
      Word u = parse_word(word), v = parse_word(word2);
      bool c = is_conjugate_free(u, v);
      print(s,
            {{"conjugate", c},
             {"normal_forms", {to_string(cyclic_normal_form(u)), to_string(cyclic_normal_form(v))}}},
            std::string(c ? "conjugate" : "not conjugate") + "\n");
      return kOk;
    }

    if (*ab_cmd) {
      if (pres_path.empty() && knot_spec.empty()) throw ParseError("abelianize needs --presentation or --knot");
      auto p = pres_path.empty() ? knot_from_spec(knot_spec).presentation() : load_presentation(pres_path);
      auto inv = abelianization(p);
      print(s, invariants_json(inv), to_string(inv) + "\n");
      return kOk;
    }

    if (*fill_cmd) {
      auto k = knot_from_spec(knot_spec);
      Slope r = parse_slope(slope_text);
      auto p = build_filling(k, r);
      if (abelianize) {
        auto j = invariants_json(abelianization(p));
        j["knot"] = k.label();
        j["slope"] = to_string(r);
        print(s, j, to_string(abelianization(p)) + "\n");
      } else {
        json j = to_json(p);
        j["knot"] = k.label();
        j["slope"] = to_string(r);
        print(s, j, presentation_text(p));
      }
      return kOk;
    }

    if (*rep_cmd) {
      std::optional<Representation> rep;
      if (preset == "figure8" || preset == "figure-eight") {
        rep = figure_eight_holonomy();
      } else if (!rep_path.empty()) {
        std::ifstream in(rep_path);
        if (!in) throw ParseError("cannot open representation '" + rep_path + "'");
        rep = representation_from_json(json::parse(in));
      } else {
        throw ParseError("rep-eval needs --preset figure8 or --rep FILE");
      }
      auto m = rep->eval(parse_word(word));
      print(s, {{"matrix", to_json(m)}, {"trace", to_string(trace_pm(m))}, {"parabolic", is_peripheral_trace(m)}},
            to_string(m) + "\n");
      return kOk;
    }

    if (*cert_cmd) {
      FinitePresentation p = [&] {
        if (!pres_path.empty()) return load_presentation(pres_path);
        if (knot_spec.empty()) throw ParseError("certify needs --presentation or --knot");
        auto k = knot_from_spec(knot_spec);
        return slope_text.empty() ? k.presentation() : build_filling(k, parse_slope(slope_text));
      }();
      Word w = parse_word(word);
      auto cert = certify_nontrivial(p, w, ladder(s), s.budget);
      if (!cert) {
        print(s, {{"status", "unknown"}, {"witness", to_string(w)}},
              "unknown: no certificate within the target ladder\n");
        return kOk;
      }
      bool ok = verify_certificate(p, *cert);
      json j = to_json(*cert);
      j["verified"] = ok;
      print(s, j, certificate_text(*cert, ok));
      return ok ? kOk : kVerifyFailed;
    }

    if (*scan_cmd) {
      auto k = knot_from_spec(knot_spec);
      Word g = parse_word(word);
      std::vector<Slope> slopes;
      for (const auto& t : slope_list) slopes.push_back(parse_slope(t));
      if (max_p > 0 || max_q > 0) {
        auto more = enumerate_slopes(max_p, max_q, false);
        slopes.insert(slopes.end(), more.begin(), more.end());
      }
      if (slopes.empty()) throw ParseError("scan needs --slopes or --max-p/--max-q");
      const auto opts = scan_options(s);
      auto report = scan(k, g, slopes, opts);
      std::vector<SlopeSetReport> iterates;
      for (const auto& a : alphas) iterates.push_back(scan(k, self_conjugate_step(g, parse_word(a)), slopes, opts));
      auto facts = applicable_facts(load_facts(facts_path(s)), report);
      auto results = check_constraints(report, facts, iterates);
      if (s.as_json) {
        json j = to_json(k, report);
        j["iterates"] = json::array();
        for (const auto& h : iterates) j["iterates"].push_back(to_json(k, h));
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << report_text(report);
        for (const auto& h : iterates) std::cout << "\n" << report_text(h);
      }
      return all_passed(results) ? kOk : kVerifyFailed;
    }

    if (*verify_cmd) {
      CheckOptions o;
      o.seed = s.seed;
      o.facts_path = facts_path(s);
      o.scan = scan_options(s);
      auto results = run_checks(only, o);
      bool ok = all_passed_checks(results);
      if (s.as_json) {
        json rows = json::array();
        for (const auto& r : results)
          rows.push_back({{"group", r.group}, {"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        std::cout << json{{"seed", o.seed}, {"passed", ok}, {"checks", rows}}.dump(2) << "\n";
      } else {
        std::cout << "seed " << o.seed << "\n";
        for (const auto& r : results) {
          std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.group << ": " << r.name;
          if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
          std::cout << "\n";
        }
        std::size_t failed = 0;
        for (const auto& r : results) failed += !r.passed;
        std::cout << (results.size() - failed) << "/" << results.size() << " checks passed\n";
        for (const auto& r : results)
          if (!r.passed) std::cout << "failed: " << r.group << ": " << r.name << "\n";
      }
      return ok ? kOk : kVerifyFailed;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
