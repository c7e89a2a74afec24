// polyw: command-line front end.
//
// Exit codes: 0 affirmative, 1 negative with evidence, 2 inconclusive or not
// applicable, 3 usage or parse error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyw/polyw.hpp"

namespace {

using nlohmann::json;

constexpr int exit_usage = 3;

struct WordArgs {
  std::string text;
  int rank = 0;

  polyw::CyclicWord word() const {
    return polyw::parse_cyclic(text, rank > 0 ? rank : polyw::infer_rank(text));
  }
};

void add_word(CLI::App* cmd, WordArgs& w) {
  cmd->add_option("word", w.text, "word in the text grammar, e.g. \"a (a^2)^b\"")->required();
  cmd->add_option("--rank", w.rank, "ambient rank (default: highest generator used, at least 2)")
      ->check(CLI::Range(1, polyw::max_rank));
}

struct SearchArgs {
  int max_disks = 2;
  int max_edges = 0;
  std::string powers = "2";
  double time_budget = 0;
  int jobs = 1;
  bool negative = false;

  polyw::SearchBounds bounds(const polyw::CyclicWord& w) const {
    polyw::SearchBounds b;
    b.max_disks = max_disks;
    b.powers.clear();
    try {
      if (powers.find(',') == std::string::npos) {
        const int top = std::stoi(powers);
        for (int k = 1; k <= top; ++k) b.powers.push_back(k);
      } else {
        std::stringstream in(powers);
        for (std::string item; std::getline(in, item, ',');) b.powers.push_back(std::stoi(item));
      }
    } catch (const std::logic_error&) {
      throw polyw::precondition_error("--powers expects N or a comma list of integers, got '" + powers + "'");
    }
    int top = 1;
    for (int k : b.powers) top = std::max(top, k);
    b.max_edges = max_edges > 0 ? max_edges : max_disks * top * static_cast<int>(w.size());
    b.allow_negative_powers = negative;
    b.time_budget = std::chrono::milliseconds(static_cast<long long>(time_budget * 1000));
    b.jobs = jobs;
    return b;
  }
};

void add_search(CLI::App* cmd, SearchArgs& s) {
  cmd->add_option("--max-disks", s.max_disks, "maximum number of disks")->check(CLI::PositiveNumber);
  cmd->add_option("--max-edges", s.max_edges, "maximum total boundary length (default: disks * max power * |w|)");
  cmd->add_option("--powers", s.powers, "N for powers 1..N, or a comma list such as 1,3");
  cmd->add_option("--time-budget", s.time_budget, "seconds; 0 means unlimited");
  cmd->add_option("--jobs", s.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--allow-negative-powers", s.negative, "also try disks reading negative powers");
}

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw polyw::precondition_error("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw polyw::precondition_error(std::string("invalid JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw polyw::precondition_error("cannot write " + path);
  out << text;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("POLYW_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw polyw::precondition_error("POLYW_SEED must be an unsigned integer");
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polygonality of words in free groups"};
  app.require_subcommand(1);

  WordArgs check_word;
  SearchArgs check_search;
  std::string strategy = "auto";
  std::string check_out;
  auto* check = app.add_subcommand("check", "decide polygonality and emit a certificate");
  add_word(check, check_word);
  check->add_option("--strategy", strategy, "auto|tn|f2|isolated-b|height-one|search")
      ->check(CLI::IsMember({"auto", "tn", "f2", "isolated-b", "height-one", "search"}));
  check->add_option("--out", check_out, "also write the certificate JSON to this file");
  add_search(check, check_search);

  WordArgs rho_word;
  auto* rho_cmd = app.add_subcommand("rho", "rho(w) and its T_n membership");
  add_word(rho_cmd, rho_word);

  WordArgs min_word;
  bool min_json = false;
  auto* minimize_cmd = app.add_subcommand("minimize", "Whitehead minimization with the move trace");
  add_word(minimize_cmd, min_word);
  minimize_cmd->add_flag("--json", min_json, "print JSON");

  WordArgs db_word;
  std::size_t db_cap = 1'000'000;
  auto* db_cmd = app.add_subcommand("diskbusting", "exit 0 if diskbusting, 1 if not");
  add_word(db_cmd, db_word);
  db_cmd->add_option("--cap", db_cap, "orbit size cap");

  std::string cover_file;
  auto* cover_cmd = app.add_subcommand("cover", "cover degree, chi(S_0) and elevations of a certificate");
  cover_cmd->add_option("certificate", cover_file, "certificate JSON file, or - for stdin")->required();

  int stats_n = 0;
  long long stats_samples = 2000;
  std::uint64_t stats_seed = 0;
  int stats_jobs = 1;
  std::string stats_format = "csv";
  auto* stats_cmd = app.add_subcommand("stats", "Monte Carlo statistics of random height-one words");
  stats_cmd->add_option("--length", stats_n, "word length N")->required()->check(CLI::Range(2, 100'000'000));
  stats_cmd->add_option("--samples", stats_samples, "number of samples")->check(CLI::PositiveNumber);
  auto* seed_opt = stats_cmd->add_option("--seed", stats_seed, "seed (default: POLYW_SEED or 1)");
  stats_cmd->add_option("--jobs", stats_jobs, "worker threads")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--format", stats_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  std::string render_file;
  bool render_cover = false;
  auto* render_cmd = app.add_subcommand("render", "DOT of the surface 1-skeleton (or its cover)");
  render_cmd->add_option("certificate", render_file, "certificate JSON file, or - for stdin")->required();
  render_cmd->add_flag("--cover", render_cover, "render the completed cover instead");

  std::string verify_file;
  auto* verify_cmd = app.add_subcommand("verify", "re-run the certifier on a stored certificate");
  verify_cmd->add_option("certificate", verify_file, "certificate JSON file, or - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*check) {
      const polyw::CyclicWord w = check_word.word();
      const polyw::CheckReport r =
          polyw::check_word(w, polyw::parse_strategy(strategy), check_search.bounds(w));
      const json out = polyw::report_to_json(w, r);
      std::cout << out.dump(2) << "\n";
      if (!check_out.empty() && r.construction) {
        write_text(check_out, polyw::construction_to_json(*r.construction).dump(2) + "\n");
      }
      return polyw::exit_code(r.status);
    }
    if (*rho_cmd) {
      const polyw::CyclicWord w = rho_word.word();
      const polyw::RhoElement r = polyw::rho(w);
      json pairs = json::array();
      for (const polyw::RhoPair& p : r.pairs) pairs.push_back({p.i, p.j});
      const auto cert = polyw::tn_membership(r);
      json out = {{"word", w.str()}, {"rank", w.rank()}, {"rho", pairs}, {"member", cert.has_value()}};
      if (cert) out["tn_certificate"] = polyw::tn_to_json(*cert);
      std::cout << out.dump(2) << "\n";
      return cert ? 0 : 1;
    }
    if (*minimize_cmd) {
      const polyw::CyclicWord w = min_word.word();
      const polyw::MinimizationTrace t = polyw::minimize(w);
      if (min_json) {
        json steps = json::array();
        for (const auto& s : t.steps) steps.push_back({{"move", s.move.str()}, {"result", s.result.str()}});
        std::cout << json{{"start", t.start.str()}, {"steps", steps}, {"final", t.final.str()},
                          {"length", t.final.size()}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "start  " << t.start.pretty() << "  (length " << t.start.size() << ")\n";
        for (const auto& s : t.steps) {
          std::cout << "move   " << s.move.str() << "  ->  " << s.result.pretty() << "  (length " << s.result.size()
                    << ")\n";
        }
        std::cout << "final  " << t.final.pretty() << "  (length " << t.final.size() << ")\n";
      }
      return 0;
    }
    if (*db_cmd) {
      const bool yes = polyw::is_diskbusting(db_word.word(), db_cap);
      std::cout << (yes ? "diskbusting" : "not diskbusting") << "\n";
      return yes ? 0 : 1;
    }
    if (*cover_cmd) {
      const polyw::Construction c = polyw::construction_from_any(read_json(cover_file));
      if (c.certificate.declarative) {
        std::cout << json{{"status", "not-applicable"}, {"reason", "declarative certificates carry no surface"}}.dump(2)
                  << "\n";
        return 2;
      }
      std::cout << polyw::cover_to_json(polyw::cover_report(c.certificate)).dump(2) << "\n";
      return 0;
    }
    if (*stats_cmd) {
      const std::uint64_t seed = seed_opt->count() ? stats_seed : default_seed();
      const polyw::TrialReport r = polyw::run_trials(stats_n, stats_samples, seed, stats_jobs);
      if (stats_format == "json") {
        std::cout << polyw::trials_to_json(r).dump(2) << "\n";
      } else {
        std::cout << polyw::csv_header() << "\n" << polyw::to_csv(r) << "\n";
      }
      return 0;
    }
    if (*render_cmd) {
      const polyw::Construction c = polyw::construction_from_any(read_json(render_file));
      if (c.certificate.declarative) throw polyw::precondition_error("declarative certificates carry no surface");
      const polyw::SurfaceComplex s(c.certificate.word, c.certificate.disks, c.certificate.pairing);
      std::cout << (render_cover ? polyw::to_dot(polyw::stallings_complete(polyw::skeleton(s))) : polyw::to_dot(s));
      return 0;
    }
    if (*verify_cmd) {
      const polyw::Construction c = polyw::construction_from_any(read_json(verify_file));
      const bool same = polyw::recheck(c.certificate);
      const bool ok = same && c.certificate.verdict.polygonal;
      std::cout << json{{"reproduced", same}, {"polygonal", c.certificate.verdict.polygonal}}.dump(2) << "\n";
      return ok ? 0 : 1;
    }
  } catch (const polyw::parse_error& e) {
    std::cerr << "polyw: " << e.what() << "\n";
    return exit_usage;
  } catch (const polyw::rank_error& e) {
    std::cerr << "polyw: " << e.what() << "\n";
    return exit_usage;
  } catch (const polyw::resource_error& e) {
    std::cerr << "polyw: inconclusive: " << e.what() << "\n";
    return 2;
  } catch (const polyw::error& e) {
    std::cerr << "polyw: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "polyw: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
