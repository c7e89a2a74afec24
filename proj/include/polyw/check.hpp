#pragma once

// The decision pipeline behind `polyw check`, plus the verdict-to-exit-code
// mapping shared by every subcommand.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyw/complex.hpp"
#include "polyw/constructors.hpp"
#include "polyw/error.hpp"
#include "polyw/invariants.hpp"
#include "polyw/json_io.hpp"
#include "polyw/search.hpp"
#include "polyw/words.hpp"

namespace polyw {

enum class Status { polygonal, not_polygonal, inconclusive, not_applicable, error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::polygonal:
      return "polygonal";
    case Status::not_polygonal:
      return "not-polygonal";
    case Status::inconclusive:
      return "inconclusive";
    case Status::not_applicable:
      return "not-applicable";
    default:
      return "error";
  }
}

// 0 affirmative, 1 negative with evidence, 2 inconclusive, 3 usage or parse error.
inline int exit_code(Status s) {
  switch (s) {
    case Status::polygonal:
      return 0;
    case Status::not_polygonal:
      return 1;
    case Status::inconclusive:
    case Status::not_applicable:
      return 2;
    default:
      return 3;
  }
}

enum class Strategy { automatic, tn, f2, isolated_b, height_one, search };

inline Strategy parse_strategy(const std::string& s) {
  if (s == "auto") return Strategy::automatic;
  if (s == "tn") return Strategy::tn;
  if (s == "f2") return Strategy::f2;
  if (s == "isolated-b") return Strategy::isolated_b;
  if (s == "height-one") return Strategy::height_one;
  if (s == "search") return Strategy::search;
  throw precondition_error("unknown strategy '" + s + "'");
}

struct CheckReport {
  Status status = Status::inconclusive;
  std::string decided_by;  // step that produced the status
  std::optional<Construction> construction;
  std::optional<FollowerEvidence> evidence;
  std::optional<SearchOutcome> search;
  std::vector<std::string> notes;  // skipped steps, in order
};

namespace detail {

inline Construction tn_construction(const CyclicWord& w) {
  if (!has_no_isolated_generators(w)) throw not_applicable("word has isolated generators");
  if (syllable_decomposition(w).size() < 2) throw not_applicable("word has a single syllable");
  const auto cert = tn_membership(rho(w));
  if (!cert) throw not_applicable("rho(w) is not in T_n");
  return construct_from_tn(w, *cert);
}

inline Construction run_constructor(Strategy s, const CyclicWord& w) {
  switch (s) {
    case Strategy::tn:
      return tn_construction(w);
    case Strategy::f2:
      return construct_f2_no_isolated(w);
    case Strategy::isolated_b:
      return construct_isolated_b(w);
    default:
      return construct_height_one(w);
  }
}

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::tn:
      return "tn";
    case Strategy::f2:
      return "f2";
    case Strategy::isolated_b:
      return "isolated-b";
    case Strategy::height_one:
      return "height-one";
    case Strategy::search:
      return "search";
    default:
      return "auto";
  }
}

inline void record_search(CheckReport& r, SearchOutcome o) {
  r.decided_by = "search";
  if (o.found()) {
    r.status = Status::polygonal;
    Construction c;
    c.certificate = *o.certificate;
    c.plan.strategy = c.certificate.declarative ? "proper-power" : "search";
    r.construction = c;
  } else {
    r.status = Status::inconclusive;
  }
  r.search = std::move(o);
}

}  // namespace detail

// auto: proper power, follower obstruction, constructors (tn, f2,
// isolated-b, height-one), then bounded search. Constructor output is only
// accepted when the certifier says polygonal.
inline CheckReport check_word(const CyclicWord& w, Strategy strategy, const SearchBounds& bounds) {
  CheckReport r;
  if (is_proper_power(w)) {
    r.status = Status::polygonal;
    r.decided_by = "proper-power";
    Construction c;
    c.certificate = declarative_certificate(w);
    c.plan.strategy = "proper-power";
    r.construction = c;
    return r;
  }
  if (strategy == Strategy::search) {
    detail::record_search(r, decide_polygonal(w, bounds));
    return r;
  }
  if (strategy != Strategy::automatic) {
    try {
      Construction c = detail::run_constructor(strategy, w);
      r.decided_by = detail::strategy_name(strategy);
      r.status = c.certificate.verdict.polygonal ? Status::polygonal : Status::inconclusive;
      if (!c.certificate.verdict.polygonal) r.notes.push_back("certifier rejected: " + c.certificate.verdict.reason);
      r.construction = std::move(c);
    } catch (const not_applicable& e) {
      r.status = Status::not_applicable;
      r.decided_by = detail::strategy_name(strategy);
      r.notes.push_back(e.what());
    } catch (const precondition_error& e) {
      r.status = Status::not_applicable;
      r.decided_by = detail::strategy_name(strategy);
      r.notes.push_back(e.what());
    } catch (const resource_error& e) {
      r.status = Status::inconclusive;
      r.decided_by = detail::strategy_name(strategy);
      r.notes.push_back(e.what());
    }
    return r;
  }

  if (auto ev = nonpolygonality_follower_obstruction(w)) {
    r.status = Status::not_polygonal;
    r.decided_by = "follower-obstruction";
    r.evidence = ev;
    return r;
  }
  for (Strategy s : {Strategy::tn, Strategy::f2, Strategy::isolated_b, Strategy::height_one}) {
    try {
      Construction c = detail::run_constructor(s, w);
      if (c.certificate.verdict.polygonal) {
        r.status = Status::polygonal;
        r.decided_by = detail::strategy_name(s);
        r.construction = std::move(c);
        return r;
      }
      r.notes.push_back(std::string(detail::strategy_name(s)) + ": certifier rejected: " + c.certificate.verdict.reason);
    } catch (const error& e) {
      r.notes.push_back(std::string(detail::strategy_name(s)) + ": " + e.what());
    }
  }
  detail::record_search(r, decide_polygonal(w, bounds));
  return r;
}

inline nlohmann::json evidence_to_json(const FollowerEvidence& e) {
  return {{"obstruction", "follower"},
          {"generator", e.generator},
          {"successors", e.successors},
          {"neighbour", e.neighbour},
          {"inverted", e.inverted}};
}

inline nlohmann::json report_to_json(const CyclicWord& w, const CheckReport& r) {
  nlohmann::json j = {{"status", to_string(r.status)},
                      {"word", w.str()},
                      {"rank", w.rank()},
                      {"decided_by", r.decided_by},
                      {"notes", r.notes}};
  if (r.construction) j["certificate"] = construction_to_json(*r.construction);
  if (r.evidence) j["evidence"] = evidence_to_json(*r.evidence);
  if (r.search) {
    nlohmann::json s = outcome_to_json(*r.search);
    s.erase("certificate");
    j["search"] = s;
  }
  return j;
}

// Accepts a certificate object or a check report holding one.
inline Construction construction_from_any(const nlohmann::json& j) {
  if (j.is_object() && j.contains("certificate") && !j.contains("disks")) return construction_from_json(j["certificate"]);
  return construction_from_json(j);
}

}  // namespace polyw
