#pragma once

// JSON forms of certificates, constructions, search outcomes and reports.
// Every writer here has a matching reader.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyw/complex.hpp"
#include "polyw/constructors.hpp"
#include "polyw/covers.hpp"
#include "polyw/error.hpp"
#include "polyw/invariants.hpp"
#include "polyw/search.hpp"
#include "polyw/stats.hpp"
#include "polyw/words.hpp"

namespace polyw {

using json = nlohmann::json;

namespace detail {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw precondition_error(std::string("missing JSON field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw precondition_error(std::string("bad JSON field '") + key + "': " + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certificates

inline json verdict_to_json(const Verdict& v) {
  return {{"chi", v.chi},
          {"m", v.m},
          {"vertices", v.vertices},
          {"immersion", v.immersion},
          {"closed", v.closed},
          {"readings_ok", v.readings_ok},
          {"chi_below_m", v.chi_below_m},
          {"polygonal", v.polygonal},
          {"reason", v.reason}};
}

inline Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.chi = detail::field<int>(j, "chi");
  v.m = detail::field<int>(j, "m");
  v.vertices = detail::field<int>(j, "vertices");
  v.immersion = detail::field<bool>(j, "immersion");
  v.closed = detail::field<bool>(j, "closed");
  v.polygonal = detail::field<bool>(j, "polygonal");
  v.readings_ok = j.value("readings_ok", v.polygonal);
  v.chi_below_m = j.value("chi_below_m", v.polygonal);
  v.reason = j.value("reason", std::string());
  return v;
}

inline json certificate_to_json(const PolygonalityCertificate& c) {
  json disks = json::array();
  for (DiskSpec d : c.disks) disks.push_back({{"power", d.power}});
  json pairing = json::array();
  for (const auto& [a, b] : c.pairing) pairing.push_back({{a.disk, a.pos}, {b.disk, b.pos}});
  json j = {{"word", c.word.str()},
            {"rank", c.word.rank()},
            {"disks", disks},
            {"pairing", pairing},
            {"verdict", verdict_to_json(c.verdict)}};
  if (c.declarative) {
    j["declarative"] = true;
    j["proper_power"] = c.proper_power;
  }
  return j;
}

inline PolygonalityCertificate certificate_from_json(const json& j) {
  PolygonalityCertificate c;
  c.word = parse_cyclic(detail::field<std::string>(j, "word"), detail::field<int>(j, "rank"));
  for (const json& d : detail::field<json>(j, "disks")) c.disks.push_back({detail::field<int>(d, "power")});
  for (const json& p : detail::field<json>(j, "pairing")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_array() || p[0].size() != 2 || !p[1].is_array() ||
        p[1].size() != 2) {
      throw precondition_error("pairing entries must be [[disk,pos],[disk,pos]]");
    }
    c.pairing.push_back({{p[0][0].get<int>(), p[0][1].get<int>()}, {p[1][0].get<int>(), p[1][1].get<int>()}});
  }
  c.pairing = normalize_pairing(std::move(c.pairing));
  c.verdict = verdict_from_json(detail::field<json>(j, "verdict"));
  c.declarative = j.value("declarative", false);
  c.proper_power = j.value("proper_power", 1);
  return c;
}

// ---------------------------------------------------------------------------
// Invariant certificates

inline json tn_to_json(const TnCertificate& t) {
  json cycles = json::array();
  for (const TnCycle& cy : t.cycles) {
    std::vector<int> flipped(cy.flipped.begin(), cy.flipped.end());
    cycles.push_back({{"vertices", cy.vertices}, {"elements", cy.elements}, {"flipped", flipped}});
  }
  return {{"cycles", cycles}};
}

inline TnCertificate tn_from_json(const json& j) {
  TnCertificate t;
  for (const json& c : detail::field<json>(j, "cycles")) {
    TnCycle cy;
    cy.vertices = detail::field<std::vector<int>>(c, "vertices");
    cy.elements = detail::field<std::vector<std::size_t>>(c, "elements");
    for (int f : detail::field<std::vector<int>>(c, "flipped")) cy.flipped.push_back(f != 0);
    t.cycles.push_back(std::move(cy));
  }
  return t;
}

inline json lambda_to_json(const LambdaMultiset& l) {
  json out = json::array();
  for (const LambdaTerm& t : l) out.push_back({{"sign", t.sign}, {"composition", t.composition}});
  return out;
}

inline LambdaMultiset lambda_from_json(const json& j) {
  std::vector<LambdaTerm> terms;
  for (const json& t : j) terms.push_back(LambdaTerm::make(detail::field<int>(t, "sign"), detail::field<std::vector<int>>(t, "composition")));
  return make_lambda(std::move(terms));
}

inline json u_to_json(const UCertificate& u, const LambdaMultiset& lambda) {
  json pairs = json::array();
  for (const UPair& p : u.pairs) {
    pairs.push_back({{"first", p.first}, {"second", p.second}, {"same_sign", p.same_sign}, {"offset", p.offset}});
  }
  return {{"lambda", lambda_to_json(lambda)}, {"pairs", pairs}};
}

inline std::pair<UCertificate, LambdaMultiset> u_from_json(const json& j) {
  UCertificate u;
  for (const json& p : detail::field<json>(j, "pairs")) {
    u.pairs.push_back({detail::field<std::size_t>(p, "first"), detail::field<std::size_t>(p, "second"),
                       detail::field<bool>(p, "same_sign"), detail::field<int>(p, "offset")});
  }
  return {u, lambda_from_json(detail::field<json>(j, "lambda"))};
}

// A construction is its certificate plus "plan" and the invariant
// certificates under "tn_certificate" / "u_certificate".
inline json construction_to_json(const Construction& c) {
  json j = certificate_to_json(c.certificate);
  j["plan"] = {{"strategy", c.plan.strategy}, {"parameters", c.plan.parameters}};
  if (c.tn) j["tn_certificate"] = tn_to_json(*c.tn);
  if (c.u) j["u_certificate"] = u_to_json(*c.u, c.lambda);
  return j;
}

inline Construction construction_from_json(const json& j) {
  Construction c;
  c.certificate = certificate_from_json(j);
  if (j.contains("plan")) {
    c.plan.strategy = detail::field<std::string>(j["plan"], "strategy");
    c.plan.parameters = j["plan"].value("parameters", json::object());
  }
  if (j.contains("tn_certificate")) c.tn = tn_from_json(j["tn_certificate"]);
  if (j.contains("u_certificate")) {
    auto [u, lambda] = u_from_json(j["u_certificate"]);
    c.u = u;
    c.lambda = lambda;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Search

inline json bounds_to_json(const SearchBounds& b) {
  return {{"max_disks", b.max_disks},
          {"max_edges", b.max_edges},
          {"powers", b.powers},
          {"allow_negative_powers", b.allow_negative_powers},
          {"time_budget_ms", b.time_budget.count()},
          {"jobs", b.jobs}};
}

inline SearchBounds bounds_from_json(const json& j) {
  SearchBounds b;
  b.max_disks = detail::field<int>(j, "max_disks");
  b.max_edges = detail::field<int>(j, "max_edges");
  b.powers = detail::field<std::vector<int>>(j, "powers");
  b.allow_negative_powers = detail::field<bool>(j, "allow_negative_powers");
  b.time_budget = std::chrono::milliseconds(detail::field<long long>(j, "time_budget_ms"));
  b.jobs = detail::field<int>(j, "jobs");
  return b;
}

inline json outcome_to_json(const SearchOutcome& o) {
  json current = json::array();
  for (DiskSpec d : o.progress.current) current.push_back(d.power);
  json j = {{"status", to_string(o.status)},
            {"bounds", bounds_to_json(o.bounds)},
            {"progress",
             {{"nodes", o.progress.nodes},
              {"leaves", o.progress.leaves},
              {"multisets_done", o.progress.multisets_done},
              {"multisets_total", o.progress.multisets_total},
              {"current", current}}}};
  if (o.certificate) j["certificate"] = certificate_to_json(*o.certificate);
  return j;
}

inline SearchOutcome outcome_from_json(const json& j) {
  SearchOutcome o;
  const std::string s = detail::field<std::string>(j, "status");
  if (s == "found") {
    o.status = SearchOutcome::Status::found;
  } else if (s == "exhausted") {
    o.status = SearchOutcome::Status::exhausted;
  } else if (s == "timed-out") {
    o.status = SearchOutcome::Status::timed_out;
  } else {
    throw precondition_error("unknown search status '" + s + "'");
  }
  o.bounds = bounds_from_json(detail::field<json>(j, "bounds"));
  const json p = detail::field<json>(j, "progress");
  o.progress.nodes = detail::field<std::uint64_t>(p, "nodes");
  o.progress.leaves = detail::field<std::uint64_t>(p, "leaves");
  o.progress.multisets_done = detail::field<std::size_t>(p, "multisets_done");
  o.progress.multisets_total = detail::field<std::size_t>(p, "multisets_total");
  for (int k : detail::field<std::vector<int>>(p, "current")) o.progress.current.push_back({k});
  if (j.contains("certificate")) o.certificate = certificate_from_json(j["certificate"]);
  return o;
}

// ---------------------------------------------------------------------------
// Reports

struct CoverReport {
  DoubleSurfaceReport surface;
  ElevationReport elevations;
};

inline CoverReport cover_report(const PolygonalityCertificate& cert) {
  const DoubleSurfaceReport d = double_surface_report(cert);
  const SurfaceComplex s(cert.word, cert.disks, cert.pairing);
  return {d, elevations(stallings_complete(skeleton(s)), cert.word)};
}

inline json cover_to_json(const CoverReport& r) {
  json el = json::array();
  for (const Elevation& e : r.elevations.elevations) el.push_back({{"representative", e.representative}, {"n_g", e.n_g}});
  return {{"degree", r.surface.degree}, {"chi_S0", r.surface.chi_S0}, {"elevations", el}};
}

inline CoverReport cover_from_json(const json& j) {
  CoverReport r;
  r.surface.degree = detail::field<int>(j, "degree");
  r.surface.chi_S0 = detail::field<int>(j, "chi_S0");
  r.elevations.degree = r.surface.degree;
  for (const json& e : detail::field<json>(j, "elevations")) {
    r.elevations.elevations.push_back({e.value("representative", 0), detail::field<int>(e, "n_g")});
  }
  return r;
}

inline json trials_to_json(const TrialReport& r) {
  return {{"N", r.N},
          {"samples", r.samples},
          {"seed", r.seed},
          {"rng", r.rng},
          {"p_condition", r.p_condition()},
          {"p_fail_q", r.p_fail_q()},
          {"p_fail_p", r.p_fail_p()},
          {"mean_runs", r.mean_runs()},
          {"var_runs", r.var_runs()},
          {"counts",
           {{"condition", r.count_condition},
            {"fail_q", r.count_fail_q},
            {"fail_p", r.count_fail_p},
            {"degenerate", r.count_degenerate},
            {"sum_runs", r.sum_runs},
            {"sum_runs_sq", r.sum_runs_sq},
            {"sum_p", r.sum_p},
            {"sum_p_sq", r.sum_p_sq}}}};
}

inline TrialReport trials_from_json(const json& j) {
  TrialReport r;
  r.N = detail::field<int>(j, "N");
  r.samples = detail::field<long long>(j, "samples");
  r.seed = detail::field<std::uint64_t>(j, "seed");
  r.rng = detail::field<std::string>(j, "rng");
  const json c = detail::field<json>(j, "counts");
  r.count_condition = detail::field<long long>(c, "condition");
  r.count_fail_q = detail::field<long long>(c, "fail_q");
  r.count_fail_p = detail::field<long long>(c, "fail_p");
  r.count_degenerate = detail::field<long long>(c, "degenerate");
  r.sum_runs = detail::field<long long>(c, "sum_runs");
  r.sum_runs_sq = detail::field<long long>(c, "sum_runs_sq");
  r.sum_p = detail::field<long long>(c, "sum_p");
  r.sum_p_sq = detail::field<long long>(c, "sum_p_sq");
  return r;
}

}  // namespace polyw
