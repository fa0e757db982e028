#pragma once

// JSON forms of schemes, certificates and verdicts.
//
// Doubles are written by nlohmann::json in shortest round-trip form, so a
// scheme read back from its JSON compares equal field by field.

#include <nlohmann/json.hpp>

#include <string>
#include <variant>

#include "linf/embed.hpp"
#include "linf/error.hpp"
#include "linf/extend.hpp"
#include "linf/seqcore.hpp"
#include "linf/verify.hpp"

namespace linf {

using json = nlohmann::json;

inline SchemeMode scheme_mode_from_string(const std::string& s) {
  for (auto m : {SchemeMode::Trivial, SchemeMode::FiniteBasis, SchemeMode::CountableBasis,
                 SchemeMode::DenseSequence})
    if (to_string(m) == s) return m;
  throw Error(ErrorKind::ConfigError, "unknown scheme mode '" + s + "'");
}

inline void to_json(json& j, const CellConstraint& c) {
  j = json{{"member", c.member}, {"lo", c.lo}, {"hi", c.hi}, {"closed_top", c.closed_top}};
}

inline void from_json(const json& j, CellConstraint& c) {
  j.at("member").get_to(c.member);
  j.at("lo").get_to(c.lo);
  j.at("hi").get_to(c.hi);
  j.at("closed_top").get_to(c.closed_top);
}

inline void to_json(json& j, const IndexScheme& s) {
  j = json{{"mode", std::string(to_string(s.mode))},
           {"prefix", s.prefix},
           {"alpha", s.alpha},
           {"tol_schedule", s.tol_schedule},
           {"member_delta", s.member_delta},
           {"constraints", s.constraints},
           {"scan_budget_used", s.scan_budget_used}};
}

inline void from_json(const json& j, IndexScheme& s) {
  s.mode = scheme_mode_from_string(j.at("mode").get<std::string>());
  j.at("prefix").get_to(s.prefix);
  j.at("alpha").get_to(s.alpha);
  j.at("tol_schedule").get_to(s.tol_schedule);
  s.member_delta = j.value("member_delta", std::vector<double>{});
  s.constraints = j.value("constraints", std::vector<CellConstraint>{});
  j.at("scan_budget_used").get_to(s.scan_budget_used);
}

inline void to_json(json& j, const DefectInterval& d) {
  j = json{{"lower", d.lower}, {"achieved", d.achieved}, {"upper", d.upper}};
}

inline void to_json(json& j, const OscillationWitness& w) {
  j = json{{"gap", w.gap},
           {"epsilon", w.epsilon},
           {"target_hi", w.target_hi},
           {"target_lo", w.target_lo},
           {"plus_indices", w.plus_indices},
           {"minus_indices", w.minus_indices},
           {"plus_values", w.plus_values},
           {"minus_values", w.minus_values}};
}

inline void from_json(const json& j, OscillationWitness& w) {
  j.at("gap").get_to(w.gap);
  j.at("epsilon").get_to(w.epsilon);
  j.at("target_hi").get_to(w.target_hi);
  j.at("target_lo").get_to(w.target_lo);
  j.at("plus_indices").get_to(w.plus_indices);
  j.at("minus_indices").get_to(w.minus_indices);
  j.at("plus_values").get_to(w.plus_values);
  j.at("minus_values").get_to(w.minus_values);
}

inline void to_json(json& j, const LimitEstimate& l) { j = json{{"value", l.value}, {"err", l.err}}; }

inline void to_json(json& j, const ClusterEstimate& c) {
  j = json{{"value", c.value}, {"spread", c.spread}, {"count", c.indices.size()}};
}

inline json verdict_detail(const Verdict& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, InC>) {
          return {{"limit", x.limit},
                  {"tail_variation", x.tail_variation},
                  {"stabilization", x.stabilization}};
        } else if constexpr (std::is_same_v<T, NotInC>) {
          return {{"witness", x.witness}};
        } else {
          return {{"budget_used", x.budget_used}, {"clusters_seen", x.clusters_seen}};
        }
      },
      v);
}

inline void to_json(json& j, const IsometryEntry& e) {
  j = json{{"x_id", e.x_id}, {"K", e.K}, {"pass", e.pass}};
  if (e.interval) {
    j["lower"] = e.interval->lower;
    j["achieved"] = e.interval->achieved;
    j["upper"] = e.interval->upper;
  }
  if (!e.error.empty()) j["error"] = e.error;
}

inline void to_json(json& j, const SeparationEntry& e) {
  j = json{{"x_id", e.x_id},
           {"d_id", e.d_id},
           {"limit", e.limit},
           {"certified_gap", e.certified_gap},
           {"pass", e.pass},
           {"budget_exhausted", e.budget_exhausted}};
  if (e.witness) {
    j["gap"] = e.witness->gap;
    j["plus_indices"] = e.witness->plus_indices;
    j["minus_indices"] = e.witness->minus_indices;
  }
  if (!e.error.empty()) j["error"] = e.error;
}

}  // namespace linf
