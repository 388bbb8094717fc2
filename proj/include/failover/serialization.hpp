#pragma once

#include <string>

#include <json.hpp>

#include "failover/chain_gadget.hpp"
#include "failover/covering_array.hpp"
#include "failover/digraph.hpp"
#include "failover/routing.hpp"

namespace failover {

// Graph files: {"nodes":[...],"arcs":[["tail","head"],...]}
nlohmann::json graph_to_json(const Digraph& g);
Digraph graph_from_json(const nlohmann::json& j);
std::string graph_to_dot(const Digraph& g);

// Rule tables: {"width":h,"rules":[{"node":...,"in":"ORIGIN"|"u->v",
// "failed":[...],"header":h,"out":"u->v","new_header":h},...]}
nlohmann::json rule_table_to_json(const Digraph& g, const RuleTable& rules);
RuleTable rule_table_from_json(const Digraph& g, const nlohmann::json& j);

nlohmann::json failure_set_to_json(const Digraph& g, const FailureSet& f);
nlohmann::json sim_state_to_json(const Digraph& g, const SimState& st);
nlohmann::json outcome_to_json(const Digraph& g, const Outcome& outcome);
nlohmann::json counterexample_to_json(const Digraph& g, const FailureSet& f,
                                      const Outcome& outcome);

// Attacks: {"columns":[...],"intact":"ba","failed_arcs":[...]}
nlohmann::json attack_to_json(const Digraph& g, const Attack& attack,
                              const FailureSet& failed);

nlohmann::json gap_to_json(const CoverageGap& gap);

// Covering arrays: {"t":...,"rows":[[0,0,0,0],...]}
nlohmann::json ca_to_json(const CoveringArray& m);
CoveringArray ca_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const BoundReport& report);

}  // namespace failover
