#include "failover/serialization.hpp"

namespace failover {

using nlohmann::json;

json graph_to_json(const Digraph& g) {
  json nodes = json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) nodes.push_back(g.node_name(v));
  json arcs = json::array();
  for (ArcId a : g.alive_arcs()) {
    const Arc& e = g.arc(a);
    arcs.push_back(json::array({g.node_name(e.tail), g.node_name(e.head)}));
  }
  return json{{"nodes", std::move(nodes)}, {"arcs", std::move(arcs)}};
}

Digraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("arcs"))
    throw std::invalid_argument("graph json needs 'nodes' and 'arcs'");
  Digraph g;
  for (const auto& name : j.at("nodes"))
    g.add_node(name.get<std::string>());
  for (const auto& pair : j.at("arcs")) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("each arc must be [\"tail\",\"head\"]");
    g.add_arc(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return g;
}

std::string graph_to_dot(const Digraph& g) {
  std::string out = "digraph G {\n";
  for (NodeId v = 0; v < g.node_count(); ++v)
    out += "  \"" + g.node_name(v) + "\";\n";
  for (ArcId a : g.alive_arcs()) {
    const Arc& e = g.arc(a);
    out += "  \"" + g.node_name(e.tail) + "\" -> \"" + g.node_name(e.head) +
           "\";\n";
  }
  out += "}\n";
  return out;
}

json rule_table_to_json(const Digraph& g, const RuleTable& rules) {
  json entries = json::array();
  for (const auto& [key, action] : rules.entries()) {
    json failed = json::array();
    for (ArcId a : key.local_failures) failed.push_back(g.arc_label(a));
    entries.push_back(json{
        {"node", g.node_name(key.node)},
        {"in", key.in_port == kOriginPort ? std::string("ORIGIN")
                                          : g.arc_label(key.in_port)},
        {"failed", std::move(failed)},
        {"header", key.header},
        {"out", g.arc_label(action.out_arc)},
        {"new_header", action.new_header}});
  }
  return json{{"width", rules.width()}, {"rules", std::move(entries)}};
}

RuleTable rule_table_from_json(const Digraph& g, const json& j) {
  if (!j.is_object() || !j.contains("width") || !j.contains("rules"))
    throw std::invalid_argument("rule table json needs 'width' and 'rules'");
  RuleTable table(j.at("width").get<int>());
  for (const auto& r : j.at("rules")) {
    RuleKey key;
    key.node = g.node_id(r.at("node").get<std::string>());
    const std::string in = r.at("in").get<std::string>();
    key.in_port = in == "ORIGIN" ? kOriginPort : g.arc_by_label(in);
    for (const auto& label : r.at("failed"))
      key.local_failures.push_back(g.arc_by_label(label.get<std::string>()));
    key.header = r.at("header").get<std::uint32_t>();
    RuleAction action;
    action.out_arc = g.arc_by_label(r.at("out").get<std::string>());
    action.new_header = r.at("new_header").get<std::uint32_t>();
    table.add_rule(std::move(key), action);
  }
  return table;
}

json failure_set_to_json(const Digraph& g, const FailureSet& f) {
  json arr = json::array();
  for (ArcId a : f.arcs()) arr.push_back(g.arc_label(a));
  return arr;
}

json sim_state_to_json(const Digraph& g, const SimState& st) {
  return json{{"node", g.node_name(st.node)},
              {"in", st.in_port == kOriginPort ? std::string("ORIGIN")
                                               : g.arc_label(st.in_port)},
              {"header", st.header}};
}

json outcome_to_json(const Digraph& g, const Outcome& outcome) {
  json out;
  switch (outcome.kind) {
    case OutcomeKind::Delivered: out["outcome"] = "Delivered"; break;
    case OutcomeKind::Loop: out["outcome"] = "Loop"; break;
    case OutcomeKind::Stuck: out["outcome"] = "Stuck"; break;
  }
  out["steps"] = outcome.steps;
  json path = json::array();
  for (ArcId a : outcome.path) path.push_back(g.arc_label(a));
  out["path"] = std::move(path);
  json trace = json::array();
  for (const SimState& st : outcome.trace)
    trace.push_back(sim_state_to_json(g, st));
  out["trace"] = std::move(trace);
  out["terminal"] = sim_state_to_json(g, outcome.terminal);
  return out;
}

json counterexample_to_json(const Digraph& g, const FailureSet& f,
                            const Outcome& outcome) {
  json out = outcome_to_json(g, outcome);
  json ce;
  ce["failure_set"] = failure_set_to_json(g, f);
  ce["outcome"] = out.at("outcome");
  ce["trace"] = out.at("trace");
  ce["steps"] = out.at("steps");
  return ce;
}

json attack_to_json(const Digraph& g, const Attack& attack,
                    const FailureSet& failed) {
  return json{{"columns", attack.columns},
              {"intact", attack.intact},
              {"failed_arcs", failure_set_to_json(g, failed)}};
}

json gap_to_json(const CoverageGap& gap) {
  return json{{"columns", gap.columns}, {"missing", gap.tuple_bits()}};
}

json ca_to_json(const CoveringArray& m) {
  return json{{"t", m.strength()}, {"rows", m.cells()}};
}

CoveringArray ca_from_json(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("rows"))
    throw std::invalid_argument("covering array json needs 't' and 'rows'");
  std::vector<std::vector<int>> cells;
  for (const auto& row : j.at("rows"))
    cells.push_back(row.get<std::vector<int>>());
  return CoveringArray::from_cells(j.at("t").get<int>(), cells);
}

json bound_report_to_json(const BoundReport& report) {
  json out{{"k", report.k},
           {"n", report.n},
           {"l", report.l},
           {"prior_bits", report.prior_bits},
           {"theorem_bits", report.theorem_bits},
           {"trivial_upper_bits", report.trivial_upper}};
  if (report.exact_bits)
    out["exact_bits"] = *report.exact_bits;
  else
    out["exact_bits"] = nullptr;
  return out;
}

}  // namespace failover
