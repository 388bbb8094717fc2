#include "failover/routing.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace failover {

namespace {

void check_width(int width) {
  if (width < 0 || width > 30)
    throw std::invalid_argument("header width must be in 0..30");
}

std::uint64_t state_space_bound(const Digraph& g, int width) {
  std::uint64_t states = 0;
  for (NodeId v = 0; v < g.node_count(); ++v)
    states += static_cast<std::uint64_t>(g.in_arcs(v).size()) + 1;
  return states * (1ull << width) + 1;
}

}  // namespace

RuleTable::RuleTable(int width) : width_(width) { check_width(width); }

void RuleTable::add_rule(RuleKey key, RuleAction action) {
  const std::uint32_t space = header_space();
  if (key.header >= space)
    throw std::invalid_argument("rule key header exceeds table width");
  if (action.new_header >= space)
    throw std::invalid_argument("rule action header exceeds table width");
  std::sort(key.local_failures.begin(), key.local_failures.end());
  key.local_failures.erase(
      std::unique(key.local_failures.begin(), key.local_failures.end()),
      key.local_failures.end());
  auto [it, inserted] = entries_.emplace(std::move(key), action);
  if (!inserted) throw std::invalid_argument("duplicate rule key");
}

const RuleAction* RuleTable::find(const RuleKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

Outcome route_packet(const Digraph& g, const RuleTable& rules,
                     const FailureSet& f, NodeId s, NodeId t, Header h0) {
  if (!g.has_node(s) || !g.has_node(t))
    throw std::invalid_argument("unknown node id");
  require_arcs_in(g, f);
  if (h0.width != rules.width())
    throw std::invalid_argument("header width mismatch");
  if (h0.value >= rules.header_space())
    throw std::invalid_argument("initial header exceeds width");

  const std::uint64_t bound = state_space_bound(g, rules.width());
  Outcome out;
  SimState st{s, kOriginPort, h0.value};
  std::set<SimState> seen;

  while (true) {
    out.trace.push_back(st);
    if (st.node == t) {
      out.kind = OutcomeKind::Delivered;
      out.terminal = st;
      break;
    }
    if (!seen.insert(st).second) {
      out.kind = OutcomeKind::Loop;
      out.terminal = st;
      break;
    }
    RuleKey key{st.node, st.in_port, {}, st.header};
    for (ArcId a : g.out_arcs(st.node))
      if (f.contains(a)) key.local_failures.push_back(a);
    const RuleAction* act = rules.find(key);
    // a rule forwarding over a failed arc or a foreign arc is unusable
    if (!act || !g.has_arc(act->out_arc) || f.contains(act->out_arc) ||
        g.arc(act->out_arc).tail != st.node) {
      out.kind = OutcomeKind::Stuck;
      out.terminal = st;
      break;
    }
    out.path.push_back(act->out_arc);
    st = SimState{g.arc(act->out_arc).head, act->out_arc, act->new_header};
    if (out.path.size() > bound)
      throw std::logic_error("simulation exceeded its state-space bound");
  }
  out.steps = static_cast<int>(out.path.size());
  return out;
}

std::vector<std::string> validate_rule_table(const Digraph& g,
                                             const RuleTable& rules) {
  std::vector<std::string> violations;
  auto describe = [&](const RuleKey& key) {
    std::string in = key.in_port == kOriginPort ? std::string("ORIGIN")
                                                : g.arc_label(key.in_port);
    return "rule(" + g.node_name(key.node) + ", in=" + in +
           ", header=" + std::to_string(key.header) + ")";
  };
  for (const auto& [key, action] : rules.entries()) {
    if (!g.has_node(key.node)) {
      violations.push_back("rule references unknown node id " +
                           std::to_string(key.node));
      continue;
    }
    if (key.in_port != kOriginPort) {
      if (!g.has_arc(key.in_port)) {
        violations.push_back(describe(key) + ": in-port is not an arc");
      } else if (g.arc(key.in_port).head != key.node) {
        violations.push_back(describe(key) +
                             ": in-port does not point at the node");
      }
    }
    for (ArcId a : key.local_failures) {
      if (!g.has_arc(a))
        violations.push_back(describe(key) + ": failure view lists a missing arc");
      else if (g.arc(a).tail != key.node)
        violations.push_back(describe(key) +
                             ": failure view lists a non-local arc " +
                             g.arc_label(a));
    }
    if (!g.has_arc(action.out_arc)) {
      violations.push_back(describe(key) + ": action uses a missing arc");
      continue;
    }
    if (g.arc(action.out_arc).tail != key.node)
      violations.push_back(describe(key) + ": action leaves via foreign arc " +
                           g.arc_label(action.out_arc));
    if (std::binary_search(key.local_failures.begin(),
                           key.local_failures.end(), action.out_arc))
      violations.push_back(describe(key) +
                           ": action forwards over its own failed arc " +
                           g.arc_label(action.out_arc));
  }
  return violations;
}

ResilienceResult verify_resilience(const Digraph& g, const RuleTable& rules,
                                   NodeId s, NodeId t, int budget, Header h0) {
  ResilienceResult result;
  ValidFailureSetStream stream(g, s, t, budget);
  while (auto f = stream.next()) {
    Outcome oc = route_packet(g, rules, *f, s, t, h0);
    if (!oc.delivered()) {
      result.counterexample = std::move(*f);
      result.outcome = std::move(oc);
      break;
    }
  }
  result.candidates = stream.candidates_seen();
  result.valid = stream.valid_seen();
  return result;
}

RuleTable random_rule_table(const Digraph& g, NodeId origin_node, int width,
                            int max_view, std::uint64_t seed) {
  check_width(width);
  if (max_view < 0) throw std::invalid_argument("max_view must be >= 0");
  std::mt19937_64 rng(seed);
  RuleTable table(width);
  const std::uint32_t space = 1u << width;

  // fixed iteration order keeps the table a pure function of the seed
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& outs = g.out_arcs(v);
    if (outs.empty()) continue;
    std::vector<ArcId> ports;
    if (v == origin_node) ports.push_back(kOriginPort);
    for (ArcId a : g.in_arcs(v)) ports.push_back(a);

    std::vector<std::vector<ArcId>> views{{}};
    const int deg = static_cast<int>(outs.size());
    const int cap = std::min(max_view, deg - 1);  // keep one intact out-arc
    std::vector<int> pick;
    for (int card = 1; card <= cap; ++card) {
      pick.assign(card, 0);
      for (int i = 0; i < card; ++i) pick[i] = i;
      while (true) {
        std::vector<ArcId> view;
        for (int i : pick) view.push_back(outs[i]);
        views.push_back(std::move(view));
        int i = card - 1;
        while (i >= 0 && pick[i] == deg - (card - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < card; ++j) pick[j] = pick[j - 1] + 1;
      }
    }

    for (ArcId port : ports) {
      for (const auto& view : views) {
        std::vector<ArcId> intact;
        for (ArcId a : outs)
          if (std::find(view.begin(), view.end(), a) == view.end())
            intact.push_back(a);
        for (std::uint32_t h = 0; h < space; ++h) {
          ArcId out = intact[rng() % intact.size()];
          std::uint32_t nh = static_cast<std::uint32_t>(rng() % space);
          table.add_rule(RuleKey{v, port, view, h}, RuleAction{out, nh});
        }
      }
    }
  }
  return table;
}

}  // namespace failover
