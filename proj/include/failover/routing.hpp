#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "failover/digraph.hpp"

namespace failover {

/// Synthetic in-port of a freshly injected packet; matching on the
/// incoming arc needs one because a new packet has none.
inline constexpr ArcId kOriginPort = -1;

/// A rewritable bitstring of `width` bits. Width 0 means the single
/// configuration with value fixed to 0.
struct Header {
  std::uint32_t value = 0;
  int width = 0;
};

struct RuleKey {
  NodeId node;
  ArcId in_port;                       // kOriginPort or an in-arc of node
  std::vector<ArcId> local_failures;   // failed out-arcs of node, sorted
  std::uint32_t header;

  auto operator<=>(const RuleKey&) const = default;
};

struct RuleAction {
  ArcId out_arc;
  std::uint32_t new_header;
};

/// Per-node forwarding function keyed on (in-port, local failure view,
/// header). Lookup is exact: a table wanting default behavior for several
/// failure views must enumerate them.
class RuleTable {
 public:
  explicit RuleTable(int width);

  int width() const { return width_; }
  std::uint32_t header_space() const { return 1u << width_; }

  /// Throws on duplicate keys and on out-of-range header values.
  void add_rule(RuleKey key, RuleAction action);
  const RuleAction* find(const RuleKey& key) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<RuleKey, RuleAction>& entries() const { return entries_; }

 private:
  int width_;
  std::map<RuleKey, RuleAction> entries_;
};

struct SimState {
  NodeId node;
  ArcId in_port;
  std::uint32_t header;

  auto operator<=>(const SimState&) const = default;
};

enum class OutcomeKind { Delivered, Loop, Stuck };

struct Outcome {
  OutcomeKind kind;
  int steps = 0;                 // hop count
  std::vector<ArcId> path;       // arcs traversed, in order
  std::vector<SimState> trace;   // states visited; for Loop the repeated
                                 // state appears twice, second time last
  SimState terminal{};           // Loop: repeated state; Stuck: stuck state

  bool delivered() const { return kind == OutcomeKind::Delivered; }
};

/// Deterministic simulation of one packet from (s, ORIGIN, h0) until it
/// reaches t, repeats a state, or finds no usable rule. A rule forwarding
/// over a failed or missing arc counts as no usable rule.
Outcome route_packet(const Digraph& g, const RuleTable& rules,
                     const FailureSet& f, NodeId s, NodeId t, Header h0);

/// Static well-formedness report; empty means well-formed.
std::vector<std::string> validate_rule_table(const Digraph& g,
                                             const RuleTable& rules);

struct ResilienceResult {
  std::optional<FailureSet> counterexample;
  std::optional<Outcome> outcome;
  std::uint64_t candidates = 0;  // subsets examined, invalid ones included
  std::uint64_t valid = 0;       // subsets that passed validity

  bool resilient() const { return !counterexample.has_value(); }
};

/// Routes against every valid failure set of size <= budget, in stream
/// order, and reports the first one that is not delivered.
ResilienceResult verify_resilience(const Digraph& g, const RuleTable& rules,
                                   NodeId s, NodeId t, int budget, Header h0);

/// Complete random table for test harnesses: one rule per (node, in-port,
/// failure view of size <= max_view with at least one intact out-arc,
/// header value). ORIGIN keys are emitted at origin_node only. The same
/// seed always yields the same table.
RuleTable random_rule_table(const Digraph& g, NodeId origin_node, int width,
                            int max_view, std::uint64_t seed);

}  // namespace failover
