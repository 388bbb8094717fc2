#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace failover {

using NodeId = int;
using ArcId = int;

struct Arc {
  ArcId id;
  NodeId tail;
  NodeId head;
  bool alive;
};

/// Directed multigraph with stable arc identities. Arc ids are dense
/// integers assigned at insertion; removing arcs (the failure overlay)
/// only marks them dead, so surviving arcs are never renumbered.
/// Self-loops and parallel arcs are representable.
class Digraph {
 public:
  NodeId add_node(const std::string& name);
  ArcId add_arc(NodeId tail, NodeId head);
  ArcId add_arc(const std::string& tail, const std::string& head);

  int node_count() const { return static_cast<int>(names_.size()); }
  /// Number of alive arcs.
  int arc_count() const { return alive_count_; }
  /// Total arc slots ever allocated, dead ones included.
  int arc_slots() const { return static_cast<int>(arcs_.size()); }

  bool has_node(NodeId v) const {
    return v >= 0 && v < static_cast<int>(names_.size());
  }
  bool has_arc(ArcId a) const {
    return a >= 0 && a < static_cast<int>(arcs_.size()) && arcs_[a].alive;
  }

  NodeId node_id(const std::string& name) const;
  std::optional<NodeId> find_node(const std::string& name) const;
  const std::string& node_name(NodeId v) const;

  const Arc& arc(ArcId a) const;
  /// Human-readable arc reference, "tail->head".
  std::string arc_label(ArcId a) const;
  std::optional<ArcId> find_arc(NodeId tail, NodeId head) const;
  ArcId arc_by_label(const std::string& label) const;

  const std::vector<ArcId>& out_arcs(NodeId v) const;
  const std::vector<ArcId>& in_arcs(NodeId v) const;
  std::vector<ArcId> alive_arcs() const;

  /// Copy of the graph with the given arcs marked dead. Node and arc
  /// identities carry over unchanged.
  Digraph with_arcs_removed(const class FailureSet& f) const;

 private:
  void check_node(NodeId v) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
  int alive_count_ = 0;
};

/// A set of arc identities intended to fail together. Stored sorted.
class FailureSet {
 public:
  FailureSet() = default;
  explicit FailureSet(std::vector<ArcId> arcs);

  static FailureSet from_labels(const Digraph& g,
                                const std::vector<std::string>& labels);

  bool contains(ArcId a) const;
  bool empty() const { return arcs_.empty(); }
  std::size_t size() const { return arcs_.size(); }
  const std::vector<ArcId>& arcs() const { return arcs_; }

  bool operator==(const FailureSet&) const = default;

 private:
  std::vector<ArcId> arcs_;
};

/// Throws std::invalid_argument if any member of f is not an alive arc of g.
void require_arcs_in(const Digraph& g, const FailureSet& f);

/// All nodes reachable from src by directed paths, src included. Sorted.
std::vector<NodeId> reachable_from(const Digraph& g, NodeId src);

/// All nodes that can reach dst by directed paths, dst included. Sorted.
/// Computed by a backward walk over in-arcs, independent of reachable_from.
std::vector<NodeId> co_reachable_to(const Digraph& g, NodeId dst);

/// Deadend avoidance: every node reachable from s (s included) has a
/// directed path to t.
bool is_valid_pair(const Digraph& g, NodeId s, NodeId t);

/// True iff the pair (s, t) stays valid once the arcs in f are removed.
bool is_valid_failure_set(const Digraph& g, const FailureSet& f, NodeId s,
                          NodeId t);

/// Streams the failure sets of cardinality <= budget that keep (s, t)
/// valid, by increasing cardinality and then lexicographic arc order.
/// The empty set comes first. Each consumer owns its own stream.
class ValidFailureSetStream {
 public:
  ValidFailureSetStream(const Digraph& g, NodeId s, NodeId t, int budget);

  std::optional<FailureSet> next();

  std::uint64_t candidates_seen() const { return candidates_; }
  std::uint64_t valid_seen() const { return valid_; }

 private:
  bool advance();

  const Digraph& g_;
  NodeId s_;
  NodeId t_;
  int budget_;
  std::vector<ArcId> arcs_;
  std::vector<int> pick_;
  int card_ = 0;
  bool fresh_ = true;
  bool done_ = false;
  std::uint64_t candidates_ = 0;
  std::uint64_t valid_ = 0;
};

/// Collects the whole stream. Convenience for small instances.
std::vector<FailureSet> enumerate_valid_failure_sets(const Digraph& g,
                                                     NodeId s, NodeId t,
                                                     int budget);

}  // namespace failover
