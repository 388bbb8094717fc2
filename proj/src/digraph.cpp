#include "failover/digraph.hpp"

#include <algorithm>
#include <deque>

namespace failover {

NodeId Digraph::add_node(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("node name must be non-empty");
  if (name.find("->") != std::string::npos)
    throw std::invalid_argument("node name must not contain '->': " + name);
  if (index_.count(name))
    throw std::invalid_argument("duplicate node name: " + name);
  NodeId id = static_cast<NodeId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

ArcId Digraph::add_arc(NodeId tail, NodeId head) {
  check_node(tail);
  check_node(head);
  ArcId id = static_cast<ArcId>(arcs_.size());
  arcs_.push_back(Arc{id, tail, head, true});
  out_[tail].push_back(id);
  in_[head].push_back(id);
  ++alive_count_;
  return id;
}

ArcId Digraph::add_arc(const std::string& tail, const std::string& head) {
  return add_arc(node_id(tail), node_id(head));
}

NodeId Digraph::node_id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::invalid_argument("unknown node: " + name);
  return it->second;
}

std::optional<NodeId> Digraph::find_node(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Digraph::node_name(NodeId v) const {
  check_node(v);
  return names_[v];
}

const Arc& Digraph::arc(ArcId a) const {
  if (a < 0 || a >= static_cast<int>(arcs_.size()))
    throw std::invalid_argument("unknown arc id: " + std::to_string(a));
  return arcs_[a];
}

std::string Digraph::arc_label(ArcId a) const {
  const Arc& e = arc(a);
  return names_[e.tail] + "->" + names_[e.head];
}

std::optional<ArcId> Digraph::find_arc(NodeId tail, NodeId head) const {
  check_node(tail);
  check_node(head);
  for (ArcId a : out_[tail])
    if (arcs_[a].head == head) return a;
  return std::nullopt;
}

ArcId Digraph::arc_by_label(const std::string& label) const {
  auto sep = label.find("->");
  if (sep == std::string::npos)
    throw std::invalid_argument("arc reference must be 'tail->head': " + label);
  NodeId tail = node_id(label.substr(0, sep));
  NodeId head = node_id(label.substr(sep + 2));
  auto a = find_arc(tail, head);
  if (!a) throw std::invalid_argument("no such arc: " + label);
  return *a;
}

const std::vector<ArcId>& Digraph::out_arcs(NodeId v) const {
  check_node(v);
  return out_[v];
}

const std::vector<ArcId>& Digraph::in_arcs(NodeId v) const {
  check_node(v);
  return in_[v];
}

std::vector<ArcId> Digraph::alive_arcs() const {
  std::vector<ArcId> out;
  out.reserve(alive_count_);
  for (const Arc& e : arcs_)
    if (e.alive) out.push_back(e.id);
  return out;
}

Digraph Digraph::with_arcs_removed(const FailureSet& f) const {
  require_arcs_in(*this, f);
  Digraph g = *this;
  for (ArcId a : f.arcs()) {
    g.arcs_[a].alive = false;
    --g.alive_count_;
  }
  for (auto& v : g.out_)
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](ArcId a) { return !g.arcs_[a].alive; }),
            v.end());
  for (auto& v : g.in_)
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](ArcId a) { return !g.arcs_[a].alive; }),
            v.end());
  return g;
}

void Digraph::check_node(NodeId v) const {
  if (!has_node(v))
    throw std::invalid_argument("unknown node id: " + std::to_string(v));
}

FailureSet::FailureSet(std::vector<ArcId> arcs) : arcs_(std::move(arcs)) {
  std::sort(arcs_.begin(), arcs_.end());
  arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
}

FailureSet FailureSet::from_labels(const Digraph& g,
                                   const std::vector<std::string>& labels) {
  std::vector<ArcId> ids;
  ids.reserve(labels.size());
  for (const auto& s : labels) ids.push_back(g.arc_by_label(s));
  return FailureSet(std::move(ids));
}

bool FailureSet::contains(ArcId a) const {
  return std::binary_search(arcs_.begin(), arcs_.end(), a);
}

void require_arcs_in(const Digraph& g, const FailureSet& f) {
  for (ArcId a : f.arcs())
    if (!g.has_arc(a))
      throw std::invalid_argument("failure set references missing arc id " +
                                  std::to_string(a));
}

std::vector<NodeId> reachable_from(const Digraph& g, NodeId src) {
  if (!g.has_node(src))
    throw std::invalid_argument("unknown node id: " + std::to_string(src));
  std::vector<char> seen(g.node_count(), 0);
  std::deque<NodeId> queue{src};
  seen[src] = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (ArcId a : g.out_arcs(v)) {
      NodeId w = g.arc(a).head;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

std::vector<NodeId> co_reachable_to(const Digraph& g, NodeId dst) {
  if (!g.has_node(dst))
    throw std::invalid_argument("unknown node id: " + std::to_string(dst));
  std::vector<char> seen(g.node_count(), 0);
  std::deque<NodeId> queue{dst};
  seen[dst] = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (ArcId a : g.in_arcs(v)) {
      NodeId w = g.arc(a).tail;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

bool is_valid_pair(const Digraph& g, NodeId s, NodeId t) {
  std::vector<NodeId> forward = reachable_from(g, s);
  std::vector<NodeId> toward_t = co_reachable_to(g, t);
  // forward and toward_t are sorted; valid iff forward is a subset.
  return std::includes(toward_t.begin(), toward_t.end(), forward.begin(),
                       forward.end());
}

bool is_valid_failure_set(const Digraph& g, const FailureSet& f, NodeId s,
                          NodeId t) {
  require_arcs_in(g, f);
  return is_valid_pair(g.with_arcs_removed(f), s, t);
}

ValidFailureSetStream::ValidFailureSetStream(const Digraph& g, NodeId s,
                                             NodeId t, int budget)
    : g_(g), s_(s), t_(t), budget_(budget), arcs_(g.alive_arcs()) {
  if (budget < 0) throw std::invalid_argument("budget must be >= 0");
  if (!g.has_node(s) || !g.has_node(t))
    throw std::invalid_argument("unknown node id");
}

// Advances pick_ to the next cardinality-then-lexicographic combination.
bool ValidFailureSetStream::advance() {
  if (fresh_) {
    fresh_ = false;
    card_ = 0;
    pick_.clear();
    return true;
  }
  const int m = static_cast<int>(arcs_.size());
  int i = card_ - 1;
  while (i >= 0 && pick_[i] == m - (card_ - i)) --i;
  if (i >= 0) {
    ++pick_[i];
    for (int j = i + 1; j < card_; ++j) pick_[j] = pick_[j - 1] + 1;
    return true;
  }
  // next cardinality
  ++card_;
  if (card_ > budget_ || card_ > m) return false;
  pick_.resize(card_);
  for (int j = 0; j < card_; ++j) pick_[j] = j;
  return true;
}

std::optional<FailureSet> ValidFailureSetStream::next() {
  if (done_) return std::nullopt;
  while (advance()) {
    ++candidates_;
    std::vector<ArcId> ids;
    ids.reserve(card_);
    for (int j = 0; j < card_; ++j) ids.push_back(arcs_[pick_[j]]);
    FailureSet f(std::move(ids));
    if (is_valid_failure_set(g_, f, s_, t_)) {
      ++valid_;
      return f;
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<FailureSet> enumerate_valid_failure_sets(const Digraph& g,
                                                     NodeId s, NodeId t,
                                                     int budget) {
  ValidFailureSetStream stream(g, s, t, budget);
  std::vector<FailureSet> out;
  while (auto f = stream.next()) out.push_back(std::move(*f));
  return out;
}

}  // namespace failover
