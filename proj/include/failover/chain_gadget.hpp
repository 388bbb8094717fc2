#pragma once

#include <optional>
#include <string>
#include <vector>

#include "failover/covering_array.hpp"
#include "failover/digraph.hpp"
#include "failover/routing.hpp"

namespace failover {

/// The six arcs of one decision column: x_i forks to the letter nodes,
/// each letter node either advances to y_i or retreats to s.
struct ColumnArcs {
  ArcId x_to_a;
  ArcId x_to_b;
  ArcId a_to_y;  // y_l is t
  ArcId b_to_y;
  ArcId a_to_s;
  ArcId b_to_s;
};

/// Chain of `length` decision points: 4*length+1 nodes, 7*length arcs.
/// Node naming follows the construction: s, x1, a1, b1, y1, ..., t.
struct ChainNetwork {
  Digraph graph;
  int length = 0;
  NodeId s = 0;
  NodeId t = 0;
  std::vector<NodeId> x, a, b, y;  // y.back() == t
  ArcId spine_from_s = 0;          // s->x1
  std::vector<ArcId> spine;        // y_i->x_{i+1}, size length-1
  std::vector<ColumnArcs> columns;
};

ChainNetwork build_chain(int length);

/// Letter choices one header configuration induces across the columns in a
/// complete failure-free pass; nullopt (bottom) when the walk returns to s,
/// gets stuck, or loops before reaching t.
using DecisionString = std::optional<std::string>;

/// For each chosen column, fails the to-y arc of the letter opposite to
/// intact[j], so a pass survives those columns iff it matches `intact`.
FailureSet canonical_failure_set(const ChainNetwork& chain,
                                 const std::vector<int>& columns,
                                 const std::string& intact);

/// Simulates every header value failure-free from (x1, in=s->x1) and records
/// the letter chosen at each decision point. Index = header value.
std::vector<DecisionString> extract_decision_strings(const ChainNetwork& chain,
                                                     const RuleTable& rules);

struct Attack {
  std::vector<int> columns;  // 1-based, ascending
  std::string intact;        // letters over {a,b}, aligned with columns
};

/// Reads the non-bottom strings as rows of a binary array (a=0, b=1) and
/// returns the first strength-k coverage gap, i.e. a tuple no configuration
/// realizes; breaking the opposite arcs then defeats every configuration.
std::optional<Attack> adversary_search(
    const std::vector<DecisionString>& strings, int failures, int length);

/// Width-ceil(log2 N) table that walks row (header mod N) through the chain
/// and advances to the next row whenever the packet falls back to s. At x_i
/// the row letter is preferred and the sibling arc is the local fallback.
/// The array's coverage is not required here; it is what decides whether
/// the result survives verify_resilience.
RuleTable synthesize_rules_from_ca(const ChainNetwork& chain,
                                   const CoveringArray& ca);

int prior_bound_bits(int failures);

/// k + ceil(log2 log2(ceil(n/4) - k)), evaluated exactly in integers; the
/// ceiling is applied once, outside. Requires n >= 4k+5.
int theorem_bound_bits(int failures, long long nodes);

/// ceil(log2 CAN(failures, length, 2)) via the exhaustive search.
int exact_bound_bits(int failures, int length, const SearchGuard& guard = {});

/// failures * ceil(log2 arc_count): the memorize-every-failure baseline.
long long trivial_upper_bits(int failures, long long arc_count);

struct BoundReport {
  int k = 0;
  long long n = 0;
  int l = 0;
  int prior_bits = 0;
  int theorem_bits = 0;
  std::optional<int> exact_bits;  // present only inside the search guard
  long long trivial_upper = 0;
};

BoundReport bound_report_for_nodes(int failures, long long nodes,
                                   const SearchGuard& guard = {});
BoundReport bound_report_for_length(int failures, int length,
                                    const SearchGuard& guard = {});
std::string bound_reports_csv(const std::vector<BoundReport>& rows);

}  // namespace failover
