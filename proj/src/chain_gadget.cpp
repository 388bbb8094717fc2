#include "failover/chain_gadget.hpp"

#include <algorithm>
#include <set>

namespace failover {

ChainNetwork build_chain(int length) {
  if (length < 1) throw std::invalid_argument("chain length must be >= 1");
  ChainNetwork chain;
  chain.length = length;
  Digraph& g = chain.graph;

  chain.s = g.add_node("s");
  for (int i = 1; i <= length; ++i) {
    const std::string suffix = std::to_string(i);
    chain.x.push_back(g.add_node("x" + suffix));
    chain.a.push_back(g.add_node("a" + suffix));
    chain.b.push_back(g.add_node("b" + suffix));
    chain.y.push_back(i == length ? -1 : g.add_node("y" + suffix));
  }
  chain.t = g.add_node("t");
  chain.y.back() = chain.t;

  chain.spine_from_s = g.add_arc(chain.s, chain.x[0]);
  for (int i = 0; i < length; ++i) {
    ColumnArcs col;
    col.x_to_a = g.add_arc(chain.x[i], chain.a[i]);
    col.x_to_b = g.add_arc(chain.x[i], chain.b[i]);
    col.a_to_y = g.add_arc(chain.a[i], chain.y[i]);
    col.b_to_y = g.add_arc(chain.b[i], chain.y[i]);
    col.a_to_s = g.add_arc(chain.a[i], chain.s);
    col.b_to_s = g.add_arc(chain.b[i], chain.s);
    chain.columns.push_back(col);
    if (i + 1 < length)
      chain.spine.push_back(g.add_arc(chain.y[i], chain.x[i + 1]));
  }
  return chain;
}

FailureSet canonical_failure_set(const ChainNetwork& chain,
                                 const std::vector<int>& columns,
                                 const std::string& intact) {
  if (columns.size() != intact.size())
    throw std::invalid_argument("one intact letter per chosen column");
  std::set<int> distinct(columns.begin(), columns.end());
  if (distinct.size() != columns.size())
    throw std::invalid_argument("columns must be distinct");
  std::vector<ArcId> failed;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const int col = columns[j];
    if (col < 1 || col > chain.length)
      throw std::invalid_argument("column index out of range");
    const char letter = intact[j];
    if (letter != 'a' && letter != 'b')
      throw std::invalid_argument("intact letters must be 'a' or 'b'");
    const ColumnArcs& arcs = chain.columns[col - 1];
    failed.push_back(letter == 'a' ? arcs.b_to_y : arcs.a_to_y);
  }
  return FailureSet(std::move(failed));
}

std::vector<DecisionString> extract_decision_strings(const ChainNetwork& chain,
                                                     const RuleTable& rules) {
  auto violations = validate_rule_table(chain.graph, rules);
  if (!violations.empty())
    throw std::invalid_argument("rule table is malformed: " + violations.front());

  const Digraph& g = chain.graph;
  std::vector<int> column_of_x(g.node_count(), -1);
  for (int i = 0; i < chain.length; ++i) column_of_x[chain.x[i]] = i;

  const std::uint32_t space = rules.header_space();
  std::vector<DecisionString> out(space);
  for (std::uint32_t h = 0; h < space; ++h) {
    std::string letters;
    SimState st{chain.x[0], chain.spine_from_s, h};
    std::set<SimState> seen;
    bool bottom = false;
    while (true) {
      if (st.node == chain.t) break;
      if (st.node == chain.s || !seen.insert(st).second) {
        bottom = true;  // fell back to s, or cycled without reaching it
        break;
      }
      const RuleAction* act =
          rules.find(RuleKey{st.node, st.in_port, {}, st.header});
      if (!act) {
        bottom = true;  // stuck counts as no complete pass
        break;
      }
      const int col = column_of_x[st.node];
      if (col >= 0)
        letters += act->out_arc == chain.columns[col].x_to_a ? 'a' : 'b';
      st = SimState{g.arc(act->out_arc).head, act->out_arc, act->new_header};
    }
    if (!bottom && static_cast<int>(letters.size()) != chain.length)
      throw std::logic_error("complete pass with wrong decision count");
    out[h] = bottom ? DecisionString{} : DecisionString{std::move(letters)};
  }
  return out;
}

std::optional<Attack> adversary_search(
    const std::vector<DecisionString>& strings, int failures, int length) {
  if (failures < 1 || failures > length)
    throw std::invalid_argument("failure budget must be in 1..length");
  std::vector<std::uint32_t> rows;
  for (const auto& s : strings) {
    if (!s) continue;
    if (static_cast<int>(s->size()) != length)
      throw std::invalid_argument("decision string length mismatch");
    std::uint32_t bits = 0;
    for (char letter : *s) {
      if (letter != 'a' && letter != 'b')
        throw std::invalid_argument("decision letters must be 'a' or 'b'");
      bits = (bits << 1) | (letter == 'b' ? 1u : 0u);
    }
    rows.push_back(bits);
  }
  auto gap = first_coverage_gap(rows, length, failures);
  if (!gap) return std::nullopt;
  Attack attack;
  attack.columns = gap->columns;
  for (int bit : gap->tuple_bits()) attack.intact += bit ? 'b' : 'a';
  return attack;
}

RuleTable synthesize_rules_from_ca(const ChainNetwork& chain,
                                   const CoveringArray& ca) {
  if (ca.cols() != chain.length)
    throw std::invalid_argument("array columns must match the chain length");
  const std::uint32_t n = static_cast<std::uint32_t>(ca.rows());
  RuleTable table(ceil_log2(n));
  const std::uint32_t space = table.header_space();

  for (std::uint32_t h = 0; h < space; ++h) {
    const std::uint32_t row = h % n;
    const std::uint32_t next = (row + 1) % n;

    // s: fresh packets start their row; returning packets advance it
    table.add_rule(RuleKey{chain.s, kOriginPort, {}, h},
                   RuleAction{chain.spine_from_s, h});
    for (const ColumnArcs& col : chain.columns) {
      table.add_rule(RuleKey{chain.s, col.a_to_s, {}, h},
                     RuleAction{chain.spine_from_s, next});
      table.add_rule(RuleKey{chain.s, col.b_to_s, {}, h},
                     RuleAction{chain.spine_from_s, next});
    }

    for (int i = 0; i < chain.length; ++i) {
      const ColumnArcs& col = chain.columns[i];
      const ArcId into_x = i == 0 ? chain.spine_from_s : chain.spine[i - 1];
      const ArcId preferred =
          ca.cell(static_cast<int>(row), i) == 0 ? col.x_to_a : col.x_to_b;
      table.add_rule(RuleKey{chain.x[i], into_x, {}, h},
                     RuleAction{preferred, h});
      // locally failed fork arm: take the sibling
      table.add_rule(RuleKey{chain.x[i], into_x, {col.x_to_a}, h},
                     RuleAction{col.x_to_b, h});
      table.add_rule(RuleKey{chain.x[i], into_x, {col.x_to_b}, h},
                     RuleAction{col.x_to_a, h});

      table.add_rule(RuleKey{chain.a[i], col.x_to_a, {}, h},
                     RuleAction{col.a_to_y, h});
      table.add_rule(RuleKey{chain.a[i], col.x_to_a, {col.a_to_y}, h},
                     RuleAction{col.a_to_s, h});
      table.add_rule(RuleKey{chain.a[i], col.x_to_a, {col.a_to_s}, h},
                     RuleAction{col.a_to_y, h});

      table.add_rule(RuleKey{chain.b[i], col.x_to_b, {}, h},
                     RuleAction{col.b_to_y, h});
      table.add_rule(RuleKey{chain.b[i], col.x_to_b, {col.b_to_y}, h},
                     RuleAction{col.b_to_s, h});
      table.add_rule(RuleKey{chain.b[i], col.x_to_b, {col.b_to_s}, h},
                     RuleAction{col.b_to_y, h});

      if (i + 1 < chain.length) {
        table.add_rule(RuleKey{chain.y[i], col.a_to_y, {}, h},
                       RuleAction{chain.spine[i], h});
        table.add_rule(RuleKey{chain.y[i], col.b_to_y, {}, h},
                       RuleAction{chain.spine[i], h});
      }
    }
  }
  return table;
}

int prior_bound_bits(int failures) {
  if (failures < 0) throw std::invalid_argument("failures must be >= 0");
  return ceil_log2(static_cast<unsigned long long>(failures) + 1);
}

int theorem_bound_bits(int failures, long long nodes) {
  if (failures < 0) throw std::invalid_argument("failures must be >= 0");
  if (nodes < 4ll * failures + 5)
    throw std::domain_error("need at least 4k+5 nodes");
  const long long m = (nodes + 3) / 4 - failures;  // >= 2 here
  // ceil(log2 log2 m) == min j with 2^(2^j) >= m == ceil_log2(ceil_log2(m))
  return failures + ceil_log2(static_cast<unsigned long long>(
                        ceil_log2(static_cast<unsigned long long>(m))));
}

int exact_bound_bits(int failures, int length, const SearchGuard& guard) {
  return ceil_log2(
      static_cast<unsigned long long>(can_exact(failures, length, guard).n));
}

long long trivial_upper_bits(int failures, long long arc_count) {
  if (failures < 0) throw std::invalid_argument("failures must be >= 0");
  if (arc_count < 1) throw std::invalid_argument("arc count must be >= 1");
  return static_cast<long long>(failures) *
         ceil_log2(static_cast<unsigned long long>(arc_count));
}

namespace {

BoundReport make_report(int k, long long n, int l, const SearchGuard& guard) {
  BoundReport report;
  report.k = k;
  report.n = n;
  report.l = l;
  report.prior_bits = prior_bound_bits(k);
  report.theorem_bits = theorem_bound_bits(k, n);
  if (k >= 1 && k <= l && guard.admits(k, l))
    report.exact_bits = exact_bound_bits(k, l, guard);
  report.trivial_upper = trivial_upper_bits(k, 7ll * l);
  return report;
}

}  // namespace

BoundReport bound_report_for_nodes(int failures, long long nodes,
                                   const SearchGuard& guard) {
  if (nodes < 5) throw std::domain_error("need at least 5 nodes");
  const int l = static_cast<int>((nodes + 3) / 4 - 1);
  return make_report(failures, nodes, l, guard);
}

BoundReport bound_report_for_length(int failures, int length,
                                    const SearchGuard& guard) {
  if (length < 1) throw std::invalid_argument("chain length must be >= 1");
  return make_report(failures, 4ll * length + 1, length, guard);
}

std::string bound_reports_csv(const std::vector<BoundReport>& rows) {
  std::string out =
      "k,n,l,prior_bits,theorem_bits,exact_bits,trivial_upper_bits\n";
  for (const BoundReport& r : rows) {
    out += std::to_string(r.k) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.l) + ',' + std::to_string(r.prior_bits) + ',' +
           std::to_string(r.theorem_bits) + ',';
    if (r.exact_bits) out += std::to_string(*r.exact_bits);
    out += ',' + std::to_string(r.trivial_upper) + '\n';
  }
  return out;
}

}  // namespace failover
