#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "failover/chain_gadget.hpp"
#include "failover/routing.hpp"

using namespace failover;

namespace {

const std::vector<std::vector<int>> kFiveRow = {
    {0, 0, 0, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
const std::vector<std::vector<int>> kFourRow = {
    {0, 0, 0, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}};

std::uint64_t coarse_state_bound(const Digraph& g, int width) {
  std::size_t max_in = 0;
  for (NodeId v = 0; v < g.node_count(); ++v)
    max_in = std::max(max_in, g.in_arcs(v).size());
  return static_cast<std::uint64_t>(g.node_count()) * (max_in + 1) *
             (1ull << width) +
         1;
}

void check_delivered_soundness(const Digraph& g, const Outcome& oc,
                               const FailureSet& f, NodeId s, NodeId t) {
  REQUIRE(oc.delivered());
  REQUIRE_FALSE(oc.path.empty());
  CHECK(g.arc(oc.path.front()).tail == s);
  CHECK(g.arc(oc.path.back()).head == t);
  for (std::size_t i = 0; i + 1 < oc.path.size(); ++i)
    CHECK(g.arc(oc.path[i]).head == g.arc(oc.path[i + 1]).tail);
  for (ArcId a : oc.path) CHECK_FALSE(f.contains(a));
}

}  // namespace

TEST_CASE("clean pass over the length-1 chain takes three hops") {
  ChainNetwork chain = build_chain(1);
  auto ca = CoveringArray::from_cells(1, {{0}, {1}});
  RuleTable rules = synthesize_rules_from_ca(chain, ca);
  Outcome oc = route_packet(chain.graph, rules, FailureSet{}, chain.s, chain.t,
                            Header{0, rules.width()});
  REQUIRE(oc.delivered());
  CHECK(oc.steps == 3);
  std::vector<std::string> labels;
  for (ArcId a : oc.path) labels.push_back(chain.graph.arc_label(a));
  CHECK(labels == std::vector<std::string>{"s->x1", "x1->a1", "a1->t"});
}

TEST_CASE("an empty table is stuck at the origin") {
  ChainNetwork chain = build_chain(2);
  RuleTable rules(1);
  Outcome oc = route_packet(chain.graph, rules, FailureSet{}, chain.s, chain.t,
                            Header{1, 1});
  CHECK(oc.kind == OutcomeKind::Stuck);
  CHECK(oc.steps == 0);
  CHECK(oc.terminal == SimState{chain.s, kOriginPort, 1});
}

TEST_CASE("four-row table loops once both demanded arcs fail") {
  ChainNetwork chain = build_chain(4);
  RuleTable rules =
      synthesize_rules_from_ca(chain, CoveringArray::from_cells(2, kFourRow));
  REQUIRE(rules.width() == 2);
  FailureSet f({chain.columns[2].a_to_y, chain.columns[3].b_to_y});
  for (std::uint32_t h = 0; h < 4; ++h) {
    Outcome oc =
        route_packet(chain.graph, rules, f, chain.s, chain.t, Header{h, 2});
    CHECK(oc.kind == OutcomeKind::Loop);
    // the repeated state really repeats
    CHECK(std::count(oc.trace.begin(), oc.trace.end(), oc.terminal) == 2);
  }
}

TEST_CASE("route_packet input validation") {
  ChainNetwork chain = build_chain(1);
  RuleTable rules(2);
  CHECK_THROWS_AS(route_packet(chain.graph, rules, FailureSet{}, chain.s,
                               chain.t, Header{0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(route_packet(chain.graph, rules, FailureSet{}, chain.s,
                               chain.t, Header{4, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(route_packet(chain.graph, rules, FailureSet({404}), chain.s,
                               chain.t, Header{0, 2}),
                  std::invalid_argument);
}

TEST_CASE("validation accepts synthesized tables and flags broken ones") {
  ChainNetwork chain = build_chain(4);
  RuleTable good =
      synthesize_rules_from_ca(chain, CoveringArray::from_cells(2, kFiveRow));
  CHECK(validate_rule_table(chain.graph, good).empty());

  SUBCASE("forwarding over the key's own failed arc") {
    RuleTable bad(0);
    bad.add_rule(RuleKey{chain.x[0], chain.spine_from_s,
                         {chain.columns[0].x_to_a}, 0},
                 RuleAction{chain.columns[0].x_to_a, 0});
    auto violations = validate_rule_table(chain.graph, bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("failed arc") != std::string::npos);
  }
  SUBCASE("in-port pointing at a different node") {
    RuleTable bad(0);
    bad.add_rule(RuleKey{chain.x[0], chain.columns[1].a_to_y, {}, 0},
                 RuleAction{chain.columns[0].x_to_a, 0});
    auto violations = validate_rule_table(chain.graph, bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("in-port") != std::string::npos);
  }
  SUBCASE("non-local failure view and foreign out-arc") {
    RuleTable bad(0);
    bad.add_rule(RuleKey{chain.x[0], chain.spine_from_s,
                         {chain.columns[1].a_to_y}, 0},
                 RuleAction{chain.columns[1].a_to_y, 0});
    // non-local view arc, foreign out-arc, and out-arc inside the view
    CHECK(validate_rule_table(chain.graph, bad).size() == 3);
  }
}

TEST_CASE("duplicate keys and oversized headers are rejected at insertion") {
  ChainNetwork chain = build_chain(1);
  RuleTable t(1);
  RuleKey key{chain.s, kOriginPort, {}, 0};
  t.add_rule(key, RuleAction{chain.spine_from_s, 0});
  CHECK_THROWS_AS(t.add_rule(key, RuleAction{chain.spine_from_s, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(t.add_rule(RuleKey{chain.s, kOriginPort, {}, 2},
                             RuleAction{chain.spine_from_s, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(t.add_rule(RuleKey{chain.s, kOriginPort, {}, 1},
                             RuleAction{chain.spine_from_s, 2}),
                  std::invalid_argument);
}

TEST_CASE("resilience verdicts on the length-4 chain") {
  ChainNetwork chain = build_chain(4);
  RuleTable five =
      synthesize_rules_from_ca(chain, CoveringArray::from_cells(2, kFiveRow));
  REQUIRE(five.width() == 3);

  SUBCASE("budget 2 with the strength-2 array is resilient") {
    auto res = verify_resilience(chain.graph, five, chain.s, chain.t, 2,
                                 Header{0, 3});
    CHECK(res.resilient());
    CHECK(res.candidates == 407);  // 1 + 28 + C(28,2)
  }
  SUBCASE("budget 0 only needs the failure-free pass") {
    auto res = verify_resilience(chain.graph, five, chain.s, chain.t, 0,
                                 Header{0, 3});
    CHECK(res.resilient());
    CHECK(res.candidates == 1);
  }
  SUBCASE("four rows cannot survive budget 2") {
    RuleTable four =
        synthesize_rules_from_ca(chain, CoveringArray::from_cells(2, kFourRow));
    auto res = verify_resilience(chain.graph, four, chain.s, chain.t, 2,
                                 Header{0, 2});
    REQUIRE_FALSE(res.resilient());
    CHECK_FALSE(res.outcome->delivered());
  }
}

TEST_CASE("simulation is deterministic and respects the state bound") {
  ChainNetwork chain = build_chain(3);
  const std::uint64_t bound = coarse_state_bound(chain.graph, 2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RuleTable rules = random_rule_table(chain.graph, chain.s, 2, 2, seed);
    CHECK(validate_rule_table(chain.graph, rules).empty());
    auto sets = enumerate_valid_failure_sets(chain.graph, chain.s, chain.t, 2);
    for (std::size_t i = 0; i < sets.size(); i += 7) {
      const FailureSet& f = sets[i];
      for (std::uint32_t h = 0; h < 4; ++h) {
        Outcome first = route_packet(chain.graph, rules, f, chain.s, chain.t,
                                     Header{h, 2});
        Outcome second = route_packet(chain.graph, rules, f, chain.s, chain.t,
                                      Header{h, 2});
        CHECK(first.kind == second.kind);
        CHECK(first.path == second.path);
        CHECK(first.steps == second.steps);
        CHECK(first.trace == second.trace);
        CHECK(static_cast<std::uint64_t>(first.steps) <= bound);
        if (first.delivered())
          check_delivered_soundness(chain.graph, first, f, chain.s, chain.t);
        if (first.kind == OutcomeKind::Loop)
          CHECK(std::count(first.trace.begin(), first.trace.end(),
                           first.terminal) == 2);
      }
    }
  }
}

TEST_CASE("budget zero equals the failure-free run") {
  ChainNetwork chain = build_chain(2);
  for (std::uint64_t seed = 50; seed < 70; ++seed) {
    RuleTable rules = random_rule_table(chain.graph, chain.s, 1, 1, seed);
    auto res =
        verify_resilience(chain.graph, rules, chain.s, chain.t, 0, Header{0, 1});
    Outcome oc = route_packet(chain.graph, rules, FailureSet{}, chain.s,
                              chain.t, Header{0, 1});
    CHECK(res.resilient() == oc.delivered());
  }
}
