// Acceptance suite: runs every advertised end-to-end guarantee at its
// stated tolerance and prints one pass/fail line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_helpers.hpp"
#include "failover/chain_gadget.hpp"
#include "failover/serialization.hpp"
#include "oracles.hpp"

using namespace failover;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct check_failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw check_failed(what);
}

const std::vector<std::vector<int>> kFiveRow = {
    {0, 0, 0, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};

// ---- criterion 1: the worked example reproduces ----
void worked_example_reproduction() {
  const std::string text = cli::read_file(fs::path(DATA_DIR) / "ca_5x4_strength2.ca");
  CoveringArray from_file = parse_ca_text(text, 2);
  require(from_file.rows() == 5 && from_file.cols() == 4,
          "shipped example must be 5x4");
  require(is_covering_array(from_file), "shipped example must verify");
  require(from_file.row_data() == CoveringArray::from_cells(2, kFiveRow).row_data(),
          "shipped example must match the five known rows");

  ExactCount exact = can_exact(2, 4);
  require(exact.n == 5, "CAN(2,4,2) must be exactly 5");
  require(is_covering_array(exact.witness), "witness must verify");
  require(!search_with_rows(2, 4, 4).has_value(),
          "no 4-row strength-2 array on 4 columns may exist");
}

// shared by criteria 2 and 5: the gap-driven attack must take down every
// initial header value
void assert_table_defeated(const ChainNetwork& chain, const RuleTable& rules,
                           int k) {
  auto strings = extract_decision_strings(chain, rules);
  auto attack = adversary_search(strings, k, chain.length);
  require(attack.has_value(), "adversary must find a coverage gap");
  FailureSet f = canonical_failure_set(chain, attack->columns, attack->intact);
  require(is_valid_failure_set(chain.graph, f, chain.s, chain.t),
          "canonical failure set must be valid");
  for (std::uint32_t h = 0; h < rules.header_space(); ++h) {
    Outcome oc = route_packet(chain.graph, rules, f, chain.s, chain.t,
                              Header{h, rules.width()});
    require(!oc.delivered(), "attacked table must not deliver any header");
  }
}

// ---- criterion 2: the k+1 bound is beaten at two failures ----
void improvement_over_prior_bound() {
  require(exact_bound_bits(2, 4) == 3, "exact bits at (2,4) must be 3");
  require(prior_bound_bits(2) == 2, "prior bits at k=2 must be 2");
  require(exact_bound_bits(2, 4) > prior_bound_bits(2),
          "exact bound must beat the prior bound");

  ChainNetwork chain = build_chain(4);
  // every four-row slice of the optimal array synthesizes to width 2
  for (int drop = 0; drop < 5; ++drop) {
    auto cells = kFiveRow;
    cells.erase(cells.begin() + drop);
    RuleTable rules =
        synthesize_rules_from_ca(chain, CoveringArray::from_cells(2, cells));
    require(rules.width() == 2, "four rows must synthesize to width 2");
    assert_table_defeated(chain, rules, 2);
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    assert_table_defeated(
        chain, random_rule_table(chain.graph, chain.s, 2, 2, seed), 2);
}

// ---- criterion 3: the constructive converse survives exhaustively ----
void constructive_converse() {
  ChainNetwork chain = build_chain(4);
  RuleTable rules =
      synthesize_rules_from_ca(chain, CoveringArray::from_cells(2, kFiveRow));
  require(rules.width() == 3, "five rows must synthesize to width 3");
  require(validate_rule_table(chain.graph, rules).empty(),
          "synthesized table must be well-formed");
  auto res =
      verify_resilience(chain.graph, rules, chain.s, chain.t, 2, Header{0, 3});
  require(res.resilient(), "table must survive every valid set of size <= 2");
  require(res.candidates == 407, "candidate subsets must number 407");
}

// ---- criterion 4: the size arithmetic of the bound ----
void theorem_arithmetic() {
  for (int k = 0; k <= 10; ++k)
    require(build_chain(k + 1).graph.node_count() == 4 * k + 5,
            "chain k+1 must have 4k+5 nodes");
  for (int l = 1; l <= 12; ++l) {
    const long long n = build_chain(l).graph.node_count();
    require((n + 3) / 4 - 1 == l, "l must equal ceil(n/4)-1");
  }
  for (int k = 0; k <= 6; ++k)
    for (long long n = 4 * k + 5; n <= 1000000; ++n)
      if (theorem_bound_bits(k, n) != oracles::theorem_bits_bigint(k, n))
        throw check_failed("theorem bits diverge at k=" + std::to_string(k) +
                           " n=" + std::to_string(n));
}

// ---- criterion 5: the property suites ----
void property_suites() {
  // verifier vs brute-force oracle, 1000 random instances
  std::mt19937_64 rng(811);
  for (int i = 0; i < 1000; ++i) {
    const int t = 1 + static_cast<int>(rng() % 3);
    const int l = t + static_cast<int>(rng() % (7 - t));
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<std::uint32_t> rows;
    for (int r = 0; r < n; ++r)
      rows.push_back(static_cast<std::uint32_t>(rng() & ((1u << l) - 1)));
    CoveringArray ca(t, l, rows);
    auto gaps = uncovered_tuples(ca);
    auto naive = oracles::naive_gaps(ca.cells(), l, t);
    require(gaps.size() == naive.size(), "gap counts must agree with oracle");
    for (std::size_t j = 0; j < gaps.size(); ++j)
      require(gaps[j].columns == naive[j].columns &&
                  gaps[j].tuple_bits() == naive[j].tuple,
              "gap lists must agree with oracle, in order");
    require(is_covering_array(ca) == naive.empty(),
            "verifier verdict must agree with oracle");
  }

  struct Combo {
    int l, k, width;
  };
  for (Combo combo : {Combo{3, 2, 1}, Combo{4, 2, 2}, Combo{4, 3, 2}}) {
    ChainNetwork chain = build_chain(combo.l);

    // attack soundness: under-provisioned synthesized + 100 random tables
    CoveringArray full = greedy_construct(combo.k, combo.l);
    std::vector<std::uint32_t> truncated(
        full.row_data().begin(), full.row_data().begin() + (1 << combo.width));
    assert_table_defeated(
        chain,
        synthesize_rules_from_ca(chain,
                                 CoveringArray(combo.k, combo.l, truncated)),
        combo.k);
    for (std::uint64_t seed = 500; seed < 600; ++seed)
      assert_table_defeated(
          chain,
          random_rule_table(chain.graph, chain.s, combo.width, 2, seed),
          combo.k);

    // defense soundness: verified arrays survive the exhaustive check
    for (const CoveringArray& ca : {full, can_exact(combo.k, combo.l).witness}) {
      require(is_covering_array(ca), "defense arrays must verify");
      RuleTable rules = synthesize_rules_from_ca(chain, ca);
      auto res = verify_resilience(chain.graph, rules, chain.s, chain.t,
                                   combo.k, Header{0, rules.width()});
      require(res.resilient(), "synthesized defense must be resilient");

      // round trip: the decision strings are exactly the array rows
      auto strings = extract_decision_strings(chain, rules);
      const std::uint32_t n = static_cast<std::uint32_t>(ca.rows());
      require(strings.size() == rules.header_space(),
              "one decision string per header");
      for (std::uint32_t h = 0; h < strings.size(); ++h) {
        require(strings[h].has_value(), "synthesized strings are complete");
        std::string expected;
        for (int c = 0; c < combo.l; ++c)
          expected += ca.cell(static_cast<int>(h % n), c) ? 'b' : 'a';
        require(*strings[h] == expected, "strings must reproduce the rows");
      }
    }
  }
}

// ---- criterion 6: byte-identical result sections ----
void cli_determinism() {
  fs::path dir = fs::current_path() / "acceptance_tmp";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };

  cli::write_file(at("five.ca"), "0 0 0 0\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n");
  cli::write_file(at("four.ca"), "0 0 0 0\n0 1 1 1\n1 0 1 1\n1 1 0 1\n");
  auto synth = cli::run("chain synth --l 4 --ca " + at("four.ca") + " --out " +
                        at("four.rules.json"));
  require(synth.exit_code == 0, "setup synth must succeed");

  const std::vector<std::string> commands = {
      "ca verify --strength 2 --file " + at("five.ca"),
      "ca construct --strength 2 --cols 5",
      "ca can --strength 2 --cols 4",
      "ca bound --strength 2 --cols 4",
      "chain build --l 3",
      "chain synth --l 4 --ca " + at("five.ca") + " --out " + at("five.rules.json"),
      "chain attack --l 4 --k 2 --rules " + at("four.rules.json"),
      "chain verify --l 4 --k 2 --rules " + at("four.rules.json"),
      "chain verify --l 4 --k 2 --rules " + at("five.rules.json"),
      "chain bounds --k 2 --n 13",
      "chain random --l 3 --width 2 --seed 7 --out " + at("rnd.rules.json"),
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string r1 = at("r" + std::to_string(i) + "_a.json");
    const std::string r2 = at("r" + std::to_string(i) + "_b.json");
    auto first = cli::run(commands[i] + " --json " + r1);
    auto second = cli::run(commands[i] + " --json " + r2);
    require(first.exit_code == 0 && second.exit_code == 0,
            "command must succeed twice: " + commands[i]);
    require(cli::strip_duration(first.out) == cli::strip_duration(second.out),
            "stdout must be byte-identical: " + commands[i]);
    const json a = json::parse(cli::read_file(r1));
    const json b = json::parse(cli::read_file(r2));
    require(a.at("results").dump() == b.at("results").dump(),
            "results section must be byte-identical: " + commands[i]);
  }
}

struct Criterion {
  int number;
  std::string name;
  double limit_s;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked-example-reproduction", 10.0, worked_example_reproduction},
      {2, "improvement-over-prior-bound", 60.0, improvement_over_prior_bound},
      {3, "constructive-converse", 60.0, constructive_converse},
      {4, "theorem-arithmetic", 10.0, theorem_arithmetic},
      {5, "property-suites", 300.0, property_suites},
      {6, "cli-determinism", 300.0, cli_determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (error.empty() && elapsed > c.limit_s)
      error = "exceeded the " + std::to_string(c.limit_s) + " s limit";
    if (error.empty()) {
      std::printf("PASS  criterion %d  %s  (%.2f s, limit %.0f s)\n", c.number,
                  c.name.c_str(), elapsed, c.limit_s);
    } else {
      ++failures;
      std::printf("FAIL  criterion %d  %s  (%.2f s): %s\n", c.number,
                  c.name.c_str(), elapsed, error.c_str());
    }
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
