// failover_lab: experiments on local fast-failover routing over directed
// networks with rewritable header bits, and on the binary covering arrays
// the chain construction reduces to.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "failover/chain_gadget.hpp"
#include "failover/covering_array.hpp"
#include "failover/digraph.hpp"
#include "failover/routing.hpp"
#include "failover/serialization.hpp"

namespace {

using failover::Attack;
using failover::BoundReport;
using failover::ChainNetwork;
using failover::CoveringArray;
using failover::FailureSet;
using failover::Header;
using failover::Outcome;
using failover::RuleTable;
using failover::SearchGuard;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

// One experiment report: echoed command, inputs, results, wall-clock time.
// Only the duration varies between identical runs, and it stays outside
// the results section.
struct Report {
  std::string command;
  json inputs = json::object();
  json results = json::object();
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  void finish(const std::string& json_path) const {
    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count();
    if (!json_path.empty()) {
      json full{{"command", command},
                {"inputs", inputs},
                {"results", results},
                {"duration_ms", ms}};
      write_file(json_path, full.dump(2) + "\n");
    }
    std::printf("duration_ms: %.3f\n", ms);
  }
};

CoveringArray load_ca(const std::string& path, int strength) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return failover::ca_from_json(json::parse(text));
  return failover::parse_ca_text(text, strength);
}

RuleTable load_rules(const failover::Digraph& g, const std::string& path) {
  return failover::rule_table_from_json(g, json::parse(read_file(path)));
}

const char* outcome_name(const Outcome& oc) {
  switch (oc.kind) {
    case failover::OutcomeKind::Delivered: return "Delivered";
    case failover::OutcomeKind::Loop: return "Loop";
    case failover::OutcomeKind::Stuck: return "Stuck";
  }
  return "?";
}

// ---- ca subcommands ----

struct CaVerifyOpts {
  int strength = 0;
  std::string file;
  std::string json_path;
};

void run_ca_verify(const CaVerifyOpts& opt) {
  Report report;
  report.command = "ca verify";
  report.inputs = {{"strength", opt.strength}, {"file", opt.file}};
  CoveringArray ca = load_ca(opt.file, opt.strength);
  if (ca.strength() != opt.strength)
    ca = CoveringArray(opt.strength, ca.cols(), ca.row_data());
  auto gaps = failover::uncovered_tuples(ca);
  json gap_list = json::array();
  for (const auto& g : gaps) gap_list.push_back(failover::gap_to_json(g));
  report.results = {{"is_covering_array", gaps.empty()},
                    {"rows", ca.rows()},
                    {"cols", ca.cols()},
                    {"strength", ca.strength()},
                    {"gap_count", gaps.size()},
                    {"gaps", std::move(gap_list)}};
  std::printf("covering array: %s\n", gaps.empty() ? "true" : "false");
  std::printf("rows: %d  cols: %d  strength: %d\n", ca.rows(), ca.cols(),
              ca.strength());
  std::printf("gaps: %zu\n", gaps.size());
  for (std::size_t i = 0; i < gaps.size() && i < 20; ++i) {
    std::printf("  columns {");
    for (std::size_t j = 0; j < gaps[i].columns.size(); ++j)
      std::printf("%s%d", j ? "," : "", gaps[i].columns[j]);
    std::printf("} missing (");
    auto bits = gaps[i].tuple_bits();
    for (std::size_t j = 0; j < bits.size(); ++j)
      std::printf("%s%d", j ? "," : "", bits[j]);
    std::printf(")\n");
  }
  report.finish(opt.json_path);
}

struct CaConstructOpts {
  int strength = 0;
  int cols = 0;
  std::string out;
  std::string json_path;
};

void run_ca_construct(const CaConstructOpts& opt) {
  Report report;
  report.command = "ca construct";
  report.inputs = {{"strength", opt.strength}, {"cols", opt.cols}};
  CoveringArray ca = failover::greedy_construct(opt.strength, opt.cols);
  const std::string text = failover::ca_to_text(ca);
  report.results = {{"rows", ca.rows()},
                    {"cols", ca.cols()},
                    {"strength", ca.strength()},
                    {"array", failover::ca_to_json(ca)}};
  std::printf("rows: %d\n", ca.rows());
  std::fputs(text.c_str(), stdout);
  if (!opt.out.empty()) write_file(opt.out, text);
  report.finish(opt.json_path);
}

struct CaCanOpts {
  int strength = 0;
  int cols = 0;
  std::string json_path;
};

void run_ca_can(const CaCanOpts& opt) {
  Report report;
  report.command = "ca can";
  report.inputs = {{"strength", opt.strength}, {"cols", opt.cols}};
  auto exact =
      failover::can_exact(opt.strength, opt.cols, SearchGuard::from_env());
  report.results = {{"covering_array_number", exact.n},
                    {"witness", failover::ca_to_json(exact.witness)}};
  std::printf("covering array number: %d\n", exact.n);
  std::fputs(failover::ca_to_text(exact.witness).c_str(), stdout);
  report.finish(opt.json_path);
}

void run_ca_bound(const CaCanOpts& opt) {
  Report report;
  report.command = "ca bound";
  report.inputs = {{"strength", opt.strength}, {"cols", opt.cols}};
  const double bound = failover::sarkar_lower_bound(opt.strength, opt.cols);
  report.results = {{"sarkar_lower_bound", bound}, {"asymptotic", true}};
  std::printf("sarkar lower bound (asymptotic leading term): %.6f\n", bound);
  report.finish(opt.json_path);
}

// ---- chain subcommands ----

struct ChainBuildOpts {
  int length = 0;
  std::string out_json;
  std::string out_dot;
  std::string json_path;
};

void run_chain_build(const ChainBuildOpts& opt) {
  Report report;
  report.command = "chain build";
  report.inputs = {{"l", opt.length}};
  ChainNetwork chain = failover::build_chain(opt.length);
  json graph = failover::graph_to_json(chain.graph);
  const std::string dot = failover::graph_to_dot(chain.graph);
  report.results = {{"nodes", chain.graph.node_count()},
                    {"arcs", chain.graph.arc_count()},
                    {"graph", graph}};
  std::printf("nodes: %d\narcs: %d\n", chain.graph.node_count(),
              chain.graph.arc_count());
  if (!opt.out_json.empty()) write_file(opt.out_json, graph.dump(2) + "\n");
  if (!opt.out_dot.empty()) write_file(opt.out_dot, dot);
  if (opt.out_json.empty() && opt.out_dot.empty())
    std::fputs((graph.dump(2) + "\n").c_str(), stdout);
  report.finish(opt.json_path);
}

struct ChainSynthOpts {
  int length = 0;
  std::string ca_file;
  std::string out;
  std::string json_path;
};

void run_chain_synth(const ChainSynthOpts& opt) {
  Report report;
  report.command = "chain synth";
  report.inputs = {{"l", opt.length}, {"ca", opt.ca_file}, {"out", opt.out}};
  ChainNetwork chain = failover::build_chain(opt.length);
  CoveringArray ca = load_ca(opt.ca_file, 1);
  RuleTable rules = failover::synthesize_rules_from_ca(chain, ca);
  json table = failover::rule_table_to_json(chain.graph, rules);
  write_file(opt.out, table.dump(2) + "\n");
  report.results = {{"width", rules.width()},
                    {"rules", rules.size()},
                    {"rows", ca.rows()}};
  std::printf("width: %d\nrules: %zu\nrows: %d\n", rules.width(), rules.size(),
              ca.rows());
  report.finish(opt.json_path);
}

struct ChainAttackOpts {
  int length = 0;
  int failures = 0;
  std::string rules_file;
  std::string json_path;
};

void run_chain_attack(const ChainAttackOpts& opt) {
  Report report;
  report.command = "chain attack";
  report.inputs = {{"l", opt.length},
                   {"k", opt.failures},
                   {"rules", opt.rules_file}};
  ChainNetwork chain = failover::build_chain(opt.length);
  RuleTable rules = load_rules(chain.graph, opt.rules_file);
  auto violations = failover::validate_rule_table(chain.graph, rules);
  if (!violations.empty())
    throw std::invalid_argument("rule table is malformed: " +
                                violations.front());

  auto strings = failover::extract_decision_strings(chain, rules);
  json string_list = json::array();
  for (const auto& s : strings)
    string_list.push_back(s ? json(*s) : json(nullptr));
  report.results["decision_strings"] = std::move(string_list);

  auto attack = failover::adversary_search(strings, opt.failures, opt.length);
  report.results["attack_found"] = attack.has_value();
  std::printf("attack found: %s\n", attack ? "true" : "false");
  if (attack) {
    FailureSet failed =
        failover::canonical_failure_set(chain, attack->columns, attack->intact);
    const bool valid =
        failover::is_valid_failure_set(chain.graph, failed, chain.s, chain.t);
    report.results["attack"] =
        failover::attack_to_json(chain.graph, *attack, failed);
    report.results["failure_set_valid"] = valid;

    bool all_defeated = true;
    json outcomes = json::array();
    std::unique_ptr<Outcome> confirming;
    for (std::uint32_t h = 0; h < rules.header_space(); ++h) {
      Outcome oc = failover::route_packet(chain.graph, rules, failed, chain.s,
                                          chain.t, Header{h, rules.width()});
      all_defeated = all_defeated && !oc.delivered();
      outcomes.push_back(json{{"header", h}, {"outcome", outcome_name(oc)}});
      if (!confirming && !oc.delivered())
        confirming = std::make_unique<Outcome>(std::move(oc));
    }
    report.results["outcomes"] = std::move(outcomes);
    report.results["defeats_all_headers"] = all_defeated;
    if (confirming)
      report.results["confirming_trace"] =
          failover::counterexample_to_json(chain.graph, failed, *confirming);

    std::printf("columns:");
    for (int c : attack->columns) std::printf(" %d", c);
    std::printf("\nintact: %s\nfailed_arcs:", attack->intact.c_str());
    for (failover::ArcId a : failed.arcs())
      std::printf(" %s", chain.graph.arc_label(a).c_str());
    std::printf("\nfailure_set_valid: %s\n", valid ? "true" : "false");
    for (const auto& entry : report.results["outcomes"])
      std::printf("header %u: %s\n", entry.at("header").get<unsigned>(),
                  entry.at("outcome").get<std::string>().c_str());
    std::printf("defeats_all_headers: %s\n", all_defeated ? "true" : "false");
  }
  report.finish(opt.json_path);
}

struct ChainVerifyOpts {
  int length = 0;
  int failures = 0;
  std::string rules_file;
  std::uint32_t h0 = 0;
  std::string json_path;
};

void run_chain_verify(const ChainVerifyOpts& opt) {
  Report report;
  report.command = "chain verify";
  report.inputs = {{"l", opt.length},
                   {"k", opt.failures},
                   {"rules", opt.rules_file},
                   {"h0", opt.h0}};
  ChainNetwork chain = failover::build_chain(opt.length);
  RuleTable rules = load_rules(chain.graph, opt.rules_file);
  auto violations = failover::validate_rule_table(chain.graph, rules);
  if (!violations.empty())
    throw std::invalid_argument("rule table is malformed: " +
                                violations.front());

  auto result =
      failover::verify_resilience(chain.graph, rules, chain.s, chain.t,
                                  opt.failures, Header{opt.h0, rules.width()});
  report.results = {{"resilient", result.resilient()},
                    {"budget", opt.failures},
                    {"candidate_subsets", result.candidates},
                    {"valid_subsets", result.valid}};
  if (result.counterexample)
    report.results["counterexample"] = failover::counterexample_to_json(
        chain.graph, *result.counterexample, *result.outcome);
  else
    report.results["counterexample"] = nullptr;

  std::printf("resilient: %s\n", result.resilient() ? "true" : "false");
  std::printf("candidate_subsets: %llu\nvalid_subsets: %llu\n",
              static_cast<unsigned long long>(result.candidates),
              static_cast<unsigned long long>(result.valid));
  if (result.counterexample) {
    std::printf("counterexample:");
    for (failover::ArcId a : result.counterexample->arcs())
      std::printf(" %s", chain.graph.arc_label(a).c_str());
    std::printf("\noutcome: %s\n", outcome_name(*result.outcome));
  }
  report.finish(opt.json_path);
}

struct ChainBoundsOpts {
  int failures = 0;
  long long nodes = -1;
  int length = -1;
  std::string json_path;
};

void run_chain_bounds(const ChainBoundsOpts& opt) {
  Report report;
  report.command = "chain bounds";
  report.inputs = {{"k", opt.failures}};
  if ((opt.nodes < 0) == (opt.length < 0))
    throw std::invalid_argument("give exactly one of --n and --l");
  const SearchGuard guard = SearchGuard::from_env();
  BoundReport row;
  if (opt.nodes >= 0) {
    report.inputs["n"] = opt.nodes;
    row = failover::bound_report_for_nodes(opt.failures, opt.nodes, guard);
  } else {
    report.inputs["l"] = opt.length;
    row = failover::bound_report_for_length(opt.failures, opt.length, guard);
  }
  const std::string csv = failover::bound_reports_csv({row});
  report.results = {{"csv", csv},
                    {"rows", json::array({failover::bound_report_to_json(row)})}};
  std::fputs(csv.c_str(), stdout);
  report.finish(opt.json_path);
}

struct ChainRandomOpts {
  int length = 0;
  int width = 0;
  int max_view = 2;
  std::uint64_t seed = 0;
  std::string out;
  std::string json_path;
};

void run_chain_random(const ChainRandomOpts& opt) {
  Report report;
  report.command = "chain random";
  report.inputs = {{"l", opt.length},
                   {"width", opt.width},
                   {"max_view", opt.max_view},
                   {"seed", opt.seed},
                   {"out", opt.out}};
  ChainNetwork chain = failover::build_chain(opt.length);
  RuleTable rules = failover::random_rule_table(chain.graph, chain.s, opt.width,
                                                opt.max_view, opt.seed);
  write_file(opt.out,
             failover::rule_table_to_json(chain.graph, rules).dump(2) + "\n");
  report.results = {{"width", rules.width()}, {"rules", rules.size()}};
  std::printf("width: %d\nrules: %zu\n", rules.width(), rules.size());
  report.finish(opt.json_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local fast-failover routing laboratory"};
  app.require_subcommand(1);

  auto* ca = app.add_subcommand("ca", "binary covering array operations");
  ca->require_subcommand(1);

  CaVerifyOpts ca_verify;
  auto* cmd = ca->add_subcommand("verify", "check strength-t coverage");
  cmd->add_option("--strength", ca_verify.strength, "strength t")->required();
  cmd->add_option("--file", ca_verify.file, "array file (text or json)")
      ->required();
  cmd->add_option("--json", ca_verify.json_path, "write report json here");
  cmd->callback([&] { run_ca_verify(ca_verify); });

  CaConstructOpts ca_construct;
  cmd = ca->add_subcommand("construct", "greedy construction");
  cmd->add_option("--strength", ca_construct.strength)->required();
  cmd->add_option("--cols", ca_construct.cols)->required();
  cmd->add_option("--out", ca_construct.out, "write the array here");
  cmd->add_option("--json", ca_construct.json_path);
  cmd->callback([&] { run_ca_construct(ca_construct); });

  CaCanOpts ca_can;
  cmd = ca->add_subcommand("can", "exact covering array number");
  cmd->add_option("--strength", ca_can.strength)->required();
  cmd->add_option("--cols", ca_can.cols)->required();
  cmd->add_option("--json", ca_can.json_path);
  cmd->callback([&] { run_ca_can(ca_can); });

  CaCanOpts ca_bound;
  cmd = ca->add_subcommand("bound", "asymptotic lower bound reference");
  cmd->add_option("--strength", ca_bound.strength)->required();
  cmd->add_option("--cols", ca_bound.cols)->required();
  cmd->add_option("--json", ca_bound.json_path);
  cmd->callback([&] { run_ca_bound(ca_bound); });

  auto* chain = app.add_subcommand("chain", "decision-chain experiments");
  chain->require_subcommand(1);

  ChainBuildOpts build;
  cmd = chain->add_subcommand("build", "emit the chain network");
  cmd->add_option("--l", build.length, "decision points")->required();
  cmd->add_option("--out-json", build.out_json);
  cmd->add_option("--out-dot", build.out_dot);
  cmd->add_option("--json", build.json_path);
  cmd->callback([&] { run_chain_build(build); });

  ChainSynthOpts synth;
  cmd = chain->add_subcommand("synth", "rule table from a covering array");
  cmd->add_option("--l", synth.length)->required();
  cmd->add_option("--ca", synth.ca_file, "array file (text or json)")
      ->required();
  cmd->add_option("--out", synth.out, "write the rule table here")->required();
  cmd->add_option("--json", synth.json_path);
  cmd->callback([&] { run_chain_synth(synth); });

  ChainAttackOpts attack;
  cmd = chain->add_subcommand("attack", "covering-array adversary");
  cmd->add_option("--l", attack.length)->required();
  cmd->add_option("--k", attack.failures, "failure budget")->required();
  cmd->add_option("--rules", attack.rules_file)->required();
  cmd->add_option("--json", attack.json_path);
  cmd->callback([&] { run_chain_attack(attack); });

  ChainVerifyOpts verify;
  cmd = chain->add_subcommand("verify", "exhaustive resilience check");
  cmd->add_option("--l", verify.length)->required();
  cmd->add_option("--k", verify.failures, "failure budget")->required();
  cmd->add_option("--rules", verify.rules_file)->required();
  cmd->add_option("--h0", verify.h0, "initial header value");
  cmd->add_option("--json", verify.json_path);
  cmd->callback([&] { run_chain_verify(verify); });

  ChainBoundsOpts bounds;
  cmd = chain->add_subcommand("bounds", "bit-bound table");
  cmd->add_option("--k", bounds.failures, "failure budget")->required();
  cmd->add_option("--n", bounds.nodes, "network size in nodes");
  cmd->add_option("--l", bounds.length, "chain length");
  cmd->add_option("--json", bounds.json_path);
  cmd->callback([&] { run_chain_bounds(bounds); });

  ChainRandomOpts random_opts;
  cmd = chain->add_subcommand("random", "random well-formed rule table");
  cmd->add_option("--l", random_opts.length)->required();
  cmd->add_option("--width", random_opts.width)->required();
  cmd->add_option("--max-view", random_opts.max_view);
  cmd->add_option("--seed", random_opts.seed)->required();
  cmd->add_option("--out", random_opts.out)->required();
  cmd->add_option("--json", random_opts.json_path);
  cmd->callback([&] { run_chain_random(random_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
