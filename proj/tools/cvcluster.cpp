#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "cvcluster/circuits.hpp"
#include "cvcluster/errors.hpp"
#include "cvcluster/graph_document.hpp"
#include "cvcluster/verify.hpp"

namespace {

using namespace cvcluster;

std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("CVCLUSTER_OUT_DIR");
  if (!dir || !*dir) return path;
  std::string prefixed = dir;
  if (prefixed.back() != '/') prefixed.push_back('/');
  return prefixed + path;
}

struct CircuitArgs {
  int ticks = 20;
  double alpha = 1.0;
  int width = 3;  // lattice only
  std::string engine = "both";
  bool project = false;
  bool unfold = false;
  bool clip = false;
  std::string out;
  std::string dot;
};

void add_circuit_flags(CLI::App* cmd, CircuitArgs& args, bool lattice) {
  cmd->add_option("--ticks", args.ticks, "number of source ticks to stream")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  cmd->add_option("--alpha", args.alpha, "squeezing parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  if (lattice)
    cmd->add_option("--width", args.width, "cylinder circumference (odd, >= 3)")
        ->capture_default_str();
  cmd->add_option("--engine", args.engine, "rules | exact | both")
      ->check(CLI::IsMember({"rules", "exact", "both"}))
      ->capture_default_str();
  cmd->add_flag("--clip", args.clip, "measure out the startup transient");
  cmd->add_flag("--project", args.project,
                "measure the ancillary rails, leaving the cluster-domain graph");
  if (lattice)
    cmd->add_flag("--unfold", args.unfold, "open the projected cylinder into a planar grid");
  cmd->add_option("--out", args.out, "write the resulting graph as JSON");
  cmd->add_option("--dot", args.dot, "write the resulting graph as Graphviz dot");
}

int run_circuit(const CircuitArgs& args, bool lattice) {
  RunOptions options;
  options.use_rules = args.engine != "exact";
  options.use_exact = args.engine != "rules";
  if (args.project && !options.use_exact)
    throw PreconditionError("--project needs the exact engine (--engine exact or both)");
  if (args.unfold && !args.project) throw PreconditionError("--unfold requires --project");

  const Circuit circuit =
      lattice ? build_lattice_circuit(args.alpha, args.width) : build_wire_circuit(args.alpha);
  RunResult result = run(circuit, args.ticks, options);
  if (args.clip) result = clip_startup(result);

  std::printf("%s: %d ticks, %zu modes, peak live %d\n", circuit.construction.c_str(),
              result.ticks, result.order.size(), live_mode_bound(result));
  if (options.use_rules && result.rules)
    std::printf("rule graph: %zu links\n", result.rules->edges.size());
  if (options.use_rules && options.use_exact)
    std::printf("engine agreement: max deviation %.3g over %zu snapshots\n",
                result.max_engine_defect, result.snapshots.size());
  if (result.oracle_nullifier >= 0)
    std::printf("covariance audit: nullifier %.3g, graph deviation %.3g\n",
                result.oracle_nullifier, result.oracle_graph_defect);

  GraphDocument doc;
  if (args.project) {
    ProjectedState projected = lattice ? project_lattice(result) : project_wire(result);
    if (args.unfold) projected = unfold_cylinder(projected);
    std::printf("projected: %zu cluster nodes\n", projected.nodes.size());
    doc = make_document(projected.g);
    doc.alpha = projected.alpha;
    doc.construction = projected.construction;
    doc.m = projected.m;
  } else if (options.use_rules) {
    doc = make_document(*result.rules);
    doc.construction = result.circuit.construction;
    doc.m = result.circuit.m;
  } else {
    doc = make_document(*result.exact);
    doc.alpha = result.circuit.alpha;
    doc.construction = result.circuit.construction;
    doc.m = result.circuit.m;
  }
  doc.ticks = result.ticks;
  apply_mode_labels(doc);

  if (!args.out.empty()) {
    save_graph(doc, resolve_out(args.out));
    std::printf("wrote %s\n", resolve_out(args.out).c_str());
  }
  if (!args.dot.empty()) {
    save_dot(doc, resolve_out(args.dot));
    std::printf("wrote %s\n", resolve_out(args.dot).c_str());
  }
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, int trials, const std::string& out) {
  const VerificationReport report = run_suite(suite, seed, trials);
  for (const CheckResult& check : report.checks)
    std::printf("[%s] %-28s defect %.3g (tolerance %.3g)%s%s\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.defect, check.tolerance,
                check.detail.empty() ? "" : " -- ", check.detail.c_str());
  std::printf("%d/%zu checks passed\n", int(report.checks.size()) - report.failures(),
              report.checks.size());
  if (!out.empty()) {
    const std::string path = resolve_out(out);
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open " + path);
    const std::string text = serialize_report(report);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    std::printf("wrote %s\n", path.c_str());
  }
  return report.failures() == 0 ? 0 : 1;
}

int run_inspect(const std::string& file, bool weights, bool degree_check) {
  const GraphDocument doc = load_graph(file);
  std::printf("engine %s, %zu nodes, %zu links", doc.engine.c_str(), doc.nodes.size(),
              doc.edges.size());
  if (doc.alpha) std::printf(", alpha %g", *doc.alpha);
  if (!doc.construction.empty()) std::printf(", %s", doc.construction.c_str());
  if (doc.m > 1) std::printf(" (m=%d)", doc.m);
  std::printf("\n");

  if (weights)
    for (const DocumentEdge& edge : doc.edges) {
      if (edge.sign)
        std::printf("%s -- %s  %c%.17g\n", edge.a.c_str(), edge.b.c_str(),
                    *edge.sign > 0 ? '+' : '-', *edge.coeff);
      else
        std::printf("%s -- %s  %.17g%+.17gi\n", edge.a.c_str(), edge.b.c_str(),
                    edge.weight.real(), edge.weight.imag());
    }

  if (degree_check) {
    if (doc.engine != "rules")
      throw PreconditionError("--degree-check needs a rule-engine document");
    const SimplifiedGraph g = document_to_simplified(doc);
    // The law holds on the interior window; boundary nodes are exempt when
    // the document declares a streamed construction.
    std::set<NodeId> interior;
    const bool windowed =
        (doc.construction == "wire" || doc.construction == "lattice") && doc.ticks > 0;
    const int max_delay = doc.construction == "lattice" ? doc.m : 1;
    for (const auto& [id, color] : g.nodes) {
      const int tick = ModeId::decode(id).tick;
      if (!windowed || (tick >= 2 * max_delay && tick <= doc.ticks - 1 - max_delay))
        interior.insert(id);
    }
    const auto violations = degree_rule_check(g, interior);
    for (const DegreeViolation& v : violations)
      std::printf("degree law violated at %lld -- %lld: C %.17g, expected %.17g (degrees %d, %d)\n",
                  static_cast<long long>(v.edge.first), static_cast<long long>(v.edge.second),
                  v.actual_coeff, v.expected_coeff, v.degree_a, v.degree_b);
    std::printf("degree law: %zu violation(s)\n", violations.size());
    return violations.empty() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian graph-state streaming simulator and verifier"};
  app.require_subcommand(1);

  CircuitArgs wire_args;
  CLI::App* wire = app.add_subcommand("wire", "stream the single quantum wire");
  add_circuit_flags(wire, wire_args, false);

  CircuitArgs lattice_args;
  CLI::App* lattice = app.add_subcommand("lattice", "stream the square-lattice cylinder");
  add_circuit_flags(lattice, lattice_args, true);

  std::string suite = "all";
  std::uint64_t seed = 42;
  int trials = 0;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify", "run a correctness suite");
  verify->add_option("--suite", suite, "core | rules | boundary | pipelines | all")
      ->check(CLI::IsMember(cvcluster::suite_names()))
      ->capture_default_str();
  verify->add_option("--seed", seed, "base seed for all randomized checks")->capture_default_str();
  verify->add_option("--trials", trials, "override per-check trial counts (0 = defaults)")
      ->check(CLI::Range(0, 100000))
      ->capture_default_str();
  verify->add_option("--out", verify_out, "write the report as JSON");

  std::string inspect_file;
  bool weights = false, degree_check = false;
  CLI::App* inspect = app.add_subcommand("inspect", "summarize a saved graph");
  inspect->add_option("file", inspect_file, "graph JSON file")->required();
  inspect->add_flag("--weights", weights, "list every link weight");
  inspect->add_flag("--degree-check", degree_check, "check the balanced-coefficient law");

  CLI11_PARSE(app, argc, argv);

  try {
    if (wire->parsed()) return run_circuit(wire_args, false);
    if (lattice->parsed()) return run_circuit(lattice_args, true);
    if (verify->parsed()) return run_verify(suite, seed, trials, verify_out);
    return run_inspect(inspect_file, weights, degree_check);
  } catch (const cvcluster::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
