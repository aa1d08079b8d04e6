#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <string>

#include "cvcluster/circuits.hpp"
#include "cvcluster/errors.hpp"
#include "cvcluster/graph_document.hpp"
#include "cvcluster/linalg.hpp"
#include "doctest.h"

using namespace cvcluster;

namespace {

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

RunResult wire_run(int ticks, bool exact) {
  RunOptions options;
  options.use_exact = exact;
  return run(build_wire_circuit(0.8), ticks, options);
}

GraphDocument rules_doc(int ticks = 5) {
  GraphDocument doc = make_document(*wire_run(ticks, false).rules);
  doc.construction = "wire";
  doc.ticks = ticks;
  doc.m = 1;
  return doc;
}

}  // namespace

TEST_CASE("rule-engine documents survive a serialize/parse round trip unchanged") {
  const SimplifiedGraph original = *wire_run(6, false).rules;
  GraphDocument doc = make_document(original);
  apply_mode_labels(doc);
  const GraphDocument parsed = parse_document(serialize_document(doc));
  const SimplifiedGraph back = document_to_simplified(parsed);
  CHECK(back.alpha == original.alpha);
  CHECK(back.nodes == original.nodes);
  CHECK(back.edges == original.edges);  // signs and coefficients bit-exact
}

TEST_CASE("serialization is deterministic and stable under reparsing") {
  const GraphDocument doc = rules_doc();
  const std::string once = serialize_document(doc);
  CHECK(once == serialize_document(doc));
  CHECK(once == serialize_document(parse_document(once)));
}

TEST_CASE("documents round trip through the filesystem byte-identically") {
  const GraphDocument doc = rules_doc();
  const std::string path = "io_roundtrip_test.json";
  save_graph(doc, path);
  const GraphDocument loaded = load_graph(path);
  CHECK(serialize_document(loaded) == serialize_document(doc));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_graph(path), ParseError);
}

TEST_CASE("exact documents reconstruct the z matrix to writer precision") {
  const ExactGraph g = *wire_run(4, true).exact;
  const GraphDocument parsed = parse_document(serialize_document(make_document(g)));
  CHECK(parsed.engine == "exact");
  CHECK(!parsed.alpha.has_value());
  const ExactGraph back = document_to_exact(parsed);
  REQUIRE(back.size() == g.size());
  // Self-loops and stored links are %.17g exact; only sub-1e-13 residue from
  // the streaming arithmetic is dropped by the writer.
  CHECK(linf_norm(back.z - g.z) < 1e-13);
  CHECK(back.colors == g.colors);
  CHECK_THROWS_AS(document_to_simplified(parsed), ParseError);
}

TEST_CASE("mode labels rewrite encoded ids as macronode.rail") {
  GraphDocument doc = make_document(*wire_run(2, false).rules);
  CHECK(doc.nodes[0].id == "0");   // encoded ModeId{0, 0}
  CHECK(doc.nodes[1].id == "8");   // encoded ModeId{1, 0}
  apply_mode_labels(doc);
  CHECK(doc.nodes[0].id == "0.0");
  CHECK(doc.nodes[1].id == "1.0");
  for (const DocumentEdge& edge : doc.edges) {
    CHECK(contains(edge.a, "."));
    CHECK(contains(edge.b, "."));
  }
  // Idempotent: labels that already carry a dot stay put.
  GraphDocument again = doc;
  apply_mode_labels(again);
  CHECK(again.nodes[0].id == doc.nodes[0].id);
}

TEST_CASE("malformed text is rejected with a parse diagnostic") {
  const std::string good = serialize_document(rules_doc());
  try {
    parse_document(good.substr(0, good.size() / 2));
    FAIL("truncated document accepted");
  } catch (const ParseError& e) {
    CHECK(contains(e.what(), "malformed document"));
  }
  CHECK_THROWS_AS(parse_document("[1, 2]"), ParseError);
  CHECK_THROWS_AS(parse_document("{\"engine\": \"rules\"}"), ParseError);
}

TEST_CASE("schema violations name the offending field") {
  GraphDocument doc = rules_doc();

  SUBCASE("unsupported version") {
    doc.schema_version = 2;
    try {
      parse_document(serialize_document(doc));
      FAIL("schema_version 2 accepted");
    } catch (const ParseError& e) {
      CHECK(contains(e.what(), "schema_version"));
    }
  }
  SUBCASE("unknown engine") {
    doc.engine = "approximate";
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
  SUBCASE("duplicate node ids") {
    doc.nodes[1].id = doc.nodes[0].id;
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
  SUBCASE("edge endpoint that names no node") {
    doc.edges[0].a = "99.7";
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
  SUBCASE("self-edge") {
    doc.edges[0].a = doc.edges[0].b;
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
  SUBCASE("invalid color") {
    doc.nodes[0].color = "green";
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
}

TEST_CASE("rule-engine documents are cross-checked against their own redundancy") {
  SUBCASE("weight inconsistent with sign and coefficient") {
    GraphDocument doc = rules_doc();
    doc.edges[0].weight += std::complex<double>(0, 1e-6);
    try {
      parse_document(serialize_document(doc));
      FAIL("corrupted weight accepted");
    } catch (const ParseError& e) {
      CHECK(contains(e.what(), "inconsistent"));
    }
  }
  SUBCASE("self-loop inconsistent with alpha") {
    GraphDocument doc = rules_doc();
    doc.nodes[0].self_loop += 1e-6;
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
  SUBCASE("missing alpha") {
    GraphDocument doc = rules_doc();
    doc.alpha.reset();
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
  SUBCASE("missing sign/coeff redundancy") {
    GraphDocument doc = rules_doc();
    doc.edges[0].sign.reset();
    doc.edges[0].coeff.reset();
    CHECK_THROWS_AS(parse_document(serialize_document(doc)), ParseError);
  }
}

TEST_CASE("dot export draws colored nodes, signed edges and grid positions") {
  GraphDocument doc = rules_doc(4);
  apply_mode_labels(doc);
  const std::string dot = export_dot(doc);
  CHECK(contains(dot, "graph state {"));
  CHECK(contains(dot, "layout=neato"));
  CHECK(contains(dot, "fillcolor=black, fontcolor=white"));
  CHECK(contains(dot, "fillcolor=white"));
  CHECK(contains(dot, "color=blue"));   // + links
  CHECK(contains(dot, "color=red"));    // - links
  CHECK(contains(dot, "pos=\"0,0!\"")); // mode 0.0 pinned at the grid origin
  CHECK(contains(dot, "pos=\"2,-1!\""));
  char label[48];  // steady links: coefficient 1/2 times sinh(2 alpha)
  std::snprintf(label, sizeof label, "label=\"%.4g\"", 0.5 * std::sinh(1.6));
  CHECK(contains(dot, label));

  const std::string path = "io_dot_test.dot";
  save_dot(doc, path);
  std::remove(path.c_str());
}
