#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cvcluster/circuits.hpp"
#include "cvcluster/exact_graph.hpp"
#include "cvcluster/simplified_graph.hpp"

namespace cvcluster {

struct DocumentNode {
  std::string id;
  std::string color;  // "black" | "white"
  std::complex<double> self_loop;
};

struct DocumentEdge {
  std::string a, b;
  std::complex<double> weight;
  /** Present only for rule-engine documents (redundant with weight). */
  std::optional<int> sign;
  std::optional<double> coeff;
};

/**
 * Serializable snapshot of a graph state. Writing is fully deterministic
 * (fixed key order, 17 significant digits), so identical states produce
 * byte-identical files.
 */
struct GraphDocument {
  int schema_version = 1;
  std::string engine;  // "exact" | "rules"
  std::optional<double> alpha;
  std::string construction;  // "", "wire", "lattice"
  int ticks = 0;
  int m = 0;
  std::vector<DocumentNode> nodes;
  std::vector<DocumentEdge> edges;
};

/** Exact graphs serialize every off-diagonal above 1e-13 plus all self-loops. */
GraphDocument make_document(const ExactGraph& g);
GraphDocument make_document(const SimplifiedGraph& g);

/** Rewrites integer node ids that encode modes into "tick.rail" labels. */
void apply_mode_labels(GraphDocument& doc);

std::string serialize_document(const GraphDocument& doc);

/**
 * Parses a document, reporting malformed input as ParseError with the byte
 * offset (syntax) or field name (schema). A schema_version other than 1 is
 * rejected. Rule-engine documents are cross-checked: each stored weight must
 * equal -i sign C sinh(2 alpha) within 1e-12.
 */
GraphDocument parse_document(const std::string& text);

void save_graph(const GraphDocument& doc, const std::string& path);
GraphDocument load_graph(const std::string& path);

ExactGraph document_to_exact(const GraphDocument& doc);
/** Requires engine == "rules". */
SimplifiedGraph document_to_simplified(const GraphDocument& doc);

/**
 * Graphviz rendering: filled circles (white/black by node color), edges
 * colored blue (+) / red (-) with their weight magnitudes as labels. Wire and
 * lattice documents get grid position hints from their mode labels.
 */
std::string export_dot(const GraphDocument& doc);
void save_dot(const GraphDocument& doc, const std::string& path);

}  // namespace cvcluster
