#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cvcluster/exact_graph.hpp"

namespace cvcluster {

using NodeId = std::int64_t;
using EdgeKey = std::pair<NodeId, NodeId>;

inline EdgeKey make_edge_key(NodeId a, NodeId b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

/** Signed, weighted link between two nodes: contributes sign * coeff to G. */
struct SimplifiedEdge {
  int sign = +1;     // +1 or -1
  double coeff = 1;  // C > 0

  bool operator==(const SimplifiedEdge&) const = default;
};

/**
 * Sign-and-coefficient graph over nodes with uniform self-loops: the compact
 * form of a squeezer-graph state in which every node carries the same
 * i cosh(2 alpha) self-loop and each link renders to -i sign C sinh(2 alpha).
 * Uniformity of the self-loops is what makes the local rewrite rules exact,
 * so the type enforces it by carrying a single alpha.
 *
 * Node ids are arbitrary int64 values supplied by the caller; ordered
 * containers keep every traversal deterministic.
 */
struct SimplifiedGraph {
  double alpha = 1.0;
  std::map<NodeId, NodeColor> nodes;
  std::map<EdgeKey, SimplifiedEdge> edges;

  int size() const { return static_cast<int>(nodes.size()); }

  void add_node(NodeId id, NodeColor color);
  bool has_node(NodeId id) const { return nodes.count(id) != 0; }
  bool has_edge(NodeId a, NodeId b) const { return edges.count(make_edge_key(a, b)) != 0; }

  /** Inserts a link; merging with an existing link is not allowed here. */
  void add_edge(NodeId a, NodeId b, int sign, double coeff);

  /** Signed weight sign * coeff, or 0 when absent. */
  double signed_weight(NodeId a, NodeId b) const;

  std::vector<NodeId> neighbors(NodeId id) const;
  int degree(NodeId id) const;
};

/** Direction tag of a balanced beamsplitter: tail -> head. */
struct BsArrow {
  NodeId tail;
  NodeId head;
};

/** Adds a fresh two-mode-squeezed pair: two nodes linked with sign +, C = 1. */
void add_tmss_pair(SimplifiedGraph& g, NodeId a, NodeColor color_a, NodeId b, NodeColor color_b);

/** q measurement: the node and all its links disappear; nothing else moves. */
SimplifiedGraph rule_measure_q(const SimplifiedGraph& g, NodeId node);

/** pi rotation of one mode: every incident link flips sign. */
SimplifiedGraph rule_invert(const SimplifiedGraph& g, NodeId node);

/**
 * Balanced beamsplitter between two already-entangled nodes. Every link
 * incident to one endpoint is duplicated onto the other with its coefficient
 * scaled by 1/sqrt2; the copy keeps its sign when it propagates along the
 * arrow (tail's links copied to head) and flips it against the arrow.
 * Coincident links combine by signed addition; exact cancellations delete the
 * link. Preconditions (PreconditionError): both nodes exist, are distinct,
 * and share no direct link.
 */
SimplifiedGraph rule_beamsplit(const SimplifiedGraph& g, const BsArrow& arrow);

/** Hits the graph with rule_invert for every id in the set. */
SimplifiedGraph apply_inversions(const SimplifiedGraph& g, const std::set<NodeId>& flips);

/** Node ids in iteration (ascending) order. */
std::vector<NodeId> node_order(const SimplifiedGraph& g);

/**
 * Renders the graph into its exact z matrix (rows ordered by `order`):
 * diagonal i cosh(2a), link entries -i sign C sinh(2a).
 */
ExactGraph to_exact(const SimplifiedGraph& g, const std::vector<NodeId>& order);
ExactGraph to_exact(const SimplifiedGraph& g);

/** Signed adjacency matrix G (entries sign * C) in the given node order. */
MatrixXd signed_adjacency(const SimplifiedGraph& g, const std::vector<NodeId>& order);

/** Cluster-domain link weights sign * C * tanh(2a), keyed by edge. */
std::map<EdgeKey, double> cluster_render(const SimplifiedGraph& g);

/** One violation of the balanced-coefficient law C = max(d_a, d_b)^{-1/2}. */
struct DegreeViolation {
  EdgeKey edge;
  int degree_a = 0;
  int degree_b = 0;
  double expected_coeff = 0;
  double actual_coeff = 0;
};

/**
 * Checks every link whose endpoints both lie in `interior` against the
 * balanced-coefficient law, using degrees measured on the full graph.
 */
std::vector<DegreeViolation> degree_rule_check(const SimplifiedGraph& g,
                                               const std::set<NodeId>& interior,
                                               double tol = 1e-12);

/**
 * Decides whether g2 = g1 up to pi rotations of some node subset: same nodes,
 * same link support and coefficients (within tol), signs differing by a
 * consistent boundary flip. Returns the flip set (canonical: component roots
 * unflipped) or nullopt. The complement of the set within any connected
 * component is an equally valid answer.
 */
std::optional<std::set<NodeId>> graphs_equivalent_mod_inversion(const SimplifiedGraph& g1,
                                                                const SimplifiedGraph& g2,
                                                                double tol = 1e-12);

}  // namespace cvcluster
