#include "cvcluster/simplified_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "cvcluster/errors.hpp"

namespace cvcluster {

namespace {

constexpr double kCancelTol = 1e-15;

std::string id_str(NodeId id) { return std::to_string(id); }

void require_node(const SimplifiedGraph& g, NodeId id, const char* who) {
  if (!g.has_node(id))
    throw PreconditionError(std::string(who) + ": node " + id_str(id) + " not in graph");
}

}  // namespace

void SimplifiedGraph::add_node(NodeId id, NodeColor color) {
  if (has_node(id)) throw PreconditionError("add_node: node " + id_str(id) + " already present");
  nodes.emplace(id, color);
}

void SimplifiedGraph::add_edge(NodeId a, NodeId b, int sign, double coeff) {
  require_node(*this, a, "add_edge");
  require_node(*this, b, "add_edge");
  if (a == b) throw PreconditionError("add_edge: self links are implicit");
  if (sign != 1 && sign != -1) throw PreconditionError("add_edge: sign must be +1 or -1");
  if (!(coeff > 0)) throw PreconditionError("add_edge: coefficient must be positive");
  if (has_edge(a, b)) throw PreconditionError("add_edge: link already present");
  edges.emplace(make_edge_key(a, b), SimplifiedEdge{sign, coeff});
}

double SimplifiedGraph::signed_weight(NodeId a, NodeId b) const {
  auto it = edges.find(make_edge_key(a, b));
  if (it == edges.end()) return 0;
  return it->second.sign * it->second.coeff;
}

std::vector<NodeId> SimplifiedGraph::neighbors(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& [key, edge] : edges) {
    if (key.first == id) out.push_back(key.second);
    else if (key.second == id) out.push_back(key.first);
  }
  return out;
}

int SimplifiedGraph::degree(NodeId id) const { return static_cast<int>(neighbors(id).size()); }

void add_tmss_pair(SimplifiedGraph& g, NodeId a, NodeColor color_a, NodeId b, NodeColor color_b) {
  g.add_node(a, color_a);
  g.add_node(b, color_b);
  g.add_edge(a, b, +1, 1.0);
}

SimplifiedGraph rule_measure_q(const SimplifiedGraph& g, NodeId node) {
  require_node(g, node, "rule_measure_q");
  SimplifiedGraph out;
  out.alpha = g.alpha;
  out.nodes = g.nodes;
  out.nodes.erase(node);
  for (const auto& [key, edge] : g.edges)
    if (key.first != node && key.second != node) out.edges.emplace(key, edge);
  return out;
}

SimplifiedGraph rule_invert(const SimplifiedGraph& g, NodeId node) {
  require_node(g, node, "rule_invert");
  SimplifiedGraph out = g;
  for (auto& [key, edge] : out.edges)
    if (key.first == node || key.second == node) edge.sign = -edge.sign;
  return out;
}

SimplifiedGraph rule_beamsplit(const SimplifiedGraph& g, const BsArrow& arrow) {
  require_node(g, arrow.tail, "rule_beamsplit");
  require_node(g, arrow.head, "rule_beamsplit");
  if (arrow.tail == arrow.head) throw PreconditionError("rule_beamsplit: arrow endpoints must differ");
  if (g.has_edge(arrow.tail, arrow.head))
    throw PreconditionError("rule_beamsplit: nodes " + id_str(arrow.tail) + " and " +
                            id_str(arrow.head) +
                            " share a link; the local rule does not apply");

  const double s = 1.0 / std::sqrt(2.0);
  std::map<EdgeKey, double> weights;
  for (const auto& [key, edge] : g.edges) {
    const double w = edge.sign * edge.coeff;
    const bool at_tail = key.first == arrow.tail || key.second == arrow.tail;
    const bool at_head = key.first == arrow.head || key.second == arrow.head;
    if (!at_tail && !at_head) {
      weights[key] += w;
      continue;
    }
    const NodeId other = key.first == arrow.tail || key.first == arrow.head ? key.second : key.first;
    if (at_tail) {
      // Copy along the arrow keeps the sign.
      weights[make_edge_key(other, arrow.tail)] += w * s;
      weights[make_edge_key(other, arrow.head)] += w * s;
    } else {
      // Copy against the arrow flips it.
      weights[make_edge_key(other, arrow.head)] += w * s;
      weights[make_edge_key(other, arrow.tail)] -= w * s;
    }
  }

  SimplifiedGraph out;
  out.alpha = g.alpha;
  out.nodes = g.nodes;
  for (const auto& [key, w] : weights) {
    if (std::abs(w) < kCancelTol) continue;
    out.edges.emplace(key, SimplifiedEdge{w > 0 ? +1 : -1, std::abs(w)});
  }
  return out;
}

SimplifiedGraph apply_inversions(const SimplifiedGraph& g, const std::set<NodeId>& flips) {
  SimplifiedGraph out = g;
  for (NodeId id : flips) out = rule_invert(out, id);
  return out;
}

std::vector<NodeId> node_order(const SimplifiedGraph& g) {
  std::vector<NodeId> order;
  order.reserve(g.nodes.size());
  for (const auto& [id, color] : g.nodes) order.push_back(id);
  return order;
}

ExactGraph to_exact(const SimplifiedGraph& g, const std::vector<NodeId>& order) {
  const int n = static_cast<int>(order.size());
  if (n != g.size()) throw PreconditionError("to_exact: order does not cover the node set");
  std::map<NodeId, int> index;
  for (int i = 0; i < n; ++i) {
    if (!g.has_node(order[i])) throw PreconditionError("to_exact: unknown node in order");
    index[order[i]] = i;
  }
  const std::complex<double> i(0, 1);
  ExactGraph out;
  out.z = i * std::cosh(2 * g.alpha) * MatrixXcd::Identity(n, n);
  for (const auto& [key, edge] : g.edges) {
    const std::complex<double> w = -i * double(edge.sign) * edge.coeff * std::sinh(2 * g.alpha);
    out.z(index[key.first], index[key.second]) = w;
    out.z(index[key.second], index[key.first]) = w;
  }
  out.labels.reserve(n);
  out.colors.reserve(n);
  for (NodeId id : order) {
    out.labels.push_back(id_str(id));
    out.colors.push_back(g.nodes.at(id));
  }
  return out;
}

ExactGraph to_exact(const SimplifiedGraph& g) { return to_exact(g, node_order(g)); }

MatrixXd signed_adjacency(const SimplifiedGraph& g, const std::vector<NodeId>& order) {
  const int n = static_cast<int>(order.size());
  std::map<NodeId, int> index;
  for (int i = 0; i < n; ++i) index[order[i]] = i;
  MatrixXd adj = MatrixXd::Zero(n, n);
  for (const auto& [key, edge] : g.edges) {
    auto a = index.find(key.first);
    auto b = index.find(key.second);
    if (a == index.end() || b == index.end()) continue;
    adj(a->second, b->second) = edge.sign * edge.coeff;
    adj(b->second, a->second) = edge.sign * edge.coeff;
  }
  return adj;
}

std::map<EdgeKey, double> cluster_render(const SimplifiedGraph& g) {
  std::map<EdgeKey, double> out;
  const double t = std::tanh(2 * g.alpha);
  for (const auto& [key, edge] : g.edges) out[key] = edge.sign * edge.coeff * t;
  return out;
}

std::vector<DegreeViolation> degree_rule_check(const SimplifiedGraph& g,
                                               const std::set<NodeId>& interior, double tol) {
  std::map<NodeId, int> degree;
  for (const auto& [key, edge] : g.edges) {
    ++degree[key.first];
    ++degree[key.second];
  }
  std::vector<DegreeViolation> violations;
  for (const auto& [key, edge] : g.edges) {
    if (!interior.count(key.first) || !interior.count(key.second)) continue;
    const int da = degree[key.first];
    const int db = degree[key.second];
    const double expected = 1.0 / std::sqrt(double(std::max(da, db)));
    if (std::abs(edge.coeff - expected) > tol)
      violations.push_back({key, da, db, expected, edge.coeff});
  }
  return violations;
}

std::optional<std::set<NodeId>> graphs_equivalent_mod_inversion(const SimplifiedGraph& g1,
                                                                const SimplifiedGraph& g2,
                                                                double tol) {
  if (g1.nodes.size() != g2.nodes.size()) return std::nullopt;
  for (const auto& [id, color] : g1.nodes)
    if (!g2.has_node(id)) return std::nullopt;
  if (g1.edges.size() != g2.edges.size()) return std::nullopt;
  for (const auto& [key, edge] : g1.edges) {
    auto it = g2.edges.find(key);
    if (it == g2.edges.end()) return std::nullopt;
    if (std::abs(edge.coeff - it->second.coeff) > tol) return std::nullopt;
  }

  // x_a xor x_b = (signs differ) over every link; solve by BFS per component.
  std::map<NodeId, int> assign;
  for (const auto& [root, color] : g1.nodes) {
    if (assign.count(root)) continue;
    assign[root] = 0;
    std::deque<NodeId> frontier{root};
    while (!frontier.empty()) {
      const NodeId at = frontier.front();
      frontier.pop_front();
      for (NodeId next : g1.neighbors(at)) {
        const int need =
            assign[at] ^ (g1.edges.at(make_edge_key(at, next)).sign !=
                                  g2.edges.at(make_edge_key(at, next)).sign
                              ? 1
                              : 0);
        auto it = assign.find(next);
        if (it == assign.end()) {
          assign[next] = need;
          frontier.push_back(next);
        } else if (it->second != need) {
          return std::nullopt;
        }
      }
    }
  }
  std::set<NodeId> flips;
  for (const auto& [id, bit] : assign)
    if (bit) flips.insert(id);
  return flips;
}

}  // namespace cvcluster
