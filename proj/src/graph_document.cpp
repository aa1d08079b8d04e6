#include "cvcluster/graph_document.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cvcluster/errors.hpp"

namespace cvcluster {

namespace {

std::string fmt_double(double v) {
  if (v == 0) v = 0;  // canonical zero: "-0" would not survive a reparse
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(const std::complex<double>& v) {
  return "[" + fmt_double(v.real()) + "," + fmt_double(v.imag()) + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string color_name(NodeColor c) { return c == NodeColor::Black ? "black" : "white"; }

/** "tick.rail" -> encoded ModeId, plain integers pass through. */
std::optional<NodeId> parse_node_id(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t dot = s.find('.');
  try {
    if (dot == std::string::npos) return std::stoll(s);
    const int tick = std::stoi(s.substr(0, dot));
    const int rail = std::stoi(s.substr(dot + 1));
    if (rail < 0 || rail >= 8) return std::nullopt;
    return ModeId{tick, rail}.encoded();
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

GraphDocument make_document(const ExactGraph& g) {
  validate_graph(g);
  GraphDocument doc;
  doc.engine = "exact";
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    DocumentNode node;
    node.id = g.labels.empty() ? std::to_string(i) : g.labels[i];
    node.color = color_name(g.colors.empty() ? NodeColor::Black : g.colors[i]);
    node.self_loop = g.z(i, i);
    doc.nodes.push_back(node);
  }
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      if (std::abs(g.z(r, c)) <= 1e-13) continue;
      DocumentEdge edge;
      edge.a = doc.nodes[r].id;
      edge.b = doc.nodes[c].id;
      edge.weight = g.z(r, c);
      doc.edges.push_back(edge);
    }
  return doc;
}

GraphDocument make_document(const SimplifiedGraph& g) {
  GraphDocument doc;
  doc.engine = "rules";
  doc.alpha = g.alpha;
  const std::complex<double> i(0, 1);
  for (const auto& [id, color] : g.nodes) {
    DocumentNode node;
    node.id = std::to_string(id);
    node.color = color_name(color);
    node.self_loop = i * std::cosh(2 * g.alpha);
    doc.nodes.push_back(node);
  }
  for (const auto& [key, edge] : g.edges) {
    DocumentEdge de;
    de.a = std::to_string(key.first);
    de.b = std::to_string(key.second);
    de.weight = -i * double(edge.sign) * edge.coeff * std::sinh(2 * g.alpha);
    de.sign = edge.sign;
    de.coeff = edge.coeff;
    doc.edges.push_back(de);
  }
  return doc;
}

void apply_mode_labels(GraphDocument& doc) {
  auto relabel = [](std::string& s) {
    auto id = parse_node_id(s);
    if (id && s.find('.') == std::string::npos) s = mode_label(ModeId::decode(*id));
  };
  for (auto& node : doc.nodes) relabel(node.id);
  for (auto& edge : doc.edges) {
    relabel(edge.a);
    relabel(edge.b);
  }
}

std::string serialize_document(const GraphDocument& doc) {
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(doc.schema_version) + ",\n";
  out += "  \"engine\": " + quote(doc.engine) + ",\n";
  if (doc.alpha) out += "  \"alpha\": " + fmt_double(*doc.alpha) + ",\n";
  out += "  \"construction\": " + quote(doc.construction) + ",\n";
  out += "  \"ticks\": " + std::to_string(doc.ticks) + ",\n";
  out += "  \"m\": " + std::to_string(doc.m) + ",\n";
  out += "  \"nodes\": [\n";
  for (size_t i = 0; i < doc.nodes.size(); ++i) {
    const DocumentNode& node = doc.nodes[i];
    out += "    {\"id\": " + quote(node.id) + ", \"color\": " + quote(node.color) +
           ", \"self_loop\": " + fmt_complex(node.self_loop) + "}";
    out += i + 1 < doc.nodes.size() ? ",\n" : "\n";
  }
  out += "  ],\n  \"edges\": [\n";
  for (size_t i = 0; i < doc.edges.size(); ++i) {
    const DocumentEdge& edge = doc.edges[i];
    out += "    {\"a\": " + quote(edge.a) + ", \"b\": " + quote(edge.b) +
           ", \"weight\": " + fmt_complex(edge.weight);
    if (edge.sign) out += ", \"sign\": " + std::to_string(*edge.sign);
    if (edge.coeff) out += ", \"coeff\": " + fmt_double(*edge.coeff);
    out += "}";
    out += i + 1 < doc.edges.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(std::string("document missing field '") + key + "' in " + where);
  return *it;
}

std::complex<double> read_complex(const json& value, const char* where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
    throw ParseError(std::string("expected [re, im] pair in ") + where);
  return {value[0].get<double>(), value[1].get<double>()};
}

std::string read_string(const json& value, const char* key, const char* where) {
  if (!value.is_string())
    throw ParseError(std::string("field '") + key + "' in " + where + " must be a string");
  return value.get<std::string>();
}

}  // namespace

GraphDocument parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("document root must be an object");

  GraphDocument doc;
  const json& version = field(root, "schema_version", "root");
  if (!version.is_number_integer() || version.get<int>() != 1)
    throw ParseError("unsupported schema_version " + version.dump() + " (expected 1)");
  doc.schema_version = 1;
  doc.engine = read_string(field(root, "engine", "root"), "engine", "root");
  if (doc.engine != "exact" && doc.engine != "rules")
    throw ParseError("field 'engine' must be 'exact' or 'rules', got '" + doc.engine + "'");
  if (root.contains("alpha")) {
    if (!root["alpha"].is_number()) throw ParseError("field 'alpha' must be a number");
    doc.alpha = root["alpha"].get<double>();
  }
  doc.construction = read_string(field(root, "construction", "root"), "construction", "root");
  doc.ticks = field(root, "ticks", "root").get<int>();
  doc.m = field(root, "m", "root").get<int>();

  const json& nodes = field(root, "nodes", "root");
  if (!nodes.is_array()) throw ParseError("field 'nodes' must be an array");
  std::set<std::string> seen;
  for (const json& item : nodes) {
    DocumentNode node;
    node.id = read_string(field(item, "id", "node"), "id", "node");
    node.color = read_string(field(item, "color", "node"), "color", "node");
    if (node.color != "black" && node.color != "white")
      throw ParseError("node '" + node.id + "' has invalid color '" + node.color + "'");
    node.self_loop = read_complex(field(item, "self_loop", "node"), "node self_loop");
    if (!seen.insert(node.id).second) throw ParseError("duplicate node id '" + node.id + "'");
    doc.nodes.push_back(node);
  }

  const json& edges = field(root, "edges", "root");
  if (!edges.is_array()) throw ParseError("field 'edges' must be an array");
  for (const json& item : edges) {
    DocumentEdge edge;
    edge.a = read_string(field(item, "a", "edge"), "a", "edge");
    edge.b = read_string(field(item, "b", "edge"), "b", "edge");
    if (!seen.count(edge.a) || !seen.count(edge.b))
      throw ParseError("edge references unknown node '" + edge.a + "'/'" + edge.b + "'");
    if (edge.a == edge.b) throw ParseError("edge endpoints must differ, got '" + edge.a + "'");
    edge.weight = read_complex(field(item, "weight", "edge"), "edge weight");
    if (item.contains("sign")) {
      const int sign = item["sign"].get<int>();
      if (sign != 1 && sign != -1) throw ParseError("edge sign must be +1 or -1");
      edge.sign = sign;
    }
    if (item.contains("coeff")) {
      const double coeff = item["coeff"].get<double>();
      if (!(coeff > 0)) throw ParseError("edge coeff must be positive");
      edge.coeff = coeff;
    }
    doc.edges.push_back(edge);
  }

  if (doc.engine == "rules") {
    if (!doc.alpha) throw ParseError("rule-engine document requires 'alpha'");
    const double sh = std::sinh(2 * *doc.alpha);
    const double ch = std::cosh(2 * *doc.alpha);
    for (const DocumentNode& node : doc.nodes)
      if (std::abs(node.self_loop - std::complex<double>(0, ch)) > 1e-12)
        throw ParseError("node '" + node.id + "' self_loop is inconsistent with alpha");
    for (const DocumentEdge& edge : doc.edges) {
      if (!edge.sign || !edge.coeff)
        throw ParseError("rule-engine document edge '" + edge.a + "'-'" + edge.b +
                         "' is missing sign/coeff");
      const std::complex<double> expect(0, -double(*edge.sign) * *edge.coeff * sh);
      if (std::abs(edge.weight - expect) > 1e-12)
        throw ParseError("edge '" + edge.a + "'-'" + edge.b +
                         "' weight is inconsistent with its sign/coeff/alpha");
    }
  }
  return doc;
}

void save_graph(const GraphDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << serialize_document(doc);
  if (!out) throw Error("failed writing '" + path + "'");
}

GraphDocument load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

ExactGraph document_to_exact(const GraphDocument& doc) {
  const int n = static_cast<int>(doc.nodes.size());
  if (n == 0) throw ParseError("document has no nodes");
  std::map<std::string, int> index;
  ExactGraph g;
  g.z = MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    index[doc.nodes[i].id] = i;
    g.z(i, i) = doc.nodes[i].self_loop;
    g.labels.push_back(doc.nodes[i].id);
    g.colors.push_back(doc.nodes[i].color == "white" ? NodeColor::White : NodeColor::Black);
  }
  for (const DocumentEdge& edge : doc.edges) {
    const int a = index.at(edge.a);
    const int b = index.at(edge.b);
    g.z(a, b) = edge.weight;
    g.z(b, a) = edge.weight;
  }
  validate_graph(g);
  return g;
}

SimplifiedGraph document_to_simplified(const GraphDocument& doc) {
  if (doc.engine != "rules")
    throw ParseError("document engine is '" + doc.engine + "', not 'rules'");
  SimplifiedGraph g;
  g.alpha = doc.alpha.value();
  std::map<std::string, NodeId> ids;
  for (const DocumentNode& node : doc.nodes) {
    auto id = parse_node_id(node.id);
    if (!id) throw ParseError("node id '" + node.id + "' is not a mode label or integer");
    ids[node.id] = *id;
    g.add_node(*id, node.color == "white" ? NodeColor::White : NodeColor::Black);
  }
  for (const DocumentEdge& edge : doc.edges)
    g.add_edge(ids.at(edge.a), ids.at(edge.b), *edge.sign, *edge.coeff);
  return g;
}

std::string export_dot(const GraphDocument& doc) {
  std::string out = "graph state {\n";
  out += "  layout=neato;\n  node [shape=circle, style=filled, fontsize=10];\n";
  const bool grid = doc.construction == "wire" || doc.construction == "lattice";
  for (const DocumentNode& node : doc.nodes) {
    out += "  " + quote(node.id) + " [fillcolor=" + node.color;
    if (node.color == "black") out += ", fontcolor=white";
    if (grid) {
      auto id = parse_node_id(node.id);
      if (id) {
        const ModeId mode = ModeId::decode(*id);
        out += ", pos=\"" + std::to_string(mode.tick) + "," + std::to_string(-mode.rail) + "!\"";
      }
    }
    out += "];\n";
  }
  for (const DocumentEdge& edge : doc.edges) {
    // Positive links render blue, negative red; the label is the magnitude.
    const double re = edge.weight.real();
    const double im = edge.weight.imag();
    double signed_value;
    if (edge.sign) signed_value = *edge.sign;
    else signed_value = std::abs(re) >= std::abs(im) ? re : -im;
    char label[40];
    std::snprintf(label, sizeof label, "%.4g", std::abs(edge.weight));
    out += "  " + quote(edge.a) + " -- " + quote(edge.b) + " [color=" +
           (signed_value >= 0 ? "blue" : "red") + ", label=\"" + label + "\"];\n";
  }
  out += "}\n";
  return out;
}

void save_dot(const GraphDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << export_dot(doc);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace cvcluster
