#include "cvcluster/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "cvcluster/errors.hpp"

namespace cvcluster {

std::string mode_label(const ModeId& id) {
  return std::to_string(id.tick) + "." + std::to_string(id.rail);
}

Circuit build_wire_circuit(double alpha) {
  if (!(alpha > 0)) throw PreconditionError("build_wire_circuit: alpha must be positive");
  Circuit c;
  c.construction = "wire";
  c.alpha = alpha;
  c.rails = 2;
  c.m = 1;
  c.max_delay = 1;
  c.stages = {
      SourceStage{0, SqueezeAxis::P, 0},
      SourceStage{1, SqueezeAxis::Q, 1},
      BeamsplitterStage{"B1", 0, 1, true},
      DelayStage{1, 1},
      BeamsplitterStage{"B2", 0, 1, false},
      DetectorStage{"D1", 0},
      DetectorStage{"D2", 1},
  };
  return c;
}

Circuit build_lattice_circuit(double alpha, int m) {
  if (!(alpha > 0)) throw PreconditionError("build_lattice_circuit: alpha must be positive");
  if (m < 3 || m % 2 == 0)
    throw PreconditionError("build_lattice_circuit: circumference must be odd and >= 3, got " +
                            std::to_string(m) +
                            " (the macronode two-coloring breaks on even rings)");
  Circuit c;
  c.construction = "lattice";
  c.alpha = alpha;
  c.rails = 4;
  c.m = m;
  c.max_delay = m;
  c.stages = {
      SourceStage{0, SqueezeAxis::P, 0},
      SourceStage{1, SqueezeAxis::Q, 1},
      SourceStage{2, SqueezeAxis::P, 0},
      SourceStage{3, SqueezeAxis::Q, m},
      BeamsplitterStage{"B1", 0, 1, true},
      BeamsplitterStage{"B2", 2, 3, true},
      DelayStage{1, 1},
      DelayStage{3, m},
      BeamsplitterStage{"B3", 0, 1, false},
      BeamsplitterStage{"B4", 2, 3, false},
      BeamsplitterStage{"B5", 0, 2, false},
      BeamsplitterStage{"B6", 1, 3, false},
      DetectorStage{"D1", 0},
      DetectorStage{"D2", 1},
      DetectorStage{"D3", 2},
      DetectorStage{"D4", 3},
  };
  return c;
}

namespace {

NodeColor macronode_color(int tick) { return tick % 2 == 0 ? NodeColor::Black : NodeColor::White; }

struct OpRecord {
  enum Kind { Squeeze, Beamsplit } kind = Squeeze;
  int i = 0;
  int j = 0;
  double r = 0;
};

struct Simulation {
  const Circuit& circuit;
  const RunOptions& options;
  RunResult result;

  std::vector<std::optional<ModeId>> rail;
  std::map<int, std::deque<std::pair<int, ModeId>>> fifo;  // keyed by stage index
  std::map<ModeId, int> index_of;
  std::set<ModeId> live;
  std::vector<OpRecord> op_history;

  Simulation(const Circuit& c, const RunOptions& o) : circuit(c), options(o) {
    result.circuit = c;
    rail.resize(c.rails);
    if (o.use_exact) result.exact = ExactGraph{};
    if (o.use_rules) {
      result.rules = SimplifiedGraph{};
      result.rules->alpha = c.alpha;
    }
  }

  void note_live() {
    result.max_live_modes = std::max(result.max_live_modes, static_cast<int>(live.size()));
  }

  void create_mode(int tick, const SourceStage& src) {
    const ModeId id{tick + src.macronode_offset, src.rail};
    if (rail[src.rail].has_value())
      throw ConsistencyError("source fired onto an occupied rail " + std::to_string(src.rail));
    rail[src.rail] = id;
    index_of[id] = static_cast<int>(result.order.size());
    result.order.push_back(id);
    result.colors[id] = macronode_color(id.tick);
    live.insert(id);
    const double r = src.axis == SqueezeAxis::Q ? circuit.alpha : -circuit.alpha;
    if (result.exact) {
      ExactGraph& g = *result.exact;
      const int n = g.size();
      MatrixXcd z = MatrixXcd::Zero(n + 1, n + 1);
      z.topLeftCorner(n, n) = g.z;
      z(n, n) = std::complex<double>(0, 1);
      g.z = z;
      g.labels.push_back(mode_label(id));
      g.colors.push_back(result.colors[id]);
      g = apply_symplectic(g, squeezer_symplectic(n + 1, n, r));
    }
    if (result.rules) result.rules->add_node(id.encoded(), result.colors[id]);
    op_history.push_back({OpRecord::Squeeze, index_of[id], 0, r});
    result.events.push_back({tick, "source", mode_label(id), {id}});
  }

  void beamsplit(int tick, const BeamsplitterStage& bs) {
    if (options.disabled.count(bs.name)) return;
    if (!rail[bs.first_rail].has_value() || !rail[bs.second_rail].has_value()) return;
    const ModeId a = *rail[bs.first_rail];
    const ModeId b = *rail[bs.second_rail];
    if (result.exact) {
      const int n = result.exact->size();
      *result.exact = apply_symplectic(
          *result.exact, beamsplitter_symplectic(n, index_of.at(a), index_of.at(b)));
    }
    if (result.rules) {
      if (bs.creates_pair)
        result.rules->add_edge(a.encoded(), b.encoded(), +1, 1.0);
      else
        *result.rules = rule_beamsplit(*result.rules, {a.encoded(), b.encoded()});
    }
    op_history.push_back({OpRecord::Beamsplit, index_of.at(a), index_of.at(b), 0});
    result.events.push_back({tick, "beamsplit", bs.name, {a, b}});
  }

  void delay(int tick, int stage_index, const DelayStage& d) {
    auto& queue = fifo[stage_index];
    if (rail[d.rail].has_value()) {
      queue.emplace_back(tick + d.ticks, *rail[d.rail]);
      rail[d.rail].reset();
    }
    if (!queue.empty() && queue.front().first == tick) {
      rail[d.rail] = queue.front().second;
      queue.pop_front();
    }
  }

  void detect(int tick, const DetectorStage& det) {
    if (!rail[det.rail].has_value()) return;
    const ModeId id = *rail[det.rail];
    rail[det.rail].reset();
    if (options.eager_detection) live.erase(id);
    result.events.push_back({tick, "detect", det.name, {id}});
  }

  bool snapshot_due(int tick, int ticks) const {
    if (tick == ticks - 1) return true;
    if (options.snapshot_every > 0) return (tick + 1) % options.snapshot_every == 0;
    if (static_cast<int>(result.order.size()) <= 50) return true;
    return (tick + 1) % 10 == 0;
  }

  void take_snapshot(int tick) {
    Snapshot snap;
    snap.tick = tick;
    snap.node_count = static_cast<int>(result.order.size());
    snap.live_count = static_cast<int>(live.size());
    if (result.exact && result.rules && snap.node_count > 0) {
      std::vector<NodeId> order;
      order.reserve(result.order.size());
      for (const ModeId& id : result.order) order.push_back(id.encoded());
      const ExactGraph rendered = to_exact(*result.rules, order);
      snap.engine_defect = linf_norm(rendered.z - result.exact->z);
      result.max_engine_defect = std::max(result.max_engine_defect, snap.engine_defect);
      if (!(snap.engine_defect < 1e-9))
        throw ConsistencyError("engine disagreement " + std::to_string(snap.engine_defect) +
                               " at tick " + std::to_string(tick));
    }
    result.snapshots.push_back(snap);
  }

  void audit_with_oracle() {
    if (!result.exact || result.order.empty() || result.order.size() > 12) return;
    const int n = static_cast<int>(result.order.size());
    std::vector<SymplecticOp> ops;
    ops.reserve(op_history.size());
    for (const OpRecord& record : op_history) {
      if (record.kind == OpRecord::Squeeze)
        ops.push_back(squeezer_symplectic(n, record.i, record.r));
      else
        ops.push_back(beamsplitter_symplectic(n, record.i, record.j));
    }
    const CovarianceState sigma = covariance_from_history(n, ops);
    result.oracle_nullifier = nullifier_residual(*result.exact, sigma);
    result.oracle_graph_defect = linf_norm(graph_from_covariance(sigma).z - result.exact->z);
    if (!(std::abs(result.oracle_nullifier) < 1e-9 && result.oracle_graph_defect < 1e-9))
      throw ConsistencyError("covariance oracle disagrees with the exact engine (nullifier " +
                             std::to_string(result.oracle_nullifier) + ", graph defect " +
                             std::to_string(result.oracle_graph_defect) + ")");
  }
};

}  // namespace

RunResult run(const Circuit& circuit, int ticks, const RunOptions& options) {
  if (ticks < 1) throw PreconditionError("run: need at least one tick");
  if (circuit.rails <= 0 || circuit.stages.empty())
    throw PreconditionError("run: circuit has no stages");
  Simulation sim(circuit, options);
  sim.result.ticks = ticks;
  for (int tick = 0; tick < ticks; ++tick) {
    for (size_t s = 0; s < circuit.stages.size(); ++s) {
      std::visit(
          [&](const auto& stage) {
            using T = std::decay_t<decltype(stage)>;
            if constexpr (std::is_same_v<T, SourceStage>) sim.create_mode(tick, stage);
            else if constexpr (std::is_same_v<T, BeamsplitterStage>) sim.beamsplit(tick, stage);
            else if constexpr (std::is_same_v<T, DelayStage>) sim.delay(tick, static_cast<int>(s), stage);
            else sim.detect(tick, stage);
          },
          circuit.stages[s]);
      sim.note_live();
    }
    if (sim.snapshot_due(tick, ticks)) sim.take_snapshot(tick);
  }
  sim.audit_with_oracle();
  sim.result.live_at_end.assign(sim.live.begin(), sim.live.end());
  return sim.result;
}

int live_mode_bound(const RunResult& result) { return result.max_live_modes; }

std::pair<int, int> interior_macronode_range(const Circuit& circuit, int ticks) {
  return {2 * circuit.max_delay, ticks - 1 - circuit.max_delay};
}

RunResult clip_startup(const RunResult& result) {
  const int transient = std::max(1, result.circuit.m);
  RunResult out = result;
  std::vector<ModeId> removed;
  for (const ModeId& id : result.order)
    if (id.tick < transient) removed.push_back(id);
  if (removed.empty()) return out;

  if (out.exact) {
    for (int i = static_cast<int>(result.order.size()) - 1; i >= 0; --i)
      if (result.order[i].tick < transient) *out.exact = measure_q(*out.exact, i);
  }
  if (out.rules)
    for (const ModeId& id : removed) *out.rules = rule_measure_q(*out.rules, id.encoded());

  std::vector<ModeId> order;
  for (const ModeId& id : result.order)
    if (id.tick >= transient) order.push_back(id);
  out.order = order;
  for (const ModeId& id : removed) out.colors.erase(id);
  out.events.push_back({result.ticks, "clip", "startup", removed});
  return out;
}

namespace {

ProjectedState project(const RunResult& result, const std::set<int>& measured_rails) {
  if (!result.exact)
    throw PreconditionError("projection requires the exact engine output");
  ExactGraph g = *result.exact;
  const int n = g.size();

  std::vector<int> whites;
  for (int i = 0; i < n; ++i)
    if (result.colors.at(result.order[i]) == NodeColor::White) whites.push_back(i);
  if (!whites.empty()) g = apply_symplectic(g, rotation_symplectic(n, whites, -M_PI / 2));

  std::vector<ModeId> survivors;
  for (const ModeId& id : result.order)
    if (!measured_rails.count(id.rail)) survivors.push_back(id);
  for (int i = n - 1; i >= 0; --i)
    if (measured_rails.count(result.order[i].rail)) g = measure_q(g, i);

  ProjectedState state;
  state.g = g;
  state.nodes = survivors;
  state.alpha = result.circuit.alpha;
  state.construction = result.circuit.construction;
  state.m = result.circuit.m;
  return state;
}

}  // namespace

ProjectedState project_wire(const RunResult& result) {
  if (result.circuit.construction != "wire")
    throw PreconditionError("project_wire: run is not a wire construction");
  return project(result, {0});
}

ProjectedState project_lattice(const RunResult& result) {
  if (result.circuit.construction != "lattice")
    throw PreconditionError("project_lattice: run is not a lattice construction");
  return project(result, {0, 1, 2});
}

ProjectedState unfold_cylinder(const ProjectedState& state) {
  if (state.construction != "lattice")
    throw PreconditionError("unfold_cylinder: state is not a lattice projection");
  ProjectedState out = state;
  for (int i = static_cast<int>(state.nodes.size()) - 1; i >= 0; --i) {
    if (state.nodes[i].tick % state.m != 0) continue;
    out.g = measure_q(out.g, i);
    out.nodes.erase(out.nodes.begin() + i);
  }
  return out;
}

namespace {

int wrap(int t, int period) { return ((t % period) + period) % period; }

}  // namespace

SimplifiedGraph reference_ring_wire(double alpha, int macronodes) {
  if (macronodes < 6 || macronodes % 2 != 0)
    throw PreconditionError("reference_ring_wire: ring size must be even and >= 6");
  SimplifiedGraph g;
  g.alpha = alpha;
  for (int t = 0; t < macronodes; ++t) {
    g.add_node(ModeId{t, 0}.encoded(), macronode_color(t));
    g.add_node(ModeId{t, 1}.encoded(), macronode_color(t));
  }
  for (int t = 0; t < macronodes; ++t)
    g.add_edge(ModeId{t, 0}.encoded(), ModeId{wrap(t + 1, macronodes), 1}.encoded(), +1, 1.0);
  for (int t = 0; t < macronodes; ++t)
    g = rule_beamsplit(g, {ModeId{t, 0}.encoded(), ModeId{t, 1}.encoded()});
  return g;
}

SimplifiedGraph reference_ring_lattice(double alpha, int macronodes, int m) {
  if (m < 3 || m % 2 == 0)
    throw PreconditionError("reference_ring_lattice: circumference must be odd and >= 3");
  if (macronodes % 2 != 0 || macronodes <= 2 * m + 2)
    throw PreconditionError("reference_ring_lattice: ring size must be even and > 2m + 2");
  SimplifiedGraph g;
  g.alpha = alpha;
  for (int t = 0; t < macronodes; ++t)
    for (int r = 0; r < 4; ++r) g.add_node(ModeId{t, r}.encoded(), macronode_color(t));
  for (int t = 0; t < macronodes; ++t) {
    g.add_edge(ModeId{t, 0}.encoded(), ModeId{wrap(t + 1, macronodes), 1}.encoded(), +1, 1.0);
    g.add_edge(ModeId{t, 2}.encoded(), ModeId{wrap(t + m, macronodes), 3}.encoded(), +1, 1.0);
  }
  for (int t = 0; t < macronodes; ++t) {
    g = rule_beamsplit(g, {ModeId{t, 0}.encoded(), ModeId{t, 1}.encoded()});
    g = rule_beamsplit(g, {ModeId{t, 2}.encoded(), ModeId{t, 3}.encoded()});
    g = rule_beamsplit(g, {ModeId{t, 0}.encoded(), ModeId{t, 2}.encoded()});
    g = rule_beamsplit(g, {ModeId{t, 1}.encoded(), ModeId{t, 3}.encoded()});
  }
  return g;
}

SimplifiedGraph remove_wrap_edges(const SimplifiedGraph& ring, int macronodes) {
  SimplifiedGraph out;
  out.alpha = ring.alpha;
  out.nodes = ring.nodes;
  for (const auto& [key, edge] : ring.edges) {
    const int span = std::abs(ModeId::decode(key.first).tick - ModeId::decode(key.second).tick);
    if (span > macronodes / 2) continue;
    out.edges.emplace(key, edge);
  }
  return out;
}

}  // namespace cvcluster
