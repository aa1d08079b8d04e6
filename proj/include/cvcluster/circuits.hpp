#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cvcluster/covariance.hpp"
#include "cvcluster/simplified_graph.hpp"
#include "cvcluster/symplectic.hpp"

namespace cvcluster {

/**
 * Identity of a pulse: the macronode (detection column) it belongs to and the
 * rail it travels on. A source that feeds a delay line stamps its pulses with
 * the macronode they will be detected in, so threading between columns is
 * visible directly in the ids.
 */
struct ModeId {
  int tick = 0;
  int rail = 0;

  auto operator<=>(const ModeId&) const = default;

  NodeId encoded() const { return static_cast<NodeId>(tick) * 8 + rail; }
  static ModeId decode(NodeId id) { return {static_cast<int>(id / 8), static_cast<int>(id % 8)}; }
};

std::string mode_label(const ModeId& id);

enum class SqueezeAxis { Q, P };

/** Fires one squeezed pulse per tick onto `rail`. */
struct SourceStage {
  int rail = 0;
  SqueezeAxis axis = SqueezeAxis::Q;
  /** Total delay downstream on this rail = macronode offset of fresh pulses. */
  int macronode_offset = 0;
};

struct BeamsplitterStage {
  std::string name;
  int first_rail = 0;   // tail of the arrow
  int second_rail = 0;  // head
  /** True for the stage that interferes two fresh pulses into a squeezed pair. */
  bool creates_pair = false;
};

struct DelayStage {
  int rail = 0;
  int ticks = 1;
};

struct DetectorStage {
  std::string name;
  int rail = 0;
};

using Stage = std::variant<SourceStage, BeamsplitterStage, DelayStage, DetectorStage>;

/**
 * A pulsed optical circuit: per tick the stages execute once, in order.
 * Delay stages hold pulses across ticks; every other stage acts on the
 * current occupant of its rails and skips the tick when a rail is empty
 * (delay lines start empty, so early ticks are partial).
 */
struct Circuit {
  std::string construction;  // "wire" or "lattice"
  double alpha = 1.0;
  int rails = 0;
  int m = 1;         // cylinder circumference; 1 for the wire
  int max_delay = 1;
  std::vector<Stage> stages;
};

/**
 * Single quantum wire: two squeezers (p-squeezed on rail 0, q-squeezed on
 * rail 1), the pair-creating beamsplitter B1 (arrow rail 0 -> rail 1), a one
 * tick delay on rail 1, the chaining beamsplitter B2 (same arrow), and one
 * detector per rail.
 */
Circuit build_wire_circuit(double alpha);

/**
 * Square-lattice cylinder of circumference m (odd, >= 3): two wire front ends
 * (B1 upper, B2 lower) whose delays are 1 and m ticks, the wire-level
 * beamsplitters B3/B4 (direct rail -> delayed rail), and the coupling
 * beamsplitters B5 (rail 0 -> rail 2) and B6 (rail 1 -> rail 3). Throws
 * PreconditionError for even or < 3 m (the macronode two-coloring needs odd
 * circumference).
 */
Circuit build_lattice_circuit(double alpha, int m);

struct RunOptions {
  bool use_rules = true;
  bool use_exact = true;
  /** Retire pulses at their detector stage instead of keeping them live. */
  bool eager_detection = true;
  /** Snapshot cadence in ticks; 0 = every tick up to 50 modes, then every 10. */
  int snapshot_every = 0;
  /** Names of beamsplitter stages to skip entirely (diagnostics). */
  std::set<std::string> disabled;
};

struct TraceEvent {
  int tick = 0;
  std::string kind;  // "source" | "beamsplit" | "detect" | "clip"
  std::string name;
  std::vector<ModeId> modes;
};

struct Snapshot {
  int tick = 0;
  int node_count = 0;
  int live_count = 0;
  /** Max-abs z deviation between the two engines; 0 when only one ran. */
  double engine_defect = 0;
};

struct RunResult {
  Circuit circuit;
  int ticks = 0;
  /** Every pulse ever created, in creation order (= exact-engine row order). */
  std::vector<ModeId> order;
  std::map<ModeId, NodeColor> colors;
  std::optional<ExactGraph> exact;
  std::optional<SimplifiedGraph> rules;
  std::vector<TraceEvent> events;
  std::vector<Snapshot> snapshots;
  std::vector<ModeId> live_at_end;
  int max_live_modes = 0;
  double max_engine_defect = 0;
  /** Covariance-oracle audit for runs of <= 12 modes (-1 when skipped). */
  double oracle_nullifier = -1;
  double oracle_graph_defect = -1;
};

/**
 * Streams the circuit for `ticks` ticks. With both engines enabled every
 * snapshot asserts rule/exact agreement below 1e-9 (ConsistencyError
 * otherwise). Small exact runs are additionally audited against the
 * covariance oracle built from the full operator history.
 */
RunResult run(const Circuit& circuit, int ticks, const RunOptions& options = {});

/** Peak number of coexisting undetected pulses over the whole run. */
int live_mode_bound(const RunResult& result);

/**
 * Macronode window [lo, hi] whose nodes have every incident link bundle
 * complete: lo = 2 * max_delay, hi = ticks - 1 - max_delay.
 */
std::pair<int, int> interior_macronode_range(const Circuit& circuit, int ticks);

/**
 * Measures out the startup-transient macronodes (the first max(1, m) of
 * them) from both engines' graphs. The remaining state matches the periodic
 * reference pattern from the clip boundary onward.
 */
RunResult clip_startup(const RunResult& result);

struct ProjectedState {
  ExactGraph g;
  std::vector<ModeId> nodes;
  double alpha = 1.0;
  std::string construction;
  int m = 1;
};

/**
 * Reads the wire run out into a cluster chain: one -pi/2 rotation on every
 * white node, then q deletions of the whole measured rail (rail 0). Interior
 * links of the result carry +/- tanh(2a)/2; interior self-loops i sech(2a).
 */
ProjectedState project_wire(const RunResult& result);

/** Same readout for the lattice: rails 0..2 measured, rail 3 survives. */
ProjectedState project_lattice(const RunResult& result);

/**
 * Opens the cylinder into a planar strip: deletes every survivor whose
 * macronode index is divisible by m, leaving a grid of height m - 1.
 */
ProjectedState unfold_cylinder(const ProjectedState& state);

/**
 * Wire link pattern on a closed ring of `macronodes` columns (even, >= 6):
 * the same pair + beamsplitter schedule with indices wrapped mod the ring
 * size. The result is exactly periodic and self-inverse; it is the reference
 * the boundary module clips against.
 */
SimplifiedGraph reference_ring_wire(double alpha, int macronodes);

/** Periodic reference for the lattice (ring size even, > 2 m + 2; m odd). */
SimplifiedGraph reference_ring_lattice(double alpha, int macronodes, int m);

/** Removes the edges that wrap around the ring, leaving the open pattern. */
SimplifiedGraph remove_wrap_edges(const SimplifiedGraph& ring, int macronodes);

}  // namespace cvcluster
