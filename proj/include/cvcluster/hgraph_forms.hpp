#pragma once

#include "cvcluster/exact_graph.hpp"

namespace cvcluster {

/**
 * Real symmetric coupling graph of a multimode squeezing Hamiltonian,
 * H ~ sum_jk G_jk (a_j a_k + h.c.). first_partition > 0 marks a bipartite
 * layout: modes [0, first_partition) are one class, the rest the other, and
 * couplings only cross classes (G = [[0, G0^T], [G0, 0]]).
 */
struct HGraph {
  MatrixXd g;
  int first_partition = 0;

  int size() const { return static_cast<int>(g.rows()); }

  /** The cross block G0 (second-class rows, first-class columns). */
  MatrixXd g0() const;
};

/** Assembles the bipartite graph from its cross block. */
HGraph bipartite_hgraph(const MatrixXd& g0);

/** Max-abs entry of G G - I: 0 exactly when the graph is self-inverse. */
double selfinverse_defect(const HGraph& h);

/**
 * State produced by pumping the coupling graph for interaction strength
 * alpha >= 0:  z = i exp(-2 alpha G), evaluated by symmetric
 * eigendecomposition. alpha = 0 gives vacuum.
 */
ExactGraph hgraph_state(const HGraph& h, double alpha);

/**
 * Same state for self-inverse G via the closed form
 *   z = i cosh(2a) I - i sinh(2a) G.
 * Throws PreconditionError when selfinverse_defect(h) >= 1e-12.
 */
ExactGraph self_inverse_hgraph_state(const HGraph& h, double alpha);

/**
 * The uniform-self-loop rendering i cosh(2a) I - i sinh(2a) G for an
 * arbitrary symmetric G (no self-inverse check). For non-self-inverse G this
 * is not exp(-2aG); it is the form finite constructions actually produce,
 * and it must still be physical (InvalidStateError otherwise).
 */
ExactGraph rendered_hgraph_form(const MatrixXd& g, double alpha);

/**
 * Rotates every mode of the first partition by -pi/2 (see
 * rotation_symplectic), moving a bipartite squeezer state into its cluster
 * form. Throws PreconditionError unless 0 < first_partition < n.
 */
ExactGraph fourier_first_partition(const ExactGraph& g, int first_partition);

/**
 * Closed cluster form of the rotated self-inverse bipartite state:
 *   z' = [[i sech(2a) I, tanh(2a) G0^T], [tanh(2a) G0, i sech(2a) I]].
 */
ExactGraph cluster_form_self_inverse(const MatrixXd& g0, double alpha);

/**
 * Cluster form without assuming G0 G0^T = I; the second-class block picks up
 * the correction  i sech(2a) (cosh(2a)^2 I - sinh(2a)^2 G0 G0^T).
 */
ExactGraph cluster_form_general(const MatrixXd& g0, double alpha);

}  // namespace cvcluster
