#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cvcluster/linalg.hpp"

namespace cvcluster {

enum class NodeColor { Black, White };

/**
 * Pure Gaussian state on n modes in graph form.
 *
 * z is complex symmetric with positive-definite imaginary part; the state is
 * psi(q) ~ exp(i/2 q^T z q) up to normalization, i.e. z = iU + V with U the
 * Gaussian width matrix and V the phase matrix.
 *
 * labels and colors are optional bookkeeping (empty or size n). Colors mark
 * the two-coloring used by cluster constructions; labels name the modes in
 * serialized documents.
 */
struct ExactGraph {
  MatrixXcd z;
  std::vector<std::string> labels;
  std::vector<NodeColor> colors;

  int size() const { return static_cast<int>(z.rows()); }

  MatrixXd u() const { return z.imag(); }
  MatrixXd v() const { return z.real(); }
};

/** n uncoupled vacuum modes: z = i I. Requires n >= 1. */
ExactGraph vacuum_graph(int n);

/**
 * Checks the graph invariants: z square and symmetric (1e-10), metadata sizes
 * consistent, Im(z) positive definite. Throws InvalidStateError otherwise.
 */
void validate_graph(const ExactGraph& g);

/**
 * Outcome-zero q measurement of one mode: the mode's row and column are
 * removed; the survivors keep their entries. Requires n >= 2 (measuring the
 * last mode would leave no state).
 */
ExactGraph measure_q(const ExactGraph& g, int node);

/**
 * Rotates one mode by pre_rotation (phase-space rotation, see
 * rotation_symplectic) and then measures q on it. pre_rotation = -pi/2
 * measures the mode in the basis a cluster-domain white node is read out in.
 */
ExactGraph measure_q_rotated(const ExactGraph& g, int node, double pre_rotation);

/**
 * Wavefunction amplitude at the real configuration q:
 *   psi(q) = (det U)^{1/4} pi^{-n/4} exp(i/2 q^T z q).
 */
std::complex<double> wavefunction_eval(const ExactGraph& g, const VectorXd& q);

}  // namespace cvcluster
