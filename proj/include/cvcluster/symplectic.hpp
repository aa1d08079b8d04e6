#pragma once

#include <vector>

#include "cvcluster/exact_graph.hpp"

namespace cvcluster {

/**
 * Real linear symplectic operator on n modes, stored as the four n x n blocks
 * of its action on x = (q_1..q_n, p_1..p_n):
 *
 *   q' = A q + B p
 *   p' = C q + D p
 *
 * Valid operators satisfy S^T Omega S = Omega with Omega = [[0, I], [-I, 0]].
 */
struct SymplecticOp {
  MatrixXd a, b, c, d;

  int size() const { return static_cast<int>(a.rows()); }

  /** Assembles the full 2n x 2n matrix [[A, B], [C, D]]. */
  MatrixXd full() const;

  /** The inverse operator; for these ops S^{-1} = Omega^{-1} S^T Omega. */
  SymplecticOp inverse() const;
};

SymplecticOp identity_symplectic(int n);

/** Max-abs entry of S^T Omega S - Omega. */
double symplectic_defect(const SymplecticOp& s);

/** Throws InvalidOperatorError unless symplectic_defect(s) < 1e-12. */
void symplectic_check(const SymplecticOp& s);

/** op2 after op1 (matrix product full(op2) * full(op1)). */
SymplecticOp compose(const SymplecticOp& op2, const SymplecticOp& op1);

/**
 * Balanced beamsplitter between modes `first` and `second`: both the q and p
 * blocks mix the pair by [[1/sqrt2, -1/sqrt2], [1/sqrt2, 1/sqrt2]] (rows and
 * columns in the order first, second), identity elsewhere. The operator is
 * orthogonal, so its transpose is its inverse; swapping the two modes gives a
 * different operator (the composition of the two is a rotation, not the
 * identity).
 */
SymplecticOp beamsplitter_symplectic(int n, int first, int second);

/**
 * Phase-space rotation of one mode: q' = q cos(theta) + p sin(theta),
 * p' = -q sin(theta) + p cos(theta). theta = -pi/2 sends (q, p) to (-p, q),
 * the transform that turns a two-partition squeezer graph into its cluster
 * form. theta = pi negates both quadratures (inversion).
 */
SymplecticOp rotation_symplectic(int n, int mode, double theta);

/** Same rotation angle applied to several modes at once. */
SymplecticOp rotation_symplectic(int n, const std::vector<int>& modes, double theta);

/**
 * Single-mode squeezer diag(e^{-r}, e^{r}) on (q, p): r > 0 shrinks q
 * (q-squeezed), r < 0 shrinks p. On vacuum it produces z = i e^{2r}.
 */
SymplecticOp squeezer_symplectic(int n, int mode, double r);

/**
 * Action on graph states:  z' = (C + D z)(A + B z)^{-1}.
 *
 * The operator is validated, the solve is guarded (reciprocal condition below
 * 1e-12 throws IllConditionedError instead of returning garbage), the result
 * is re-symmetrized after asserting its asymmetry is below 1e-10, and the
 * output physicality (Im z' positive definite) is re-checked.
 */
ExactGraph apply_symplectic(const ExactGraph& g, const SymplecticOp& s);

}  // namespace cvcluster
