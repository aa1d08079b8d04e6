#pragma once

#include <vector>

#include "cvcluster/exact_graph.hpp"
#include "cvcluster/symplectic.hpp"

namespace cvcluster {

/**
 * Gaussian covariance matrix in (q_1..q_n, p_1..p_n) ordering with hbar = 1,
 * so vacuum is I/2. Serves as the independent oracle for the graph engines:
 * it never touches z-matrix arithmetic.
 */
struct CovarianceState {
  MatrixXd sigma;

  int size() const { return static_cast<int>(sigma.rows()) / 2; }

  MatrixXd qq() const { return sigma.topLeftCorner(size(), size()); }
  MatrixXd qp() const { return sigma.topRightCorner(size(), size()); }
  MatrixXd pp() const { return sigma.bottomRightCorner(size(), size()); }
};

CovarianceState vacuum_covariance(int n);

/**
 * Covariance after applying ops to vacuum in list order:
 * sigma = S_k ... S_1 (I/2) S_1^T ... S_k^T. Each op is validated.
 */
CovarianceState covariance_from_history(int n, const std::vector<SymplecticOp>& ops);

/** sigma' = S sigma S^T. */
CovarianceState apply_to_covariance(const CovarianceState& state, const SymplecticOp& s);

/**
 * Checks symmetry, the uncertainty relation (sigma + i Omega / 2 >= 0), and
 * that sigma is even-dimensional. Throws InvalidStateError on failure.
 */
void validate_covariance(const CovarianceState& state);

/** |det(2 sigma) - 1|; 0 exactly for pure states. */
double purity_defect(const CovarianceState& state);

/**
 * Graph form of a pure covariance: U = (2 sigma_qq)^{-1}, V = sigma_qq^{-1}
 * sigma_qp. Throws InvalidStateError when purity_defect >= 1e-9.
 */
ExactGraph graph_from_covariance(const CovarianceState& state);

/** Covariance of a graph state (the inverse map; useful for cross-checks). */
CovarianceState covariance_from_graph(const ExactGraph& g);

/**
 * Conditions on an ideal q measurement of one mode (Schur complement on that
 * quadrature) and discards the measured mode. Throws IllConditionedError when
 * the measured variance is below 1e-12 (degenerate measurement).
 */
CovarianceState condition_on_q(const CovarianceState& state, int node);

/**
 * Total residual excitation of the graph's nullifiers (p - z q) evaluated on
 * the covariance: sum_j <n_j^dagger n_j>. Zero exactly when the covariance is
 * the graph state's; strictly positive for any other state.
 */
double nullifier_residual(const ExactGraph& g, const CovarianceState& state);

}  // namespace cvcluster
