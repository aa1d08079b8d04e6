#pragma once

#include <vector>

#include "cvcluster/exact_graph.hpp"
#include "cvcluster/hgraph_forms.hpp"

namespace cvcluster {

/**
 * Everything needed to clip a finite construction back to its ideal interior:
 * the periodic reference cross block, the boundary error E0 = G0 - G0bar, and
 * the list of second-class rows untouched by the error (the rows the
 * projector P0 keeps).
 */
struct ClipPlan {
  MatrixXd g0_bar;
  MatrixXd e0;
  std::vector<int> kept_rows;
  bool dense_error_warning = false;

  int first_partition() const { return static_cast<int>(g0_bar.cols()); }
  int second_partition() const { return static_cast<int>(g0_bar.rows()); }

  /** Reconstructs the finite construction's cross block G0bar + E0. */
  MatrixXd g0() const { return g0_bar + e0; }
};

/**
 * E0 = g0 - g0_bar. Preconditions (PreconditionError): equal shapes, and the
 * reference assembles to a self-inverse graph (both Gram matrices of g0_bar
 * within 1e-12 of I).
 */
MatrixXd split_error(const MatrixXd& g0, const MatrixXd& g0_bar);

/**
 * Indices of the all-zero rows of e0 (|entry| <= zero_tol), i.e. the
 * second-class modes whose couplings are exactly ideal. The selector built
 * from these rows annihilates e0 by construction.
 */
std::vector<int> build_p0(const MatrixXd& e0, double zero_tol = 0.0);

/** Row-selector matrix with one identity row per kept index. */
MatrixXd selector_matrix(const std::vector<int>& kept, int cols);

/**
 * Bundles split_error + build_p0 and flags a dense error (more than half the
 * rows contaminated, so clipping would delete most of the state).
 */
ClipPlan make_clip_plan(const MatrixXd& g0, const MatrixXd& g0_bar, double zero_tol = 0.0);

struct ClipResult {
  ExactGraph g;
  /** Max-abs deviation from i sech(2a) I + tanh(2a) P G P^T. */
  double closed_form_defect = 0;
  /** Max-abs deviation from deleting the dropped modes one by one. */
  double measurement_path_defect = 0;
};

/**
 * Restricts the cluster-form state zprime (first partition first, built from
 * plan.g0() at the given alpha) to the first partition plus the kept
 * second-class rows. The result is checked two independent ways -- against
 * the closed form above and against explicit q deletions of the dropped
 * modes -- and a ConsistencyError is thrown if either deviates by 1e-10.
 */
ClipResult clip(const ExactGraph& zprime, const ClipPlan& plan, double alpha);

}  // namespace cvcluster
