#include "cvcluster/boundary.hpp"

#include <cmath>
#include <string>

#include "cvcluster/errors.hpp"

namespace cvcluster {

MatrixXd split_error(const MatrixXd& g0, const MatrixXd& g0_bar) {
  if (g0.rows() != g0_bar.rows() || g0.cols() != g0_bar.cols())
    throw PreconditionError("split_error: cross blocks have different shapes");
  const int n2 = static_cast<int>(g0_bar.rows());
  const int n1 = static_cast<int>(g0_bar.cols());
  const double gram1 = linf_norm(g0_bar.transpose() * g0_bar - MatrixXd::Identity(n1, n1));
  const double gram2 = linf_norm(g0_bar * g0_bar.transpose() - MatrixXd::Identity(n2, n2));
  const double defect = std::max(gram1, gram2);
  if (!(defect < 1e-12))
    throw PreconditionError("split_error: reference is not self-inverse (defect " +
                            std::to_string(defect) + ")");
  return g0 - g0_bar;
}

std::vector<int> build_p0(const MatrixXd& e0, double zero_tol) {
  std::vector<int> kept;
  for (int r = 0; r < e0.rows(); ++r) {
    bool clean = true;
    for (int c = 0; c < e0.cols() && clean; ++c)
      if (std::abs(e0(r, c)) > zero_tol) clean = false;
    if (clean) kept.push_back(r);
  }
  return kept;
}

MatrixXd selector_matrix(const std::vector<int>& kept, int cols) {
  MatrixXd p = MatrixXd::Zero(static_cast<int>(kept.size()), cols);
  for (size_t r = 0; r < kept.size(); ++r) {
    if (kept[r] < 0 || kept[r] >= cols) throw PreconditionError("selector_matrix: index out of range");
    p(static_cast<int>(r), kept[r]) = 1.0;
  }
  return p;
}

ClipPlan make_clip_plan(const MatrixXd& g0, const MatrixXd& g0_bar, double zero_tol) {
  ClipPlan plan;
  plan.g0_bar = g0_bar;
  plan.e0 = split_error(g0, g0_bar);
  plan.kept_rows = build_p0(plan.e0, zero_tol);
  const int n2 = static_cast<int>(g0_bar.rows());
  plan.dense_error_warning = static_cast<int>(plan.kept_rows.size()) < (n2 + 1) / 2;
  return plan;
}

ClipResult clip(const ExactGraph& zprime, const ClipPlan& plan, double alpha) {
  const int n1 = plan.first_partition();
  const int n2 = plan.second_partition();
  if (zprime.size() != n1 + n2)
    throw PreconditionError("clip: state size does not match the plan");
  if (plan.kept_rows.empty())
    throw PreconditionError("clip: the error pattern contaminates every row");

  // Row selection for the survivors: the whole first class + the kept rows.
  std::vector<int> survivors;
  survivors.reserve(n1 + plan.kept_rows.size());
  for (int i = 0; i < n1; ++i) survivors.push_back(i);
  for (int r : plan.kept_rows) survivors.push_back(n1 + r);
  const int kept = static_cast<int>(survivors.size());

  MatrixXcd clipped(kept, kept);
  for (int r = 0; r < kept; ++r)
    for (int c = 0; c < kept; ++c) clipped(r, c) = zprime.z(survivors[r], survivors[c]);

  // Independent check 1: i sech(2a) I + tanh(2a) P G P^T with G from the plan.
  const MatrixXd g0 = plan.g0();
  MatrixXd g_full = MatrixXd::Zero(n1 + n2, n1 + n2);
  g_full.topRightCorner(n1, n2) = g0.transpose();
  g_full.bottomLeftCorner(n2, n1) = g0;
  MatrixXd pgp(kept, kept);
  for (int r = 0; r < kept; ++r)
    for (int c = 0; c < kept; ++c) pgp(r, c) = g_full(survivors[r], survivors[c]);
  const std::complex<double> i(0, 1);
  const MatrixXcd closed = i / std::cosh(2 * alpha) * MatrixXcd::Identity(kept, kept) +
                           std::tanh(2 * alpha) * pgp.cast<std::complex<double>>();
  const double closed_defect = linf_norm(clipped - closed);

  // Independent check 2: measure the dropped modes out of the unrotated
  // state, then rotate the surviving first class. Deletion and rotation act
  // on disjoint mode sets, so this must land on the same state.
  ExactGraph measured = rendered_hgraph_form(g_full, alpha);
  for (int idx = n1 + n2 - 1; idx >= n1; --idx) {
    const int row = idx - n1;
    bool keep = false;
    for (int r : plan.kept_rows)
      if (r == row) keep = true;
    if (!keep) measured = measure_q(measured, idx);
  }
  measured = fourier_first_partition(measured, n1);
  const double measured_defect = linf_norm(clipped - measured.z);

  if (!(closed_defect < 1e-10))
    throw ConsistencyError("clip: clipped state deviates from the closed form by " +
                           std::to_string(closed_defect));
  if (!(measured_defect < 1e-10))
    throw ConsistencyError("clip: clipped state deviates from the measurement path by " +
                           std::to_string(measured_defect));

  ClipResult result;
  result.g.z = clipped;
  if (!zprime.labels.empty())
    for (int s : survivors) result.g.labels.push_back(zprime.labels[s]);
  if (!zprime.colors.empty())
    for (int s : survivors) result.g.colors.push_back(zprime.colors[s]);
  result.closed_form_defect = closed_defect;
  result.measurement_path_defect = measured_defect;
  return result;
}

}  // namespace cvcluster
