#pragma once

#include <Eigen/Dense>

namespace cvcluster {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/** Entrywise max-abs norm; 0 for empty matrices. */
template <typename Derived>
double linf_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
double asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return linf_norm(m - m.transpose());
}

/** Smallest eigenvalue of a symmetric real matrix; +inf for empty. */
double min_symmetric_eigenvalue(const MatrixXd& m);

/** Deletes one row and column, preserving the order of the rest. */
MatrixXcd drop_row_col(const MatrixXcd& m, int index);

}  // namespace cvcluster
