#include "cvcluster/linalg.hpp"

#include <limits>

namespace cvcluster {

double min_symmetric_eigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

MatrixXcd drop_row_col(const MatrixXcd& m, int index) {
  const int n = static_cast<int>(m.rows());
  MatrixXcd out(n - 1, n - 1);
  for (int r = 0, ro = 0; r < n; ++r) {
    if (r == index) continue;
    for (int c = 0, co = 0; c < n; ++c) {
      if (c == index) continue;
      out(ro, co) = m(r, c);
      ++co;
    }
    ++ro;
  }
  return out;
}

}  // namespace cvcluster
