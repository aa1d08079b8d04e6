#include "cvcluster/covariance.hpp"

#include <cmath>
#include <string>

#include "cvcluster/errors.hpp"

namespace cvcluster {

CovarianceState vacuum_covariance(int n) {
  if (n < 1) throw PreconditionError("vacuum_covariance: need at least one mode");
  return {MatrixXd::Identity(2 * n, 2 * n) / 2.0};
}

CovarianceState apply_to_covariance(const CovarianceState& state, const SymplecticOp& s) {
  if (s.size() != state.size())
    throw PreconditionError("apply_to_covariance: operator/state mode count mismatch");
  symplectic_check(s);
  const MatrixXd full = s.full();
  return {full * state.sigma * full.transpose()};
}

CovarianceState covariance_from_history(int n, const std::vector<SymplecticOp>& ops) {
  CovarianceState state = vacuum_covariance(n);
  for (const SymplecticOp& op : ops) state = apply_to_covariance(state, op);
  return state;
}

void validate_covariance(const CovarianceState& state) {
  const int rows = static_cast<int>(state.sigma.rows());
  if (state.sigma.cols() != rows) throw InvalidStateError("covariance matrix is not square");
  if (rows == 0 || rows % 2 != 0) throw InvalidStateError("covariance matrix is not 2n x 2n");
  if (asymmetry(state.sigma) >= 1e-10) throw InvalidStateError("covariance matrix is not symmetric");
  const int n = rows / 2;
  // Uncertainty relation: sigma + i Omega / 2 >= 0 (Hermitian).
  MatrixXcd herm = state.sigma.cast<std::complex<double>>();
  const std::complex<double> half_i(0, 0.5);
  for (int i = 0; i < n; ++i) {
    herm(i, n + i) += half_i;
    herm(n + i, i) -= half_i;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -1e-10)
    throw InvalidStateError("covariance violates the uncertainty relation (min eigenvalue " +
                            std::to_string(min_eig) + ")");
}

double purity_defect(const CovarianceState& state) {
  const MatrixXd doubled = 2.0 * state.sigma;
  return std::abs(doubled.partialPivLu().determinant() - 1.0);
}

ExactGraph graph_from_covariance(const CovarianceState& state) {
  validate_covariance(state);
  const double defect = purity_defect(state);
  if (!(defect < 1e-9))
    throw InvalidStateError("graph_from_covariance: state is not pure (purity defect " +
                            std::to_string(defect) + ")");
  const int n = state.size();
  const MatrixXd qq = state.qq();
  Eigen::LDLT<MatrixXd> qq_solver(qq);
  if (qq_solver.info() != Eigen::Success || !qq_solver.isPositive())
    throw InvalidStateError("graph_from_covariance: position block not positive definite");
  MatrixXd u = qq_solver.solve(MatrixXd::Identity(n, n)) / 2.0;
  MatrixXd v = qq_solver.solve(state.qp());
  u = ((u + u.transpose()) / 2.0).eval();
  v = ((v + v.transpose()) / 2.0).eval();
  ExactGraph g;
  g.z = v.cast<std::complex<double>>() +
        std::complex<double>(0, 1) * u.cast<std::complex<double>>();
  return g;
}

CovarianceState covariance_from_graph(const ExactGraph& g) {
  validate_graph(g);
  const int n = g.size();
  const MatrixXd u = g.u();
  const MatrixXd v = g.v();
  Eigen::LDLT<MatrixXd> u_solver(u);
  const MatrixXd u_inv = u_solver.solve(MatrixXd::Identity(n, n));
  MatrixXd sigma(2 * n, 2 * n);
  sigma.topLeftCorner(n, n) = u_inv / 2.0;
  sigma.topRightCorner(n, n) = u_inv * v / 2.0;
  sigma.bottomLeftCorner(n, n) = v * u_inv / 2.0;
  sigma.bottomRightCorner(n, n) = (u + v * u_inv * v) / 2.0;
  sigma = ((sigma + sigma.transpose()) / 2.0).eval();
  return {sigma};
}

CovarianceState condition_on_q(const CovarianceState& state, int node) {
  const int n = state.size();
  if (node < 0 || node >= n)
    throw PreconditionError("condition_on_q: node " + std::to_string(node) + " out of range");
  if (n < 2) throw PreconditionError("condition_on_q: cannot measure the only remaining mode");
  const double var = state.sigma(node, node);
  if (!(var > 1e-12))
    throw IllConditionedError("condition_on_q: measured quadrature variance " + std::to_string(var) +
                              " is degenerate");
  const int dim = 2 * n;
  const VectorXd cross = state.sigma.col(node);
  MatrixXd conditioned = state.sigma - (cross * cross.transpose()) / var;
  // Drop the measured mode entirely (its q row is now zero, its p is noise).
  std::vector<int> keep;
  keep.reserve(dim - 2);
  for (int i = 0; i < dim; ++i)
    if (i != node && i != n + node) keep.push_back(i);
  MatrixXd out(dim - 2, dim - 2);
  for (size_t r = 0; r < keep.size(); ++r)
    for (size_t c = 0; c < keep.size(); ++c) out(r, c) = conditioned(keep[r], keep[c]);
  return {out};
}

double nullifier_residual(const ExactGraph& g, const CovarianceState& state) {
  const int n = g.size();
  if (state.size() != n) throw PreconditionError("nullifier_residual: mode count mismatch");
  const MatrixXd qq = state.qq();
  const MatrixXd qp = state.qp();
  const MatrixXd pp = state.pp();
  const MatrixXd u = g.u();
  const MatrixXd v = g.v();
  const MatrixXcd zbar_qq_z = g.z.conjugate() * qq.cast<std::complex<double>>() * g.z;
  const MatrixXd vx = v * qp;
  double total = 0;
  for (int j = 0; j < n; ++j)
    total += pp(j, j) - 2.0 * vx(j, j) - u(j, j) + zbar_qq_z(j, j).real();
  return total;
}

}  // namespace cvcluster
