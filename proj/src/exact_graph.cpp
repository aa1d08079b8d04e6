#include "cvcluster/exact_graph.hpp"

#include <cmath>
#include <string>

#include "cvcluster/errors.hpp"
#include "cvcluster/symplectic.hpp"

namespace cvcluster {

ExactGraph vacuum_graph(int n) {
  if (n < 1) throw PreconditionError("vacuum_graph: need at least one mode, got " + std::to_string(n));
  ExactGraph g;
  g.z = MatrixXcd::Identity(n, n) * std::complex<double>(0, 1);
  return g;
}

void validate_graph(const ExactGraph& g) {
  const int n = g.size();
  if (g.z.cols() != n) throw InvalidStateError("graph z matrix is not square");
  if (n == 0) throw InvalidStateError("graph has no modes");
  if (!g.labels.empty() && static_cast<int>(g.labels.size()) != n)
    throw InvalidStateError("graph label list does not match mode count");
  if (!g.colors.empty() && static_cast<int>(g.colors.size()) != n)
    throw InvalidStateError("graph color list does not match mode count");
  const double asym = asymmetry(g.z);
  if (asym >= 1e-10)
    throw InvalidStateError("graph z matrix asymmetry " + std::to_string(asym));
  const double min_eig = min_symmetric_eigenvalue(g.u());
  if (min_eig <= 0)
    throw InvalidStateError("graph width matrix is not positive definite (min eigenvalue " +
                            std::to_string(min_eig) + ")");
}

namespace {

ExactGraph drop_mode(const ExactGraph& g, int node) {
  ExactGraph out;
  out.z = drop_row_col(g.z, node);
  if (!g.labels.empty()) {
    out.labels = g.labels;
    out.labels.erase(out.labels.begin() + node);
  }
  if (!g.colors.empty()) {
    out.colors = g.colors;
    out.colors.erase(out.colors.begin() + node);
  }
  return out;
}

}  // namespace

ExactGraph measure_q(const ExactGraph& g, int node) {
  const int n = g.size();
  if (node < 0 || node >= n)
    throw PreconditionError("measure_q: node " + std::to_string(node) + " out of range");
  if (n < 2) throw PreconditionError("measure_q: cannot measure the only remaining mode");
  return drop_mode(g, node);
}

ExactGraph measure_q_rotated(const ExactGraph& g, int node, double pre_rotation) {
  const int n = g.size();
  if (node < 0 || node >= n)
    throw PreconditionError("measure_q_rotated: node " + std::to_string(node) + " out of range");
  if (n < 2) throw PreconditionError("measure_q_rotated: cannot measure the only remaining mode");
  ExactGraph rotated = apply_symplectic(g, rotation_symplectic(n, node, pre_rotation));
  return drop_mode(rotated, node);
}

std::complex<double> wavefunction_eval(const ExactGraph& g, const VectorXd& q) {
  const int n = g.size();
  if (q.size() != n) throw PreconditionError("wavefunction_eval: point dimension mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(g.u(), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig <= 0) throw InvalidStateError("wavefunction_eval: width matrix not positive definite");
  double log_det_u = 0;
  for (int i = 0; i < n; ++i) log_det_u += std::log(solver.eigenvalues()(i));
  const double norm = std::exp(0.25 * log_det_u) * std::pow(M_PI, -0.25 * n);
  const VectorXcd qc = q.cast<std::complex<double>>();
  const std::complex<double> quad = (qc.transpose() * (g.z * qc))(0);
  return norm * std::exp(std::complex<double>(0, 0.5) * quad);
}

}  // namespace cvcluster
