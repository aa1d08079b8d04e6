#include "cvcluster/hgraph_forms.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cvcluster/errors.hpp"
#include "cvcluster/symplectic.hpp"

namespace cvcluster {

MatrixXd HGraph::g0() const {
  if (first_partition <= 0 || first_partition >= size())
    throw PreconditionError("HGraph::g0: no bipartition recorded");
  const int n1 = first_partition;
  return g.bottomLeftCorner(size() - n1, n1);
}

HGraph bipartite_hgraph(const MatrixXd& g0) {
  const int n2 = static_cast<int>(g0.rows());
  const int n1 = static_cast<int>(g0.cols());
  HGraph h;
  h.g = MatrixXd::Zero(n1 + n2, n1 + n2);
  h.g.topRightCorner(n1, n2) = g0.transpose();
  h.g.bottomLeftCorner(n2, n1) = g0;
  h.first_partition = n1;
  return h;
}

double selfinverse_defect(const HGraph& h) {
  const int n = h.size();
  return linf_norm(h.g * h.g - MatrixXd::Identity(n, n));
}

ExactGraph hgraph_state(const HGraph& h, double alpha) {
  const int n = h.size();
  if (n == 0) throw PreconditionError("hgraph_state: empty graph");
  if (h.g.cols() != n) throw PreconditionError("hgraph_state: adjacency matrix not square");
  if (asymmetry(h.g) >= 1e-12) throw PreconditionError("hgraph_state: adjacency matrix not symmetric");
  if (alpha < 0) throw PreconditionError("hgraph_state: negative interaction strength");
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h.g);
  VectorXd scaled = (-2.0 * alpha * solver.eigenvalues().array()).exp();
  MatrixXd expm = solver.eigenvectors() * scaled.asDiagonal() * solver.eigenvectors().transpose();
  ExactGraph g;
  g.z = std::complex<double>(0, 1) * expm.cast<std::complex<double>>();
  return g;
}

ExactGraph self_inverse_hgraph_state(const HGraph& h, double alpha) {
  const int n = h.size();
  const double defect = selfinverse_defect(h);
  if (!(defect < 1e-12))
    throw PreconditionError("self_inverse_hgraph_state: graph is not self-inverse (defect " +
                            std::to_string(defect) + ")");
  const std::complex<double> i(0, 1);
  ExactGraph g;
  g.z = i * std::cosh(2 * alpha) * MatrixXcd::Identity(n, n) -
        i * std::sinh(2 * alpha) * h.g.cast<std::complex<double>>();
  return g;
}

ExactGraph rendered_hgraph_form(const MatrixXd& g, double alpha) {
  const int n = static_cast<int>(g.rows());
  if (n == 0 || g.cols() != n) throw PreconditionError("rendered_hgraph_form: matrix not square");
  if (asymmetry(g) >= 1e-12) throw PreconditionError("rendered_hgraph_form: matrix not symmetric");
  const std::complex<double> i(0, 1);
  ExactGraph out;
  out.z = i * std::cosh(2 * alpha) * MatrixXcd::Identity(n, n) -
          i * std::sinh(2 * alpha) * g.cast<std::complex<double>>();
  validate_graph(out);
  return out;
}

ExactGraph fourier_first_partition(const ExactGraph& g, int first_partition) {
  const int n = g.size();
  if (first_partition <= 0 || first_partition >= n)
    throw PreconditionError("fourier_first_partition: partition size " +
                            std::to_string(first_partition) + " invalid for " + std::to_string(n) +
                            " modes");
  std::vector<int> modes(first_partition);
  std::iota(modes.begin(), modes.end(), 0);
  return apply_symplectic(g, rotation_symplectic(n, modes, -M_PI / 2));
}

namespace {

ExactGraph cluster_form_blocks(const MatrixXd& g0, double alpha, const MatrixXd& second_diag) {
  const int n2 = static_cast<int>(g0.rows());
  const int n1 = static_cast<int>(g0.cols());
  const std::complex<double> i(0, 1);
  const double sech = 1.0 / std::cosh(2 * alpha);
  const double tanh = std::tanh(2 * alpha);
  MatrixXcd z = MatrixXcd::Zero(n1 + n2, n1 + n2);
  z.topLeftCorner(n1, n1) = i * sech * MatrixXcd::Identity(n1, n1);
  z.topRightCorner(n1, n2) = tanh * g0.transpose().cast<std::complex<double>>();
  z.bottomLeftCorner(n2, n1) = tanh * g0.cast<std::complex<double>>();
  z.bottomRightCorner(n2, n2) = i * sech * second_diag.cast<std::complex<double>>();
  return ExactGraph{z, {}, {}};
}

}  // namespace

ExactGraph cluster_form_self_inverse(const MatrixXd& g0, double alpha) {
  return cluster_form_blocks(g0, alpha, MatrixXd::Identity(g0.rows(), g0.rows()));
}

ExactGraph cluster_form_general(const MatrixXd& g0, double alpha) {
  const int n2 = static_cast<int>(g0.rows());
  const double sh = std::sinh(2 * alpha);
  // cosh^2 I - sinh^2 G G^T, written so near-self-inverse rows carry no
  // cancellation residue: entries where (G G^T)_jk matches the identity
  // exactly stay exactly at the defect-free value.
  const MatrixXd gram_gap = MatrixXd::Identity(n2, n2) - g0 * g0.transpose();
  MatrixXd second = MatrixXd::Identity(n2, n2) + sh * sh * gram_gap;
  return cluster_form_blocks(g0, alpha, second);
}

}  // namespace cvcluster
