#include "cvcluster/symplectic.hpp"

#include <cmath>
#include <string>

#include "cvcluster/errors.hpp"

namespace cvcluster {

MatrixXd SymplecticOp::full() const {
  const int n = size();
  MatrixXd s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = a;
  s.topRightCorner(n, n) = b;
  s.bottomLeftCorner(n, n) = c;
  s.bottomRightCorner(n, n) = d;
  return s;
}

SymplecticOp SymplecticOp::inverse() const {
  // Omega^{-1} S^T Omega = [[D^T, -B^T], [-C^T, A^T]].
  return {d.transpose(), -b.transpose(), -c.transpose(), a.transpose()};
}

SymplecticOp identity_symplectic(int n) {
  return {MatrixXd::Identity(n, n), MatrixXd::Zero(n, n), MatrixXd::Zero(n, n),
          MatrixXd::Identity(n, n)};
}

double symplectic_defect(const SymplecticOp& s) {
  const int n = s.size();
  MatrixXd omega = MatrixXd::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  const MatrixXd full = s.full();
  return linf_norm(full.transpose() * omega * full - omega);
}

void symplectic_check(const SymplecticOp& s) {
  const int n = s.size();
  if (s.a.cols() != n || s.b.rows() != n || s.b.cols() != n || s.c.rows() != n ||
      s.c.cols() != n || s.d.rows() != n || s.d.cols() != n)
    throw InvalidOperatorError("symplectic blocks have mismatched shapes");
  const double defect = symplectic_defect(s);
  if (!(defect < 1e-12))
    throw InvalidOperatorError("operator is not symplectic (defect " + std::to_string(defect) + ")");
}

SymplecticOp compose(const SymplecticOp& op2, const SymplecticOp& op1) {
  if (op1.size() != op2.size()) throw InvalidOperatorError("compose: mode count mismatch");
  return {op2.a * op1.a + op2.b * op1.c, op2.a * op1.b + op2.b * op1.d,
          op2.c * op1.a + op2.d * op1.c, op2.c * op1.b + op2.d * op1.d};
}

namespace {

void require_mode(int n, int mode, const char* who) {
  if (mode < 0 || mode >= n)
    throw PreconditionError(std::string(who) + ": mode " + std::to_string(mode) + " out of range for " +
                            std::to_string(n) + " modes");
}

}  // namespace

SymplecticOp beamsplitter_symplectic(int n, int first, int second) {
  require_mode(n, first, "beamsplitter_symplectic");
  require_mode(n, second, "beamsplitter_symplectic");
  if (first == second) throw PreconditionError("beamsplitter_symplectic: modes must differ");
  const double s = 1.0 / std::sqrt(2.0);
  MatrixXd mix = MatrixXd::Identity(n, n);
  mix(first, first) = s;
  mix(first, second) = -s;
  mix(second, first) = s;
  mix(second, second) = s;
  return {mix, MatrixXd::Zero(n, n), MatrixXd::Zero(n, n), mix};
}

SymplecticOp rotation_symplectic(int n, int mode, double theta) {
  return rotation_symplectic(n, std::vector<int>{mode}, theta);
}

SymplecticOp rotation_symplectic(int n, const std::vector<int>& modes, double theta) {
  SymplecticOp op = identity_symplectic(n);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  for (int mode : modes) {
    require_mode(n, mode, "rotation_symplectic");
    op.a(mode, mode) = ct;
    op.b(mode, mode) = st;
    op.c(mode, mode) = -st;
    op.d(mode, mode) = ct;
  }
  return op;
}

SymplecticOp squeezer_symplectic(int n, int mode, double r) {
  require_mode(n, mode, "squeezer_symplectic");
  SymplecticOp op = identity_symplectic(n);
  op.a(mode, mode) = std::exp(-r);
  op.d(mode, mode) = std::exp(r);
  return op;
}

ExactGraph apply_symplectic(const ExactGraph& g, const SymplecticOp& s) {
  const int n = g.size();
  if (s.size() != n) throw PreconditionError("apply_symplectic: operator/state mode count mismatch");
  symplectic_check(s);

  const MatrixXcd denom = s.a.cast<std::complex<double>>() + s.b.cast<std::complex<double>>() * g.z;
  // z' = numer * denom^{-1}, via denom^T x^T = numer^T.
  Eigen::PartialPivLU<MatrixXcd> lu(denom.transpose().eval());
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12))
    throw IllConditionedError("apply_symplectic: solve reciprocal condition " + std::to_string(rcond));

  const MatrixXcd numer = s.c.cast<std::complex<double>>() + s.d.cast<std::complex<double>>() * g.z;
  MatrixXcd zp = lu.solve(numer.transpose()).transpose();

  const double asym = asymmetry(zp);
  if (!(asym < 1e-10))
    throw ConsistencyError("apply_symplectic: result asymmetry " + std::to_string(asym));
  zp = ((zp + zp.transpose()) / 2.0).eval();

  ExactGraph out{zp, g.labels, g.colors};
  const double min_eig = min_symmetric_eigenvalue(out.u());
  if (!(min_eig > 0))
    throw InvalidStateError("apply_symplectic: output width matrix lost positivity (min eigenvalue " +
                            std::to_string(min_eig) + ")");
  return out;
}

}  // namespace cvcluster
