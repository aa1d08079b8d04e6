#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cvcluster/errors.hpp"
#include "cvcluster/hgraph_forms.hpp"
#include "cvcluster/simplified_graph.hpp"
#include "doctest.h"

using namespace cvcluster;

namespace {

MatrixXd rotation2(double phi) {
  MatrixXd r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

/** Four-node cycle from two squeezed pairs and one splitter event; signs
 * +++- around the cycle make it self-inverse. */
SimplifiedGraph four_cycle(double alpha) {
  SimplifiedGraph g;
  g.alpha = alpha;
  add_tmss_pair(g, 0, NodeColor::Black, 1, NodeColor::White);
  add_tmss_pair(g, 2, NodeColor::Black, 3, NodeColor::White);
  return rule_beamsplit(g, {0, 2});
}

}  // namespace

TEST_CASE("bipartite assembly and partition bookkeeping") {
  MatrixXd g0(2, 3);
  g0 << 1, 2, 3, 4, 5, 6;
  const HGraph h = bipartite_hgraph(g0);
  CHECK(h.size() == 5);
  CHECK(h.first_partition == 3);
  CHECK(linf_norm(h.g0() - g0) == 0);
  CHECK(linf_norm(h.g - h.g.transpose()) == 0);
  CHECK(h.g.topLeftCorner(3, 3).isZero(0));
  CHECK(h.g.bottomRightCorner(2, 2).isZero(0));
}

TEST_CASE("selfinverse_defect: orthogonal cross block 0, empty graph 1, perturbation visible") {
  const HGraph h = bipartite_hgraph(rotation2(0.3));
  CHECK(selfinverse_defect(h) < 1e-15);

  HGraph vacuum;
  vacuum.g = MatrixXd::Zero(3, 3);
  vacuum.first_partition = 1;
  CHECK(selfinverse_defect(vacuum) == 1.0);

  HGraph bent = bipartite_hgraph(rotation2(0.3) * 1.01);
  CHECK(selfinverse_defect(bent) > 0.01);
}

TEST_CASE("splitter-built four-cycle renders the exact matrix exponential") {
  const double alpha = 0.8;
  const SimplifiedGraph cycle = four_cycle(alpha);
  const std::vector<NodeId> order = node_order(cycle);

  HGraph h;
  h.g = signed_adjacency(cycle, order);
  CHECK(selfinverse_defect(h) < 1e-12);

  const ExactGraph exponential = hgraph_state(h, alpha);
  const ExactGraph closed = self_inverse_hgraph_state(h, alpha);
  const ExactGraph rendered = to_exact(cycle, order);
  CHECK(linf_norm(exponential.z - closed.z) < 1e-12);
  CHECK(linf_norm(exponential.z - rendered.z) < 1e-12);
}

TEST_CASE("hgraph_state enforces a symmetric coupling matrix") {
  HGraph h;
  h.g = MatrixXd::Zero(2, 2);
  h.g(0, 1) = 1.0;  // (1, 0) missing
  CHECK_THROWS_AS(hgraph_state(h, 0.5), PreconditionError);
}

TEST_CASE("self_inverse_hgraph_state refuses a defective graph") {
  const HGraph bent = bipartite_hgraph(rotation2(0.4) * 1.05);
  CHECK_THROWS_AS(self_inverse_hgraph_state(bent, 0.5), PreconditionError);
  CHECK_NOTHROW(hgraph_state(bent, 0.5));
}

TEST_CASE("rendered form matches the exponential only when self-inverse") {
  const MatrixXd g0 = rotation2(1.1);
  const HGraph h = bipartite_hgraph(g0);
  CHECK(linf_norm(rendered_hgraph_form(h.g, 0.6).z - hgraph_state(h, 0.6).z) < 1e-13);

  // Scale kept below coth(2a) so the rendered state stays physical.
  const HGraph bent = bipartite_hgraph(g0 * 1.15);
  const double gap = linf_norm(rendered_hgraph_form(bent.g, 0.6).z - hgraph_state(bent, 0.6).z);
  CHECK(gap > 1e-3);
}

TEST_CASE("rendering a too-strong coupling loses physicality") {
  MatrixXd strong(2, 2);
  strong << 0, 2, 2, 0;
  CHECK_THROWS_AS(rendered_hgraph_form(strong, 1.0), InvalidStateError);
}

TEST_CASE("partition rotation reproduces both closed cluster forms") {
  const double alpha = 0.35;
  const MatrixXd g0 = rotation2(0.9);

  const ExactGraph rotated =
      fourier_first_partition(self_inverse_hgraph_state(bipartite_hgraph(g0), alpha), 2);
  CHECK(linf_norm(rotated.z - cluster_form_self_inverse(g0, alpha).z) < 1e-13);

  MatrixXd defective = g0;
  defective(1, 0) += 0.3;
  const ExactGraph rotated_def =
      fourier_first_partition(rendered_hgraph_form(bipartite_hgraph(defective).g, alpha), 2);
  CHECK(linf_norm(rotated_def.z - cluster_form_general(defective, alpha).z) < 1e-13);

  // No defect: the general form collapses to the self-inverse one.
  CHECK(linf_norm(cluster_form_general(g0, alpha).z - cluster_form_self_inverse(g0, alpha).z) <
        1e-14);
}

TEST_CASE("cluster weights approach the ideal graph in the strong-squeezing limit") {
  const MatrixXd g0 = rotation2(0.0);  // identity: two disjoint pairs
  const ExactGraph strong = cluster_form_self_inverse(g0, 5.0);
  CHECK(std::abs(strong.z(2, 0) - std::complex<double>(1, 0)) < 1e-8);   // tanh(10) -> 1
  CHECK(std::abs(strong.z(0, 0)) < 1e-4);                                // sech(10) -> 0
  const ExactGraph weak = cluster_form_self_inverse(g0, 0.05);
  CHECK(std::abs(weak.z(2, 0)) < 0.1);  // barely entangled
}
