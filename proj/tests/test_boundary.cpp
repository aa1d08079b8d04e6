#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cvcluster/boundary.hpp"
#include "cvcluster/circuits.hpp"
#include "cvcluster/errors.hpp"
#include "cvcluster/hgraph_forms.hpp"
#include "cvcluster/simplified_graph.hpp"
#include "doctest.h"

using namespace cvcluster;

namespace {

/** Cross block of a two-colored graph: rows = one class, cols = the other. */
MatrixXd cross_block(const SimplifiedGraph& g) {
  std::vector<NodeId> rows, cols;
  for (const auto& [id, color] : g.nodes)
    (color == NodeColor::White ? cols : rows).push_back(id);
  MatrixXd block = MatrixXd::Zero(int(rows.size()), int(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) block(r, c) = g.signed_weight(rows[r], cols[c]);
  return block;
}

}  // namespace

TEST_CASE("split_error subtracts the reference and insists it is self-inverse") {
  MatrixXd g0 = MatrixXd::Identity(3, 3);
  g0(1, 0) = 0.2;
  const MatrixXd e0 = split_error(g0, MatrixXd::Identity(3, 3));
  CHECK(e0(1, 0) == 0.2);
  CHECK(e0(0, 0) == 0.0);

  CHECK_THROWS_AS(split_error(g0, MatrixXd::Identity(4, 4)), PreconditionError);
  CHECK_THROWS_AS(split_error(g0, 1.1 * MatrixXd::Identity(3, 3)), PreconditionError);
}

TEST_CASE("the streamed ring reference is accepted as self-inverse without snapping") {
  const SimplifiedGraph ring = reference_ring_wire(0.5, 8);
  const MatrixXd g0_bar = cross_block(ring);
  CHECK_NOTHROW(split_error(g0_bar, g0_bar));
}

TEST_CASE("build_p0 keeps exactly the all-zero rows") {
  MatrixXd e0 = MatrixXd::Zero(4, 3);
  e0(1, 2) = 0.3;
  e0(3, 0) = 1e-14;
  CHECK(build_p0(e0) == std::vector<int>{0, 2});
  CHECK(build_p0(e0, 1e-12) == std::vector<int>{0, 2, 3});
}

TEST_CASE("selector_matrix places one unit entry per kept row") {
  const MatrixXd p = selector_matrix({0, 2}, 3);
  CHECK(p.rows() == 2);
  CHECK(p(0, 0) == 1.0);
  CHECK(p(1, 2) == 1.0);
  CHECK(p.sum() == 2.0);
  CHECK_THROWS_AS(selector_matrix({3}, 3), PreconditionError);
}

TEST_CASE("clip plan bookkeeping and the dense-error warning") {
  MatrixXd g0 = MatrixXd::Identity(3, 3);
  g0(1, 0) = 0.2;
  const ClipPlan plan = make_clip_plan(g0, MatrixXd::Identity(3, 3));
  CHECK(plan.kept_rows == std::vector<int>{0, 2});
  CHECK(plan.first_partition() == 3);
  CHECK(plan.second_partition() == 3);
  CHECK(!plan.dense_error_warning);
  CHECK(linf_norm(plan.g0() - g0) == 0);

  MatrixXd saturated = MatrixXd::Identity(3, 3);
  saturated.col(0).array() += 0.1;
  const ClipPlan bad = make_clip_plan(saturated, MatrixXd::Identity(3, 3));
  CHECK(bad.kept_rows.empty());
  CHECK(bad.dense_error_warning);
}

TEST_CASE("clipping an undisturbed state is the identity on the survivors") {
  const MatrixXd g0 = MatrixXd::Identity(3, 3);
  const ClipPlan plan = make_clip_plan(g0, g0);
  const ExactGraph zprime = cluster_form_general(g0, 0.4);
  const ClipResult result = clip(zprime, plan, 0.4);
  CHECK(result.g.size() == 6);
  CHECK(linf_norm(result.g.z - zprime.z) == 0);
  CHECK(result.closed_form_defect < 1e-12);
  CHECK(result.measurement_path_defect < 1e-12);
}

TEST_CASE("clipping removes a perturbed row and matches both verification paths") {
  MatrixXd g0 = MatrixXd::Identity(4, 4);
  g0(2, 0) += 0.3;
  g0(2, 3) -= 0.4;
  const ClipPlan plan = make_clip_plan(g0, MatrixXd::Identity(4, 4));
  CHECK(plan.kept_rows == std::vector<int>{0, 1, 3});

  const ExactGraph zprime = cluster_form_general(g0, 0.5);
  const ClipResult result = clip(zprime, plan, 0.5);
  CHECK(result.g.size() == 7);
  CHECK(result.closed_form_defect < 1e-10);
  CHECK(result.measurement_path_defect < 1e-10);

  // Survivor self-loops sit at i sech; survivor links at tanh.
  const double sech = 1.0 / std::cosh(1.0);
  CHECK(std::abs(result.g.z(0, 0) - std::complex<double>(0, sech)) < 1e-12);
  CHECK(std::abs(result.g.z(4, 0) - std::complex<double>(std::tanh(1.0), 0)) < 1e-12);
}

TEST_CASE("clip refuses mismatched shapes and fully contaminated plans") {
  const MatrixXd g0 = MatrixXd::Identity(3, 3);
  const ClipPlan plan = make_clip_plan(g0, g0);
  CHECK_THROWS_AS(clip(cluster_form_general(MatrixXd::Identity(4, 4), 0.4), plan, 0.4),
                  PreconditionError);

  MatrixXd saturated = MatrixXd::Identity(3, 3);
  saturated.col(0).array() += 0.1;
  const ClipPlan dense = make_clip_plan(saturated, MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(clip(cluster_form_general(saturated, 0.4), dense, 0.4), PreconditionError);
}

TEST_CASE("open wire pattern clips against the periodic reference") {
  const double alpha = 0.5;
  const int macronodes = 10;
  const SimplifiedGraph ring = reference_ring_wire(alpha, macronodes);
  const SimplifiedGraph open = remove_wrap_edges(ring, macronodes);

  const ClipPlan plan = make_clip_plan(cross_block(open), cross_block(ring));
  CHECK(plan.dense_error_warning == false);
  CHECK(int(plan.kept_rows.size()) < plan.second_partition());

  const ClipResult result = clip(cluster_form_general(plan.g0(), alpha), plan, alpha);
  CHECK(result.closed_form_defect < 1e-10);
  CHECK(result.measurement_path_defect < 1e-10);
}
