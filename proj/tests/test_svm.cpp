#include "dabench/svm.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <vector>

using namespace dabench;
using testutil::thrown_kind;

namespace {

// Frozen fixture for the solver-vs-enumeration comparison: 8 points in R^8
// (9 augmented coordinates, so every free subset stays nonsingular), mixed
// labels, per-instance boxes, and two off-unit margins.
struct QpFixture {
  Eigen::MatrixXd X;  // augmented rows
  std::vector<signed char> y;
  Eigen::VectorXd upper;
  Eigen::VectorXd margins;
};

QpFixture frozen_qp_fixture() {
  Eigen::MatrixXd raw(8, 8);
  raw << 2, -1, 0, 3, 1, -2, 0, 1,
      -3, 2, 1, 0, -1, 1, 2, -2,
      1, 1, -2, -1, 3, 0, -1, 2,
      0, -2, 3, 1, -1, 2, 1, 0,
      -1, 0, 1, -3, 2, 1, -2, 3,
      2, 3, -1, 1, 0, -1, 3, -1,
      -2, 1, 2, 0, 1, 3, -1, -3,
      1, -3, 0, 2, -2, -1, 1, 1;
  QpFixture f;
  f.X = svm::augment_bias(raw);
  f.y = {1, -1, 1, -1, 1, 1, -1, -1};
  f.upper = Eigen::VectorXd(8);
  f.upper << 0.5, 1.0, 1.5, 2.0, 0.75, 1.25, 0.6, 1.8;
  f.margins = Eigen::VectorXd(8);
  f.margins << 1.0, 1.0, 0.5, 1.0, 1.5, 1.0, 1.0, 1.0;
  return f;
}

}  // namespace

TEST_CASE("balance weights follow the n_t/(n_s+n_t) rule") {
  const svm::DomainWeights w = svm::domain_balance_weights(320, 16);
  CHECK(w.source_weight == 16.0 / 336.0);
  CHECK(w.target_weight == 320.0 / 336.0);
  CHECK(320.0 * w.source_weight == 16.0 * w.target_weight);

  const svm::DomainWeights e = svm::domain_balance_weights(3, 3);
  CHECK(e.source_weight == 0.5);
  CHECK(e.target_weight == 0.5);

  CHECK(thrown_kind([] { svm::domain_balance_weights(0, 5); }) == "zero-count");
  CHECK(thrown_kind([] { svm::domain_balance_weights(5, 0); }) == "zero-count");
}

TEST_CASE("dual coordinate descent matches the enumerated box QP") {
  const QpFixture f = frozen_qp_fixture();
  const svm::BinarySolution sol =
      svm::solve_binary(f.X, f.y, f.upper, f.margins, svm::kDefaultTol,
                        svm::kDefaultMaxSweeps, 12345);
  const oracles::BoxQpSolution ref =
      oracles::brute_force_box_qp(f.X, f.y, f.upper, f.margins);

  const double solver_primal =
      svm::binary_primal_objective(f.X, f.y, f.upper, f.margins, sol.w);
  const double oracle_primal =
      svm::binary_primal_objective(f.X, f.y, f.upper, f.margins, ref.w);

  // Strong duality ties all three objectives together at the optimum.
  CHECK(std::abs(solver_primal - ref.dual_objective) <= 1e-4);
  CHECK(std::abs(solver_primal - oracle_primal) <= 1e-4);
  CHECK(sol.dual_objective <= ref.dual_objective + 1e-9);
  CHECK((sol.w - ref.w).cwiseAbs().maxCoeff() <= 1e-4);

  // Dual feasibility holds exactly, not just to tolerance.
  for (Eigen::Index i = 0; i < sol.alpha.size(); ++i) {
    CHECK(sol.alpha(i) >= 0.0);
    CHECK(sol.alpha(i) <= f.upper(i));
  }
  CHECK(sol.violation <= svm::kDefaultTol);
}

TEST_CASE("solver is deterministic for a fixed shuffle seed") {
  const QpFixture f = frozen_qp_fixture();
  const svm::BinarySolution a =
      svm::solve_binary(f.X, f.y, f.upper, f.margins, svm::kDefaultTol,
                        svm::kDefaultMaxSweeps, 99);
  const svm::BinarySolution b =
      svm::solve_binary(f.X, f.y, f.upper, f.margins, svm::kDefaultTol,
                        svm::kDefaultMaxSweeps, 99);
  CHECK(a.w == b.w);
  CHECK(a.alpha == b.alpha);
  CHECK(a.sweeps == b.sweeps);
}

TEST_CASE("separable pair trains a correct two-class model") {
  Eigen::MatrixXd X(2, 1);
  X << -1, 1;
  const std::vector<int> y = {0, 1};
  const svm::LinearModel model =
      svm::train_ova(X, y, 2, 1.0, Eigen::VectorXd::Ones(2));
  CHECK(model.weights(1, 0) > 0.0);
  CHECK(svm::predict(model, X) == y);
}

TEST_CASE("doubling weights while halving C leaves the optimizer unchanged") {
  const Eigen::MatrixXd X = oracles::gaussian_matrix(30, 4, 41);
  std::vector<int> y(30);
  for (int i = 0; i < 30; ++i) y[static_cast<std::size_t>(i)] = i % 3;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(30);
  for (int i = 0; i < 30; ++i) w(i) = 0.5 + 0.1 * (i % 5);

  const svm::LinearModel a = svm::train_ova(X, y, 3, 2.0, w);
  const svm::LinearModel b = svm::train_ova(X, y, 3, 1.0, 2.0 * w);
  CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((a.bias - b.bias).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("a class with no positive examples becomes the constant-negative scorer") {
  const Eigen::MatrixXd X = oracles::gaussian_matrix(10, 3, 17);
  std::vector<int> y(10);
  for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(i)] = i % 2;
  const svm::LinearModel model =
      svm::train_ova(X, y, 3, 1.0, Eigen::VectorXd::Ones(10));
  CHECK(model.weights.row(2).isZero(0.0));
  CHECK(model.bias(2) == -1.0);
  CHECK(model.meta.degenerate_classes == std::vector<int>{2});
}

TEST_CASE("argmax ties break toward the smaller class id") {
  Eigen::MatrixXd scores(2, 3);
  scores << 1.0, 1.0, 0.0,
      0.5, 2.0, 2.0;
  CHECK(svm::argmax_rows(scores) == std::vector<int>{0, 1});
}

TEST_CASE("training rejects malformed inputs by kind") {
  const Eigen::MatrixXd X = oracles::gaussian_matrix(4, 2, 5);
  const std::vector<int> y = {0, 1, 0, 1};
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(4);

  CHECK(thrown_kind([&] {
          svm::train_ova(Eigen::MatrixXd(0, 2), {}, 2, 1.0, Eigen::VectorXd());
        }) == "empty-dataset");
  CHECK(thrown_kind([&] { svm::train_ova(X, y, 2, 0.0, w); }) == "invalid-C");
  CHECK(thrown_kind([&] { svm::train_ova(X, y, 2, -1.0, w); }) == "invalid-C");
  CHECK(thrown_kind([&] { svm::train_ova(X, y, 1, 1.0, w); }) == "invalid-config");
  CHECK(thrown_kind([&] { svm::train_ova(X, {0, 1, 0}, 2, 1.0, w); }) ==
        "dimension-mismatch");
  CHECK(thrown_kind([&] { svm::train_ova(X, {0, 1, 0, 7}, 2, 1.0, w); }) ==
        "unknown-label");
  CHECK(thrown_kind([&] { svm::train_ova(X, {0, 1, 0, -1}, 2, 1.0, w); }) ==
        "unknown-label");

  const svm::LinearModel model = svm::train_ova(X, y, 2, 1.0, w);
  CHECK(thrown_kind([&] {
          svm::decision_scores(model, Eigen::MatrixXd::Zero(1, 5));
        }) == "dimension-mismatch");
}
