#include "dabench/svm.hpp"

#include "dabench/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>

namespace dabench::svm {

DomainWeights domain_balance_weights(std::int64_t n_s, std::int64_t n_t) {
  if (n_s < 1 || n_t < 1)
    throw Error("zero-count", "both domains must be non-empty; got n_s=" +
                                  std::to_string(n_s) +
                                  ", n_t=" + std::to_string(n_t));
  const double total = static_cast<double>(n_s + n_t);
  return {static_cast<double>(n_t) / total, static_cast<double>(n_s) / total};
}

// Dual of the L1-loss problem:
//   max_a  sum_i margin_i a_i - 0.5 || sum_i a_i y_i x_i ||^2
//   s.t.   0 <= a_i <= upper_i
// One pass of exact coordinate minimization per sweep; the projected
// gradient drives both the update and the stopping test (Hsieh et al. style,
// generalized to per-instance bounds and margins).
BinarySolution solve_binary(const Eigen::MatrixXd& X,
                            const std::vector<signed char>& y,
                            const Eigen::VectorXd& upper,
                            const Eigen::VectorXd& margins, double tol,
                            int max_sweeps, std::uint64_t shuffle_seed) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  assert(static_cast<Eigen::Index>(y.size()) == n);
  assert(upper.size() == n && margins.size() == n);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd qd(n);
  for (Eigen::Index i = 0; i < n; ++i) qd(i) = X.row(i).squaredNorm();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(shuffle_seed);

#ifndef NDEBUG
  double prev_dual = 0.0;  // D(0) = 0
#endif

  int sweep = 0;
  double violation = 0.0;
  for (; sweep < max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    violation = 0.0;
    for (Eigen::Index s = 0; s < n; ++s) {
      const Eigen::Index i = order[s];
      if (qd(i) <= 0.0) {
        // Zero row: the dual is linear in alpha_i, move to the favored bound.
        const double g = -margins(i);
        double pg = g;
        if (alpha(i) <= 0.0 && g >= 0.0)
          pg = 0.0;
        else if (alpha(i) >= upper(i) && g <= 0.0)
          pg = 0.0;
        violation = std::max(violation, std::abs(pg));
        if (pg != 0.0) alpha(i) = g < 0.0 ? upper(i) : 0.0;
        continue;
      }
      const double yi = static_cast<double>(y[i]);
      const double g = yi * w.dot(X.row(i)) - margins(i);

      double pg = g;
      if (alpha(i) <= 0.0 && g >= 0.0)
        pg = 0.0;
      else if (alpha(i) >= upper(i) && g <= 0.0)
        pg = 0.0;
      violation = std::max(violation, std::abs(pg));

      if (pg != 0.0) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - g / qd(i), 0.0, upper(i));
        const double delta = (alpha(i) - old) * yi;
        if (delta != 0.0) w += delta * X.row(i).transpose();
      }
    }

#ifndef NDEBUG
    {
      // Exact per-coordinate minimization, so the dual never decreases.
      const double dual = margins.dot(alpha) - 0.5 * w.squaredNorm();
      assert(dual >= prev_dual - 1e-9 * (1.0 + std::abs(prev_dual)));
      prev_dual = dual;
    }
#endif

    if (violation <= tol) {
      ++sweep;
      break;
    }
  }

  BinarySolution sol;
  sol.w = std::move(w);
  sol.dual_objective = margins.dot(alpha) - 0.5 * sol.w.squaredNorm();
  sol.alpha = std::move(alpha);
  sol.sweeps = sweep;
  sol.violation = violation;
  return sol;
}

double binary_primal_objective(const Eigen::MatrixXd& X,
                               const std::vector<signed char>& y,
                               const Eigen::VectorXd& upper,
                               const Eigen::VectorXd& margins,
                               const Eigen::VectorXd& w) {
  double obj = 0.5 * w.squaredNorm();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double yi = static_cast<double>(y[i]);
    obj += upper(i) * std::max(0.0, margins(i) - yi * w.dot(X.row(i)));
  }
  return obj;
}

Eigen::MatrixXd augment_bias(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Xa(X.rows(), X.cols() + 1);
  Xa.leftCols(X.cols()) = X;
  Xa.col(X.cols()).setOnes();
  return Xa;
}

LinearModel train_ova(const Eigen::MatrixXd& X, const std::vector<int>& y,
                      int n_classes, double C, const Eigen::VectorXd& weights) {
  const Eigen::Index n = X.rows();
  if (n == 0) throw Error("empty-dataset", "cannot train on zero examples");
  if (!(C > 0)) throw Error("invalid-C", "C must be > 0, got " + std::to_string(C));
  if (n_classes < 2) throw Error("invalid-config", "need at least 2 classes");
  if (static_cast<Eigen::Index>(y.size()) != n || weights.size() != n)
    throw Error("dimension-mismatch", "labels/weights length != n");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(weights(i) > 0))
      throw Error("invalid-config",
                  "instance weights must be positive; weight " +
                      std::to_string(i) + " is " + std::to_string(weights(i)));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = y[static_cast<std::size_t>(i)];
    if (label < 0 || label >= n_classes)
      throw Error("unknown-label", "label id " + std::to_string(label) +
                                       " out of range at row " +
                                       std::to_string(i));
  }

  const Eigen::MatrixXd Xa = augment_bias(X);
  const Eigen::VectorXd upper = C * weights;
  const Eigen::VectorXd margins = Eigen::VectorXd::Ones(n);

  LinearModel model;
  model.weights.resize(n_classes, X.cols());
  model.bias.resize(n_classes);
  model.C = C;

  std::vector<signed char> yc(n);
  for (int c = 0; c < n_classes; ++c) {
    bool has_positive = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      yc[i] = y[i] == c ? 1 : -1;
      has_positive |= yc[i] == 1;
    }
    if (!has_positive) {
      model.weights.row(c).setZero();
      model.bias(c) = -1.0;
      model.meta.degenerate_classes.push_back(c);
      continue;
    }
    BinarySolution sol = solve_binary(Xa, yc, upper, margins, kDefaultTol,
                                      kDefaultMaxSweeps,
                                      kClassShuffleSeed + static_cast<std::uint64_t>(c));
    model.weights.row(c) = sol.w.head(X.cols()).transpose();
    model.bias(c) = sol.w(X.cols());
    model.meta.total_sweeps += sol.sweeps;
    model.meta.max_violation = std::max(model.meta.max_violation, sol.violation);
  }
  return model;
}

Eigen::MatrixXd decision_scores(const LinearModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.dim())
    throw Error("dimension-mismatch", "X has dim " + std::to_string(X.cols()) +
                                          ", model expects " +
                                          std::to_string(model.dim()));
  return (X * model.weights.transpose()).rowwise() + model.bias.transpose();
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& scores) {
  std::vector<int> labels(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c)
      if (scores(i, c) > scores(i, best)) best = static_cast<int>(c);
    labels[i] = best;
  }
  return labels;
}

std::vector<int> predict(const LinearModel& model, const Eigen::MatrixXd& X) {
  return argmax_rows(decision_scores(model, X));
}

}  // namespace dabench::svm
