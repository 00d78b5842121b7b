#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace dabench::svm {

// Per-class hyperplanes from the one-vs-all weighted C-SVM.
struct LinearModel {
  Eigen::MatrixXd weights;  // K x d
  Eigen::VectorXd bias;     // K
  double C = 1.0;

  struct Meta {
    int total_sweeps = 0;          // summed over the K binary subproblems
    double max_violation = 0.0;    // worst final projected-gradient violation
    std::vector<int> degenerate_classes;  // trained as constant-negative scorers
  } meta;

  int n_classes() const { return static_cast<int>(weights.rows()); }
  Eigen::Index dim() const { return weights.cols(); }
};

// source_weight = n_t/(n_s+n_t), target_weight = n_s/(n_s+n_t), so both
// domains contribute the same total weight n_s*n_t/(n_s+n_t).
struct DomainWeights {
  double source_weight;
  double target_weight;
};
DomainWeights domain_balance_weights(std::int64_t n_s, std::int64_t n_t);

// Solution of one binary subproblem, kept around for oracle tests.
struct BinarySolution {
  Eigen::VectorXd w;      // augmented: last coordinate is the bias
  Eigen::VectorXd alpha;  // dual variables, 0 <= alpha_i <= upper_i
  double dual_objective = 0.0;
  int sweeps = 0;
  double violation = 0.0;  // max |projected gradient| over the final sweep
};

// L1-loss dual coordinate descent for
//   min_w 0.5||w||^2 + sum_i upper_i * max(0, margin_i - y_i w.x_i)
// over pre-augmented rows X (bias folded in as a regularized constant-1
// coordinate). Stops when the largest projected-gradient violation in a
// sweep drops to tol, or after max_sweeps. Coordinate order is reshuffled
// every sweep from a fixed seed, so results are deterministic.
BinarySolution solve_binary(const Eigen::MatrixXd& X,
                            const std::vector<signed char>& y,
                            const Eigen::VectorXd& upper,
                            const Eigen::VectorXd& margins, double tol,
                            int max_sweeps, std::uint64_t shuffle_seed);

// Primal objective of the same problem at w.
double binary_primal_objective(const Eigen::MatrixXd& X,
                               const std::vector<signed char>& y,
                               const Eigen::VectorXd& upper,
                               const Eigen::VectorXd& margins,
                               const Eigen::VectorXd& w);

inline constexpr double kDefaultTol = 1e-6;
inline constexpr int kDefaultMaxSweeps = 10000;

// Shuffle seed for the class-c subproblem inside train_ova. Shared so other
// trainers that reuse solve_binary per class stay reproducible against it.
inline constexpr std::uint64_t kClassShuffleSeed = 0x0a11c1a55e5ULL;

// Appends the constant-1 bias coordinate.
Eigen::MatrixXd augment_bias(const Eigen::MatrixXd& X);

// One-vs-all weighted C-SVM. Per-instance dual box constraints are
// C * weight_i. A class with no positive examples is not an error: it gets
// the constant-negative scorer (w=0, b=-1) and is flagged in meta.
LinearModel train_ova(const Eigen::MatrixXd& X, const std::vector<int>& y,
                      int n_classes, double C, const Eigen::VectorXd& weights);

// score[i][c] = w_c . x_i + b_c
Eigen::MatrixXd decision_scores(const LinearModel& model, const Eigen::MatrixXd& X);

// Row-wise argmax of decision_scores; ties break toward the smaller class id.
std::vector<int> predict(const LinearModel& model, const Eigen::MatrixXd& X);
std::vector<int> argmax_rows(const Eigen::MatrixXd& scores);

}  // namespace dabench::svm
