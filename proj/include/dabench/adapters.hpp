#pragma once

#include "dabench/dataset.hpp"
#include "dabench/subspace.hpp"
#include "dabench/svm.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dabench::adapters {

using dabench::data::LabeledDataset;

enum class Method {
  source_only,
  target_only,
  combined,
  daume,
  late_fusion,
  pmt,
  mmdt,
  sa,
  gfk,
};

Method method_from_string(std::string_view s);
std::string_view to_string(Method m);
// All nine methods in report order.
const std::vector<Method>& all_methods();
bool is_unsupervised(Method m);  // sa and gfk learn from the unlabeled test pool

struct Hyperparameters {
  double C = 1.0;
  double gamma = 1000.0;  // PMT transfer strength
  std::vector<double> alpha_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9, 1.0};
  int subspace_dim = 100;
  int mmdt_max_iters = 10;
  double mmdt_tol = 1e-6;
  bool normalize_features = false;  // per-example l2 normalization
};

struct AdapterSpec {
  Method method = Method::source_only;
  Hyperparameters hyper;

  void validate() const;
};

// Unlabeled view handed to the unsupervised adapters; carrying only the
// feature matrix keeps target labels out of their reach by construction.
struct UnlabeledDataset {
  Eigen::MatrixXd features;
  std::string domain;
};
UnlabeledDataset strip_labels(const LabeledDataset& dataset);

// A trained adapter: method tag, whatever transform the method learned, and
// the linear model(s), behind one predict interface.
struct FittedClassifier {
  Method method = Method::source_only;
  Hyperparameters hyper;
  std::string source_domain;
  std::string target_domain;
  int input_dim = 0;  // raw feature width predict expects

  svm::LinearModel model;
  std::optional<svm::LinearModel> target_model;  // late fusion second head

  Eigen::MatrixXd mmdt_transform;        // W (d x d), target -> source
  Eigen::MatrixXd target_projection;     // sa: Pt basis (d x k)
  Eigen::VectorXd target_center;         // sa: Pt centering mean
  Eigen::MatrixXd embedding;             // gfk: psd_sqrt(G) (d x d)
  Eigen::VectorXd embedding_center;      // gfk: pooled mean

  int effective_subspace_dim = 0;        // sa/gfk, after any reduction
  std::vector<double> objective_history; // mmdt joint objective per step
  std::vector<std::string> notes;        // provenance: reductions, degeneracies

  // Applies normalization plus the method's learned transform to raw target
  // features, yielding whatever space the model scores in.
  Eigen::MatrixXd transform_target(const Eigen::MatrixXd& X) const;

  // Scores for target-domain inputs. For late fusion these are the source
  // head's scores; pair with target_scores and fuse_scores.
  Eigen::MatrixXd scores(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd target_head_scores(const Eigen::MatrixXd& X) const;

  // Total on any m x d input. Late fusion predicts at the grid's mean alpha;
  // per-alpha evaluation goes through fuse_scores instead.
  std::vector<int> predict(const Eigen::MatrixXd& X) const;
};

FittedClassifier fit_source_only(const LabeledDataset& source,
                                 const Hyperparameters& hyper);
FittedClassifier fit_target_only(const LabeledDataset& target_labeled,
                                 const Hyperparameters& hyper);
FittedClassifier fit_combined(const LabeledDataset& source,
                              const LabeledDataset& target_labeled,
                              const Hyperparameters& hyper);

// Per-example l2 normalization when hyper.normalize_features is set;
// otherwise a copy. Zero rows pass through unchanged.
Eigen::MatrixXd maybe_normalize(const Eigen::MatrixXd& X,
                                const Hyperparameters& hyper);

// Feature augmentation: source x -> (x, x, 0), target x -> (x, 0, x).
Eigen::MatrixXd daume_augment(const Eigen::MatrixXd& X, bool is_source);

FittedClassifier fit_daume(const LabeledDataset& source,
                           const LabeledDataset& target_labeled,
                           const Hyperparameters& hyper);

// (1-alpha) * score_src + alpha * score_tgt.
Eigen::MatrixXd fuse_scores(const Eigen::MatrixXd& score_src,
                            const Eigen::MatrixXd& score_tgt, double alpha);

FittedClassifier fit_late_fusion(const LabeledDataset& source,
                                 const LabeledDataset& target_labeled,
                                 const Hyperparameters& hyper);
FittedClassifier fit_pmt(const LabeledDataset& source,
                         const LabeledDataset& target_labeled,
                         const Hyperparameters& hyper);
FittedClassifier fit_mmdt(const LabeledDataset& source,
                          const LabeledDataset& target_labeled,
                          const Hyperparameters& hyper);
FittedClassifier fit_sa(const LabeledDataset& source,
                        const UnlabeledDataset& target_unlabeled,
                        const Hyperparameters& hyper);
FittedClassifier fit_gfk(const LabeledDataset& source,
                         const UnlabeledDataset& target_unlabeled,
                         const Hyperparameters& hyper);

// Per-class PMT primal objective at the fitted hyperplanes (test hook):
//   0.5||w||^2 + gamma/2 ||w - w_s||^2 + C * sum_t hinge.
double pmt_objective(const FittedClassifier& fitted, const svm::LinearModel& source_model,
                     const LabeledDataset& target_labeled, int class_id);

// MMDT joint objective at (W, model) over the given datasets (test hook).
double mmdt_objective(const Eigen::MatrixXd& W, const svm::LinearModel& model,
                      const Eigen::MatrixXd& Xs, const std::vector<int>& ys,
                      const Eigen::MatrixXd& Xt, const std::vector<int>& yt,
                      double C, double source_weight, double target_weight);

}  // namespace dabench::adapters
