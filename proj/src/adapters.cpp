#include "dabench/adapters.hpp"

#include "dabench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dabench::adapters {

namespace {

Eigen::MatrixXd row_normalized(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out = X;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

Eigen::MatrixXd prepared(const Eigen::MatrixXd& X, const Hyperparameters& hyper) {
  return hyper.normalize_features ? row_normalized(X) : X;
}

void require_nonempty(const LabeledDataset& ds, const char* kind) {
  if (ds.n() == 0) throw Error(kind, "dataset '" + ds.domain + "' has no examples");
}

void require_same_classes(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.class_names != b.class_names)
    throw Error("invalid-config", "domains '" + a.domain + "' and '" + b.domain +
                                      "' disagree on the class set");
}

void require_same_dim(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.dim() != b.dim())
    throw Error("dimension-mismatch",
                "feature widths differ: " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
}

Eigen::VectorXd unit_weights(Eigen::Index n) { return Eigen::VectorXd::Ones(n); }

double grid_mean(const std::vector<double>& grid) {
  return std::accumulate(grid.begin(), grid.end(), 0.0) /
         static_cast<double>(grid.size());
}

FittedClassifier make_base(Method m, const Hyperparameters& hyper,
                           const std::string& source_domain,
                           const std::string& target_domain, int input_dim) {
  FittedClassifier f;
  f.method = m;
  f.hyper = hyper;
  f.source_domain = source_domain;
  f.target_domain = target_domain;
  f.input_dim = input_dim;
  return f;
}

// Stacks source rows above target rows together with labels and per-instance
// balance weights.
struct Pooled {
  Eigen::MatrixXd X;
  std::vector<int> y;
  Eigen::VectorXd weights;
};

Pooled pool_balanced(const Eigen::MatrixXd& Xs, const std::vector<int>& ys,
                     const Eigen::MatrixXd& Xt, const std::vector<int>& yt) {
  const Eigen::Index n_s = Xs.rows();
  const Eigen::Index n_t = Xt.rows();
  const svm::DomainWeights w = svm::domain_balance_weights(n_s, n_t);
  Pooled p;
  p.X.resize(n_s + n_t, Xs.cols());
  p.X.topRows(n_s) = Xs;
  p.X.bottomRows(n_t) = Xt;
  p.y.reserve(static_cast<std::size_t>(n_s + n_t));
  p.y.insert(p.y.end(), ys.begin(), ys.end());
  p.y.insert(p.y.end(), yt.begin(), yt.end());
  p.weights.resize(n_s + n_t);
  p.weights.head(n_s).setConstant(w.source_weight);
  p.weights.tail(n_t).setConstant(w.target_weight);
  return p;
}

double ova_hinge_sum(const svm::LinearModel& model, const Eigen::MatrixXd& X,
                     const std::vector<int>& y) {
  const Eigen::MatrixXd scores = svm::decision_scores(model, X);
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    for (int c = 0; c < model.n_classes(); ++c) {
      const double s = y[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
      total += std::max(0.0, 1.0 - s * scores(i, c));
    }
  return total;
}

// W-step inner objective: the terms of the joint objective that depend on W.
double w_step_objective(const Eigen::MatrixXd& W, const svm::LinearModel& model,
                        const Eigen::MatrixXd& Xt, const std::vector<int>& yt,
                        double C, double target_weight) {
  const Eigen::Index d = W.rows();
  const double ridge =
      0.5 * (W - Eigen::MatrixXd::Identity(d, d)).squaredNorm();
  return ridge + C * target_weight *
                     ova_hinge_sum(model, Xt * W.transpose(), yt);
}

// W-step at fixed hyperplanes. With V = W - I the problem
//   min_W 0.5||W - I||_F^2 + C*tw * sum_{t,c} max(0, 1 - s(w_c.(W x_t) + b_c))
// is a standard hinge SVM over vec(V): example (t,c) has feature
// vec(w_c x_t^T), label s, and margin 1 - s(w_c.x_t + b_c), so the dual
// coordinate-descent solver handles it exactly. Never returns an iterate
// worse than W0.
Eigen::MatrixXd w_step(const Eigen::MatrixXd& W0, const svm::LinearModel& model,
                       const Eigen::MatrixXd& Xt, const std::vector<int>& yt,
                       double C, double target_weight) {
  const Eigen::Index d = W0.rows();
  const Eigen::Index n_t = Xt.rows();
  const int n_classes = model.n_classes();
  const Eigen::Index n = n_t * n_classes;

  Eigen::MatrixXd phi(n, d * d);
  std::vector<signed char> y(static_cast<std::size_t>(n));
  Eigen::VectorXd margins(n);
  const Eigen::MatrixXd raw_scores = svm::decision_scores(model, Xt);
  for (Eigen::Index t = 0; t < n_t; ++t)
    for (int c = 0; c < n_classes; ++c) {
      const Eigen::Index i = t * n_classes + c;
      const double s = yt[static_cast<std::size_t>(t)] == c ? 1.0 : -1.0;
      y[static_cast<std::size_t>(i)] = s > 0 ? 1 : -1;
      margins(i) = 1.0 - s * raw_scores(t, c);
      for (Eigen::Index r = 0; r < d; ++r)
        phi.block(i, r * d, 1, d) = model.weights(c, r) * Xt.row(t);
    }
  const Eigen::VectorXd upper =
      Eigen::VectorXd::Constant(n, C * target_weight);
  const svm::BinarySolution sol =
      svm::solve_binary(phi, y, upper, margins, svm::kDefaultTol,
                        svm::kDefaultMaxSweeps, 0x37a75f0053ULL);

  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    W.row(r) += sol.w.segment(r * d, d).transpose();
  // Solver tolerance guard: keep W0 if it is (marginally) better.
  if (w_step_objective(W, model, Xt, yt, C, target_weight) >
      w_step_objective(W0, model, Xt, yt, C, target_weight))
    return W0;
  return W;
}

}  // namespace

Method method_from_string(std::string_view s) {
  for (Method m : all_methods())
    if (to_string(m) == s) return m;
  throw Error("invalid-config", "unknown method '" + std::string(s) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::source_only: return "source_only";
    case Method::target_only: return "target_only";
    case Method::combined: return "combined";
    case Method::daume: return "daume";
    case Method::late_fusion: return "late_fusion";
    case Method::pmt: return "pmt";
    case Method::mmdt: return "mmdt";
    case Method::sa: return "sa";
    case Method::gfk: return "gfk";
  }
  throw Error("invalid-config", "unknown method tag");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::source_only, Method::target_only, Method::combined,
      Method::daume,       Method::late_fusion, Method::pmt,
      Method::mmdt,        Method::sa,          Method::gfk};
  return methods;
}

bool is_unsupervised(Method m) { return m == Method::sa || m == Method::gfk; }

void AdapterSpec::validate() const {
  if (!(hyper.C > 0.0))
    throw Error("invalid-C", "C must be > 0, got " + std::to_string(hyper.C));
  if (method == Method::pmt && hyper.gamma < 0.0)
    throw Error("gamma-negative",
                "gamma must be >= 0, got " + std::to_string(hyper.gamma));
  if (method == Method::late_fusion) {
    if (hyper.alpha_grid.empty())
      throw Error("empty-grid", "late fusion needs a non-empty alpha grid");
    for (double a : hyper.alpha_grid)
      if (!(a >= 0.0 && a <= 1.0))
        throw Error("alpha-out-of-range",
                    "alpha must lie in [0,1], got " + std::to_string(a));
  }
  if ((method == Method::sa || method == Method::gfk) && hyper.subspace_dim < 1)
    throw Error("k-out-of-range", "subspace_dim must be >= 1, got " +
                                      std::to_string(hyper.subspace_dim));
  if (method == Method::mmdt) {
    if (hyper.mmdt_max_iters < 0)
      throw Error("invalid-config", "mmdt_max_iters must be >= 0");
    if (hyper.mmdt_tol < 0.0)
      throw Error("invalid-config", "mmdt_tol must be >= 0");
  }
}

UnlabeledDataset strip_labels(const LabeledDataset& dataset) {
  return UnlabeledDataset{dataset.features, dataset.domain};
}

Eigen::MatrixXd FittedClassifier::transform_target(const Eigen::MatrixXd& X) const {
  if (X.cols() != input_dim)
    throw Error("dimension-mismatch",
                "expected " + std::to_string(input_dim) + " features, got " +
                    std::to_string(X.cols()));
  const Eigen::MatrixXd Xn = prepared(X, hyper);
  switch (method) {
    case Method::source_only:
    case Method::target_only:
    case Method::combined:
    case Method::late_fusion:
    case Method::pmt:
      return Xn;
    case Method::daume:
      return daume_augment(Xn, false);
    case Method::mmdt:
      return Xn * mmdt_transform.transpose();
    case Method::sa:
      return (Xn.rowwise() - target_center.transpose()) * target_projection;
    case Method::gfk:
      return (Xn.rowwise() - embedding_center.transpose()) * embedding;
  }
  throw Error("invalid-config", "unknown method tag");
}

Eigen::MatrixXd FittedClassifier::scores(const Eigen::MatrixXd& X) const {
  return svm::decision_scores(model, transform_target(X));
}

Eigen::MatrixXd FittedClassifier::target_head_scores(const Eigen::MatrixXd& X) const {
  if (!target_model)
    throw Error("invalid-config", "classifier has no target-head model");
  if (X.cols() != input_dim)
    throw Error("dimension-mismatch",
                "expected " + std::to_string(input_dim) + " features, got " +
                    std::to_string(X.cols()));
  return svm::decision_scores(*target_model, prepared(X, hyper));
}

std::vector<int> FittedClassifier::predict(const Eigen::MatrixXd& X) const {
  if (method == Method::late_fusion) {
    const Eigen::MatrixXd fused = fuse_scores(
        scores(X), target_head_scores(X), grid_mean(hyper.alpha_grid));
    return svm::argmax_rows(fused);
  }
  return svm::argmax_rows(scores(X));
}

FittedClassifier fit_source_only(const LabeledDataset& source,
                                 const Hyperparameters& hyper) {
  AdapterSpec{Method::source_only, hyper}.validate();
  require_nonempty(source, "empty-source");
  FittedClassifier f = make_base(Method::source_only, hyper, source.domain, "",
                                 static_cast<int>(source.dim()));
  const Eigen::MatrixXd X = prepared(source.features, hyper);
  f.model = svm::train_ova(X, source.labels, source.n_classes(), hyper.C,
                           unit_weights(X.rows()));
  return f;
}

FittedClassifier fit_target_only(const LabeledDataset& target_labeled,
                                 const Hyperparameters& hyper) {
  AdapterSpec{Method::target_only, hyper}.validate();
  require_nonempty(target_labeled, "empty-target");
  FittedClassifier f =
      make_base(Method::target_only, hyper, "", target_labeled.domain,
                static_cast<int>(target_labeled.dim()));
  const Eigen::MatrixXd X = prepared(target_labeled.features, hyper);
  f.model = svm::train_ova(X, target_labeled.labels,
                           target_labeled.n_classes(), hyper.C,
                           unit_weights(X.rows()));
  return f;
}

FittedClassifier fit_combined(const LabeledDataset& source,
                              const LabeledDataset& target_labeled,
                              const Hyperparameters& hyper) {
  AdapterSpec{Method::combined, hyper}.validate();
  require_nonempty(source, "empty-source");
  require_nonempty(target_labeled, "empty-target");
  require_same_dim(source, target_labeled);
  require_same_classes(source, target_labeled);
  FittedClassifier f =
      make_base(Method::combined, hyper, source.domain, target_labeled.domain,
                static_cast<int>(source.dim()));
  const Pooled p = pool_balanced(prepared(source.features, hyper), source.labels,
                                 prepared(target_labeled.features, hyper),
                                 target_labeled.labels);
  f.model = svm::train_ova(p.X, p.y, source.n_classes(), hyper.C, p.weights);
  return f;
}

Eigen::MatrixXd maybe_normalize(const Eigen::MatrixXd& X,
                                const Hyperparameters& hyper) {
  return prepared(X, hyper);
}

Eigen::MatrixXd daume_augment(const Eigen::MatrixXd& X, bool is_source) {
  const Eigen::Index d = X.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), 3 * d);
  out.leftCols(d) = X;
  if (is_source)
    out.middleCols(d, d) = X;
  else
    out.rightCols(d) = X;
  return out;
}

FittedClassifier fit_daume(const LabeledDataset& source,
                           const LabeledDataset& target_labeled,
                           const Hyperparameters& hyper) {
  AdapterSpec{Method::daume, hyper}.validate();
  require_nonempty(source, "empty-source");
  require_nonempty(target_labeled, "empty-target");
  require_same_dim(source, target_labeled);
  require_same_classes(source, target_labeled);
  FittedClassifier f =
      make_base(Method::daume, hyper, source.domain, target_labeled.domain,
                static_cast<int>(source.dim()));
  const Pooled p = pool_balanced(
      daume_augment(prepared(source.features, hyper), true), source.labels,
      daume_augment(prepared(target_labeled.features, hyper), false),
      target_labeled.labels);
  f.model = svm::train_ova(p.X, p.y, source.n_classes(), hyper.C, p.weights);
  return f;
}

Eigen::MatrixXd fuse_scores(const Eigen::MatrixXd& score_src,
                            const Eigen::MatrixXd& score_tgt, double alpha) {
  if (score_src.rows() != score_tgt.rows() ||
      score_src.cols() != score_tgt.cols())
    throw Error("shape-mismatch", "score matrices differ in shape");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error("alpha-out-of-range",
                "alpha must lie in [0,1], got " + std::to_string(alpha));
  return (1.0 - alpha) * score_src + alpha * score_tgt;
}

FittedClassifier fit_late_fusion(const LabeledDataset& source,
                                 const LabeledDataset& target_labeled,
                                 const Hyperparameters& hyper) {
  AdapterSpec{Method::late_fusion, hyper}.validate();
  require_nonempty(source, "empty-source");
  require_nonempty(target_labeled, "empty-target");
  require_same_dim(source, target_labeled);
  require_same_classes(source, target_labeled);
  FittedClassifier f =
      make_base(Method::late_fusion, hyper, source.domain,
                target_labeled.domain, static_cast<int>(source.dim()));
  const Eigen::MatrixXd Xs = prepared(source.features, hyper);
  const Eigen::MatrixXd Xt = prepared(target_labeled.features, hyper);
  f.model = svm::train_ova(Xs, source.labels, source.n_classes(), hyper.C,
                           unit_weights(Xs.rows()));
  f.target_model =
      svm::train_ova(Xt, target_labeled.labels, target_labeled.n_classes(),
                     hyper.C, unit_weights(Xt.rows()));
  return f;
}

FittedClassifier fit_pmt(const LabeledDataset& source,
                         const LabeledDataset& target_labeled,
                         const Hyperparameters& hyper) {
  AdapterSpec{Method::pmt, hyper}.validate();
  require_nonempty(source, "empty-source");
  require_nonempty(target_labeled, "empty-target");
  require_same_dim(source, target_labeled);
  require_same_classes(source, target_labeled);
  if (hyper.gamma < 0.0)
    throw Error("gamma-negative",
                "gamma must be >= 0, got " + std::to_string(hyper.gamma));
  FittedClassifier f =
      make_base(Method::pmt, hyper, source.domain, target_labeled.domain,
                static_cast<int>(source.dim()));

  const Eigen::MatrixXd Xs = prepared(source.features, hyper);
  const svm::LinearModel source_model = svm::train_ova(
      Xs, source.labels, source.n_classes(), hyper.C, unit_weights(Xs.rows()));

  const Eigen::MatrixXd Xt = prepared(target_labeled.features, hyper);
  const Eigen::MatrixXd Xa = svm::augment_bias(Xt);
  const Eigen::Index n = Xa.rows();
  const Eigen::Index da = Xa.cols();
  const int n_classes = source.n_classes();
  const double gamma = hyper.gamma;
  // With v = w - w_s*gamma/(1+gamma) and u = sqrt(1+gamma)*v, each per-class
  // problem is a standard hinge SVM over scaled features with per-instance
  // margins 1 - y_i*(gamma/(1+gamma))*(w_s.x_i).
  const double shrink = gamma / (1.0 + gamma);
  const double scale = 1.0 / std::sqrt(1.0 + gamma);

  svm::LinearModel model;
  model.weights = Eigen::MatrixXd::Zero(n_classes, da - 1);
  model.bias = Eigen::VectorXd::Zero(n_classes);
  model.C = hyper.C;

  const Eigen::MatrixXd Xa_scaled = Xa * scale;
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(n, hyper.C);
  for (int c = 0; c < n_classes; ++c) {
    std::vector<signed char> yc(static_cast<std::size_t>(n));
    int positives = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pos = target_labeled.labels[static_cast<std::size_t>(i)] == c;
      yc[static_cast<std::size_t>(i)] = pos ? 1 : -1;
      positives += pos ? 1 : 0;
    }
    if (positives == 0) {
      model.bias(c) = -1.0;
      model.meta.degenerate_classes.push_back(c);
      continue;
    }
    Eigen::VectorXd ws(da);
    ws.head(da - 1) = source_model.weights.row(c).transpose();
    ws(da - 1) = source_model.bias(c);
    Eigen::VectorXd margins(n);
    const Eigen::VectorXd prior_scores = Xa * ws;
    for (Eigen::Index i = 0; i < n; ++i)
      margins(i) = 1.0 - static_cast<double>(yc[static_cast<std::size_t>(i)]) *
                             shrink * prior_scores(i);
    const svm::BinarySolution sol = svm::solve_binary(
        Xa_scaled, yc, upper, margins, svm::kDefaultTol, svm::kDefaultMaxSweeps,
        svm::kClassShuffleSeed + static_cast<std::uint64_t>(c));
    const Eigen::VectorXd w_full = sol.w * scale + shrink * ws;
    model.weights.row(c) = w_full.head(da - 1).transpose();
    model.bias(c) = w_full(da - 1);
    model.meta.total_sweeps += sol.sweeps;
    model.meta.max_violation = std::max(model.meta.max_violation, sol.violation);
  }
  f.model = std::move(model);
  return f;
}

FittedClassifier fit_mmdt(const LabeledDataset& source,
                          const LabeledDataset& target_labeled,
                          const Hyperparameters& hyper) {
  AdapterSpec{Method::mmdt, hyper}.validate();
  require_nonempty(source, "empty-source");
  require_nonempty(target_labeled, "empty-target");
  require_same_dim(source, target_labeled);
  require_same_classes(source, target_labeled);
  FittedClassifier f =
      make_base(Method::mmdt, hyper, source.domain, target_labeled.domain,
                static_cast<int>(source.dim()));

  const Eigen::MatrixXd Xs = prepared(source.features, hyper);
  const Eigen::MatrixXd Xt = prepared(target_labeled.features, hyper);
  const std::vector<int>& ys = source.labels;
  const std::vector<int>& yt = target_labeled.labels;
  const Eigen::Index d = Xs.cols();
  const int n_classes = source.n_classes();
  const svm::DomainWeights bal =
      svm::domain_balance_weights(Xs.rows(), Xt.rows());

  const auto theta_step = [&](const Eigen::MatrixXd& W) {
    const Pooled p = pool_balanced(Xs, ys, Xt * W.transpose(), yt);
    return svm::train_ova(p.X, p.y, n_classes, hyper.C, p.weights);
  };

  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(d, d);
  svm::LinearModel model = theta_step(W);
  double objective = mmdt_objective(W, model, Xs, ys, Xt, yt, hyper.C,
                                    bal.source_weight, bal.target_weight);
  f.objective_history.push_back(objective);

  bool converged = hyper.mmdt_max_iters == 0;
  for (int iter = 0; iter < hyper.mmdt_max_iters; ++iter) {
    const Eigen::MatrixXd W_next =
        w_step(W, model, Xt, yt, hyper.C, bal.target_weight);
    svm::LinearModel model_next = theta_step(W_next);
    double obj_next = mmdt_objective(W_next, model_next, Xs, ys, Xt, yt,
                                     hyper.C, bal.source_weight,
                                     bal.target_weight);
    if (obj_next <= objective) {
      model = std::move(model_next);
    } else {
      // Re-training overshot within solver tolerance; the W update alone is
      // guaranteed non-increasing at the old hyperplanes, so keep those.
      obj_next = mmdt_objective(W_next, model, Xs, ys, Xt, yt, hyper.C,
                                bal.source_weight, bal.target_weight);
      f.notes.push_back("mmdt: kept previous hyperplanes at alternation " +
                        std::to_string(iter + 1));
    }
    W = W_next;
    const double decrease = objective - obj_next;
    objective = obj_next;
    f.objective_history.push_back(objective);
    if (decrease < hyper.mmdt_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    f.notes.push_back("mmdt: stopped at max alternations without reaching tol");

  f.mmdt_transform = std::move(W);
  f.model = std::move(model);
  return f;
}

FittedClassifier fit_sa(const LabeledDataset& source,
                        const UnlabeledDataset& target_unlabeled,
                        const Hyperparameters& hyper) {
  AdapterSpec{Method::sa, hyper}.validate();
  require_nonempty(source, "empty-source");
  if (target_unlabeled.features.rows() == 0)
    throw Error("empty-target",
                "dataset '" + target_unlabeled.domain + "' has no examples");
  if (source.dim() != target_unlabeled.features.cols())
    throw Error("dimension-mismatch",
                "feature widths differ: " + std::to_string(source.dim()) +
                    " vs " + std::to_string(target_unlabeled.features.cols()));
  FittedClassifier f =
      make_base(Method::sa, hyper, source.domain, target_unlabeled.domain,
                static_cast<int>(source.dim()));

  const Eigen::MatrixXd Xs = prepared(source.features, hyper);
  const Eigen::MatrixXd Xt = prepared(target_unlabeled.features, hyper);
  const int k_max = std::min(linalg::pca_max_k(Xs), linalg::pca_max_k(Xt));
  const int k = std::min(hyper.subspace_dim, k_max);
  if (k < 1)
    throw Error("k-out-of-range", "no feasible subspace dimension");
  if (k < hyper.subspace_dim)
    f.notes.push_back("sa: reduced subspace dim from " +
                      std::to_string(hyper.subspace_dim) + " to " +
                      std::to_string(k));

  const linalg::Subspace Ps = linalg::pca(Xs, k);
  const linalg::Subspace Pt = linalg::pca(Xt, k);
  const Eigen::MatrixXd M = linalg::align_subspaces(Ps, Pt).M;
  f.model = svm::train_ova(Ps.project(Xs) * M, source.labels,
                           source.n_classes(), hyper.C,
                           unit_weights(Xs.rows()));
  f.target_projection = Pt.basis;
  f.target_center = Pt.mean;
  f.effective_subspace_dim = k;
  return f;
}

FittedClassifier fit_gfk(const LabeledDataset& source,
                         const UnlabeledDataset& target_unlabeled,
                         const Hyperparameters& hyper) {
  AdapterSpec{Method::gfk, hyper}.validate();
  require_nonempty(source, "empty-source");
  if (target_unlabeled.features.rows() == 0)
    throw Error("empty-target",
                "dataset '" + target_unlabeled.domain + "' has no examples");
  if (source.dim() != target_unlabeled.features.cols())
    throw Error("dimension-mismatch",
                "feature widths differ: " + std::to_string(source.dim()) +
                    " vs " + std::to_string(target_unlabeled.features.cols()));
  FittedClassifier f =
      make_base(Method::gfk, hyper, source.domain, target_unlabeled.domain,
                static_cast<int>(source.dim()));

  const Eigen::MatrixXd Xs = prepared(source.features, hyper);
  const Eigen::MatrixXd Xt = prepared(target_unlabeled.features, hyper);
  const Eigen::Index d = Xs.cols();
  const int k_max =
      std::min({linalg::pca_max_k(Xs), linalg::pca_max_k(Xt),
                static_cast<int>(d / 2)});
  const int k = std::min(hyper.subspace_dim, k_max);
  if (k < 1)
    throw Error("k-out-of-range", "no feasible subspace dimension");
  if (k < hyper.subspace_dim)
    f.notes.push_back("gfk: reduced subspace dim from " +
                      std::to_string(hyper.subspace_dim) + " to " +
                      std::to_string(k));

  const linalg::Subspace Ps = linalg::pca(Xs, k);
  const linalg::Subspace Pt = linalg::pca(Xt, k);
  const linalg::GfkKernel kernel = linalg::gfk_kernel(Ps, Pt);
  f.embedding = linalg::psd_sqrt(kernel.G);
  const Eigen::Index n_s = Xs.rows();
  const Eigen::Index n_t = Xt.rows();
  f.embedding_center = (Xs.colwise().sum() + Xt.colwise().sum()).transpose() /
                       static_cast<double>(n_s + n_t);
  const Eigen::MatrixXd mapped =
      (Xs.rowwise() - f.embedding_center.transpose()) * f.embedding;
  f.model = svm::train_ova(mapped, source.labels, source.n_classes(), hyper.C,
                           unit_weights(n_s));
  f.effective_subspace_dim = k;
  return f;
}

double pmt_objective(const FittedClassifier& fitted,
                     const svm::LinearModel& source_model,
                     const LabeledDataset& target_labeled, int class_id) {
  const Eigen::MatrixXd Xa =
      svm::augment_bias(prepared(target_labeled.features, fitted.hyper));
  const Eigen::Index da = Xa.cols();
  Eigen::VectorXd w(da);
  w.head(da - 1) = fitted.model.weights.row(class_id).transpose();
  w(da - 1) = fitted.model.bias(class_id);
  Eigen::VectorXd ws(da);
  ws.head(da - 1) = source_model.weights.row(class_id).transpose();
  ws(da - 1) = source_model.bias(class_id);

  double hinges = 0.0;
  const Eigen::VectorXd scores = Xa * w;
  for (Eigen::Index i = 0; i < Xa.rows(); ++i) {
    const double s =
        target_labeled.labels[static_cast<std::size_t>(i)] == class_id ? 1.0
                                                                       : -1.0;
    hinges += std::max(0.0, 1.0 - s * scores(i));
  }
  return 0.5 * w.squaredNorm() +
         0.5 * fitted.hyper.gamma * (w - ws).squaredNorm() +
         fitted.hyper.C * hinges;
}

double mmdt_objective(const Eigen::MatrixXd& W, const svm::LinearModel& model,
                      const Eigen::MatrixXd& Xs, const std::vector<int>& ys,
                      const Eigen::MatrixXd& Xt, const std::vector<int>& yt,
                      double C, double source_weight, double target_weight) {
  const Eigen::Index d = W.rows();
  double obj = 0.5 * (W - Eigen::MatrixXd::Identity(d, d)).squaredNorm();
  // Bias rides along as a regularized coordinate, matching the trainer.
  obj += 0.5 * (model.weights.squaredNorm() + model.bias.squaredNorm());
  obj += C * source_weight * ova_hinge_sum(model, Xs, ys);
  obj += C * target_weight * ova_hinge_sum(model, Xt * W.transpose(), yt);
  return obj;
}

}  // namespace dabench::adapters
