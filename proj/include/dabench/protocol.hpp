#pragma once

#include "dabench/adapters.hpp"
#include "dabench/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dabench::protocol {

using dabench::data::LabeledDataset;

struct SplitSpec {
  int n_splits = 20;
  int train_per_class = 1;
  int test_per_class = 10;
  std::uint64_t seed = 0;

  void validate() const;  // counts all >= 1
};

// Row indices into the target dataset. Test sets are balanced: exactly
// test_per_class rows of every class, disjoint from the train rows.
struct Split {
  std::vector<Eigen::Index> train_indices;
  std::vector<Eigen::Index> test_indices;
  int split_id = 0;
};

struct ExperimentConfig {
  std::string source_domain;
  std::string target_domain;
  data::Layer layer = data::Layer::other;
  std::vector<adapters::AdapterSpec> methods;
  SplitSpec splits;
  int jobs = 0;  // worker threads; 0 means hardware concurrency

  void validate() const;  // methods non-empty, domains distinct
};

struct ResultRow {
  std::string method;
  std::string layer;
  std::vector<double> per_split;  // accuracy %, indexed by split_id
  double mean = 0.0;
  double standard_error = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;  // in requested method order
  std::string source_domain;
  std::string target_domain;
  std::string layer;
  SplitSpec splits;
};

// One grid point of a hyperparameter sweep; status is "ok" or a skip reason.
struct SweepPoint {
  std::string method;
  double x = 0.0;
  std::vector<double> per_split;
  double mean = 0.0;
  double standard_error = 0.0;
  std::string status = "ok";
};

struct Aggregate {
  double mean = 0.0;
  double standard_error = 0.0;  // sample std (n-1) / sqrt(n); 0 when n < 2
};
Aggregate aggregate_accuracies(const std::vector<double>& values);

// Copies the selected rows (and their labels) into a new dataset.
LabeledDataset take_rows(const LabeledDataset& ds,
                         const std::vector<Eigen::Index>& rows);

// Per-split, per-class sampling without replacement: train_per_class train
// rows then test_per_class test rows, each (split, class) cell drawing from
// its own seeded stream, so any prefix of splits is stable under n_splits
// changes. Throws insufficient-class-count naming the deficient class.
std::vector<Split> generate_splits(const LabeledDataset& target,
                                   const SplitSpec& spec);

// Accuracy % of one (method, split) cell. Supervised methods train on
// (source, target[train]); unsupervised ones on (source, label-stripped
// target[test]). Late fusion reports the mean accuracy over its alpha grid.
double run_split(const ExperimentConfig& config, const Split& split,
                 const adapters::AdapterSpec& method,
                 const LabeledDataset& source, const LabeledDataset& target);

// Per-alpha accuracies of a fitted late-fusion classifier on a test set, one
// per grid entry.
std::vector<double> late_fusion_alpha_accuracies(
    const adapters::FittedClassifier& fitted, const LabeledDataset& test);

// Runs every (method, split) cell, fanning out over a worker pool, and
// aggregates. Deterministic for a fixed seed regardless of jobs. Any cell
// failure aborts with the cell named; the lowest (method, split) failure wins.
ResultTable run_experiment(const ExperimentConfig& config,
                           const LabeledDataset& source,
                           const LabeledDataset& target);

// Late-fusion accuracy curve over alpha, reusing the per-split endpoint
// models across grid points.
std::vector<SweepPoint> sweep_alpha(const LabeledDataset& source,
                                    const LabeledDataset& target,
                                    const SplitSpec& splits,
                                    const adapters::Hyperparameters& hyper,
                                    const std::vector<double>& grid);

// SA and GFK accuracy curves over subspace dimension. Dims no split can
// support are marked skipped, not errors; all dims skipped is an error.
std::vector<SweepPoint> sweep_subspace_dim(const LabeledDataset& source,
                                           const LabeledDataset& target,
                                           const SplitSpec& splits,
                                           const adapters::Hyperparameters& hyper,
                                           const std::vector<int>& dims);

}  // namespace dabench::protocol
