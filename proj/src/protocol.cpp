#include "dabench/protocol.hpp"

#include "dabench/error.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace dabench::protocol {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform draw in [0, n). Masked rejection keeps the stream independent of
// the standard library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t mask = std::bit_ceil(n) - 1;
  std::uint64_t v;
  do {
    v = rng() & mask;
  } while (v >= n);
  return v;
}

int effective_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double accuracy_percent(const std::vector<int>& predicted,
                        const std::vector<int>& truth) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    correct += predicted[i] == truth[i] ? 1 : 0;
  return 100.0 * static_cast<double>(correct) /
         static_cast<double>(truth.size());
}

adapters::FittedClassifier fit_cell(const adapters::AdapterSpec& method,
                                    const LabeledDataset& source,
                                    const LabeledDataset& train,
                                    const LabeledDataset& test) {
  using adapters::Method;
  switch (method.method) {
    case Method::source_only:
      return adapters::fit_source_only(source, method.hyper);
    case Method::target_only:
      return adapters::fit_target_only(train, method.hyper);
    case Method::combined:
      return adapters::fit_combined(source, train, method.hyper);
    case Method::daume:
      return adapters::fit_daume(source, train, method.hyper);
    case Method::late_fusion:
      return adapters::fit_late_fusion(source, train, method.hyper);
    case Method::pmt:
      return adapters::fit_pmt(source, train, method.hyper);
    case Method::mmdt:
      return adapters::fit_mmdt(source, train, method.hyper);
    case Method::sa:
      return adapters::fit_sa(source, adapters::strip_labels(test),
                              method.hyper);
    case Method::gfk:
      return adapters::fit_gfk(source, adapters::strip_labels(test),
                               method.hyper);
  }
  throw Error("invalid-config", "unknown method tag");
}

}  // namespace

void SplitSpec::validate() const {
  if (n_splits < 1 || train_per_class < 1 || test_per_class < 1)
    throw Error("invalid-config",
                "split counts must all be >= 1: n_splits=" +
                    std::to_string(n_splits) + ", train_per_class=" +
                    std::to_string(train_per_class) + ", test_per_class=" +
                    std::to_string(test_per_class));
}

void ExperimentConfig::validate() const {
  splits.validate();
  if (methods.empty())
    throw Error("invalid-config", "no methods requested");
  for (const auto& m : methods) m.validate();
  if (source_domain == target_domain)
    throw Error("invalid-config",
                "source and target domains must differ, both are '" +
                    source_domain + "'");
}

Aggregate aggregate_accuracies(const std::vector<double>& values) {
  Aggregate a;
  const std::size_t n = values.size();
  if (n == 0) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(n);
  if (n < 2) return a;
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  const double sample_var = ss / static_cast<double>(n - 1);
  a.standard_error = std::sqrt(sample_var / static_cast<double>(n));
  return a;
}

LabeledDataset take_rows(const LabeledDataset& ds,
                         const std::vector<Eigen::Index>& rows) {
  LabeledDataset out;
  out.domain = ds.domain;
  out.layer = ds.layer;
  out.class_names = ds.class_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::Index r = rows[i];
    if (r < 0 || r >= ds.n())
      throw Error("dimension-mismatch",
                  "row index " + std::to_string(r) + " out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(r);
    out.labels.push_back(ds.labels[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::vector<Split> generate_splits(const LabeledDataset& target,
                                   const SplitSpec& spec) {
  spec.validate();
  const int n_classes = target.n_classes();
  std::vector<std::vector<Eigen::Index>> by_class(
      static_cast<std::size_t>(n_classes));
  for (Eigen::Index i = 0; i < target.n(); ++i)
    by_class[static_cast<std::size_t>(target.labels[static_cast<std::size_t>(i)])]
        .push_back(i);

  const std::size_t needed =
      static_cast<std::size_t>(spec.train_per_class + spec.test_per_class);
  for (int c = 0; c < n_classes; ++c)
    if (by_class[static_cast<std::size_t>(c)].size() < needed)
      throw Error("insufficient-class-count",
                  "class '" + target.class_names[static_cast<std::size_t>(c)] +
                      "' has " +
                      std::to_string(by_class[static_cast<std::size_t>(c)].size()) +
                      " examples, needs " + std::to_string(needed));

  std::vector<Split> splits;
  splits.reserve(static_cast<std::size_t>(spec.n_splits));
  for (int s = 0; s < spec.n_splits; ++s) {
    Split split;
    split.split_id = s;
    for (int c = 0; c < n_classes; ++c) {
      std::uint64_t h = splitmix64(spec.seed);
      h = splitmix64(h ^ (static_cast<std::uint64_t>(s) + 1));
      h = splitmix64(h ^ (static_cast<std::uint64_t>(c) + 1));
      std::mt19937_64 rng(h);
      std::vector<Eigen::Index> pool = by_class[static_cast<std::size_t>(c)];
      // Partial Fisher-Yates: only the first train+test positions are needed.
      for (std::size_t j = 0; j < needed; ++j) {
        const std::size_t pick =
            j + static_cast<std::size_t>(bounded(rng, pool.size() - j));
        std::swap(pool[j], pool[pick]);
      }
      for (int j = 0; j < spec.train_per_class; ++j)
        split.train_indices.push_back(pool[static_cast<std::size_t>(j)]);
      for (int j = 0; j < spec.test_per_class; ++j)
        split.test_indices.push_back(
            pool[static_cast<std::size_t>(spec.train_per_class + j)]);
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

std::vector<double> late_fusion_alpha_accuracies(
    const adapters::FittedClassifier& fitted, const LabeledDataset& test) {
  const Eigen::MatrixXd src = fitted.scores(test.features);
  const Eigen::MatrixXd tgt = fitted.target_head_scores(test.features);
  std::vector<double> out;
  out.reserve(fitted.hyper.alpha_grid.size());
  for (double alpha : fitted.hyper.alpha_grid) {
    const std::vector<int> pred =
        svm::argmax_rows(adapters::fuse_scores(src, tgt, alpha));
    out.push_back(accuracy_percent(pred, test.labels));
  }
  return out;
}

double run_split(const ExperimentConfig& config, const Split& split,
                 const adapters::AdapterSpec& method,
                 const LabeledDataset& source, const LabeledDataset& target) {
  (void)config;
  const LabeledDataset train = take_rows(target, split.train_indices);
  const LabeledDataset test = take_rows(target, split.test_indices);
  const adapters::FittedClassifier fitted =
      fit_cell(method, source, train, test);
  if (method.method == adapters::Method::late_fusion) {
    const std::vector<double> per_alpha =
        late_fusion_alpha_accuracies(fitted, test);
    double sum = 0.0;
    for (double a : per_alpha) sum += a;
    return sum / static_cast<double>(per_alpha.size());
  }
  return accuracy_percent(fitted.predict(test.features), test.labels);
}

ResultTable run_experiment(const ExperimentConfig& config,
                           const LabeledDataset& source,
                           const LabeledDataset& target) {
  config.validate();
  const std::vector<Split> splits = generate_splits(target, config.splits);
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_cells = n_methods * splits.size();

  std::vector<double> cell_accuracy(n_cells, 0.0);
  std::vector<std::exception_ptr> cell_error(n_cells);
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= n_cells) return;
      const std::size_t m = cell / splits.size();
      const std::size_t s = cell % splits.size();
      try {
        cell_accuracy[cell] =
            run_split(config, splits[s], config.methods[m], source, target);
      } catch (...) {
        cell_error[cell] = std::current_exception();
      }
    }
  };

  const int jobs = std::min<int>(effective_jobs(config.jobs),
                                 static_cast<int>(n_cells));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs > 1 ? jobs : 0));
  if (jobs <= 1) {
    worker();
  } else {
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    if (!cell_error[cell]) continue;
    const std::size_t m = cell / splits.size();
    const std::size_t s = cell % splits.size();
    const std::string where =
        "cell method=" +
        std::string(adapters::to_string(config.methods[m].method)) +
        " split=" + std::to_string(s) + ": ";
    try {
      std::rethrow_exception(cell_error[cell]);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    } catch (const std::exception& e) {
      throw Error("internal", where + e.what());
    }
  }

  ResultTable table;
  table.source_domain = config.source_domain;
  table.target_domain = config.target_domain;
  table.layer = std::string(data::to_string(config.layer));
  table.splits = config.splits;
  for (std::size_t m = 0; m < n_methods; ++m) {
    ResultRow row;
    row.method = std::string(adapters::to_string(config.methods[m].method));
    row.layer = table.layer;
    row.per_split.assign(cell_accuracy.begin() +
                             static_cast<std::ptrdiff_t>(m * splits.size()),
                         cell_accuracy.begin() +
                             static_cast<std::ptrdiff_t>((m + 1) * splits.size()));
    const Aggregate agg = aggregate_accuracies(row.per_split);
    row.mean = agg.mean;
    row.standard_error = agg.standard_error;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<SweepPoint> sweep_alpha(const LabeledDataset& source,
                                    const LabeledDataset& target,
                                    const SplitSpec& splits,
                                    const adapters::Hyperparameters& hyper,
                                    const std::vector<double>& grid) {
  if (grid.empty()) throw Error("empty-grid", "alpha grid is empty");
  for (double a : grid)
    if (!(a >= 0.0 && a <= 1.0))
      throw Error("alpha-out-of-range",
                  "alpha must lie in [0,1], got " + std::to_string(a));

  const std::vector<Split> split_list = generate_splits(target, splits);
  adapters::Hyperparameters h = hyper;
  h.alpha_grid = grid;

  std::vector<std::vector<double>> per_alpha_per_split(
      grid.size(), std::vector<double>(split_list.size(), 0.0));
  for (std::size_t s = 0; s < split_list.size(); ++s) {
    const LabeledDataset train = take_rows(target, split_list[s].train_indices);
    const LabeledDataset test = take_rows(target, split_list[s].test_indices);
    const adapters::FittedClassifier fitted =
        adapters::fit_late_fusion(source, train, h);
    const std::vector<double> accs = late_fusion_alpha_accuracies(fitted, test);
    for (std::size_t g = 0; g < grid.size(); ++g)
      per_alpha_per_split[g][s] = accs[g];
  }

  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepPoint p;
    p.method = "late_fusion";
    p.x = grid[g];
    p.per_split = per_alpha_per_split[g];
    const Aggregate agg = aggregate_accuracies(p.per_split);
    p.mean = agg.mean;
    p.standard_error = agg.standard_error;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SweepPoint> sweep_subspace_dim(const LabeledDataset& source,
                                           const LabeledDataset& target,
                                           const SplitSpec& splits,
                                           const adapters::Hyperparameters& hyper,
                                           const std::vector<int>& dims) {
  if (dims.empty()) throw Error("empty-grid", "subspace dim grid is empty");
  const std::vector<Split> split_list = generate_splits(target, splits);

  // Largest k every split supports, so no cell silently trains at a reduced
  // dimension: source bound once, target bound per test pool.
  const Eigen::MatrixXd Xs = adapters::maybe_normalize(source.features, hyper);
  int k_max = linalg::pca_max_k(Xs);
  for (const Split& split : split_list) {
    const LabeledDataset test = take_rows(target, split.test_indices);
    k_max = std::min(k_max, linalg::pca_max_k(adapters::maybe_normalize(
                                test.features, hyper)));
  }
  const int k_max_gfk =
      std::min(k_max, static_cast<int>(source.dim() / 2));

  std::vector<SweepPoint> out;
  bool any_ok = false;
  for (adapters::Method method : {adapters::Method::sa, adapters::Method::gfk}) {
    const int limit = method == adapters::Method::gfk ? k_max_gfk : k_max;
    for (int k : dims) {
      SweepPoint p;
      p.method = std::string(adapters::to_string(method));
      p.x = static_cast<double>(k);
      if (k < 1 || k > limit) {
        p.status = "skipped: k=" + std::to_string(k) + " infeasible (max " +
                   std::to_string(limit) + ")";
        out.push_back(std::move(p));
        continue;
      }
      adapters::Hyperparameters h = hyper;
      h.subspace_dim = k;
      p.per_split.resize(split_list.size(), 0.0);
      for (std::size_t s = 0; s < split_list.size(); ++s) {
        const LabeledDataset test =
            take_rows(target, split_list[s].test_indices);
        const adapters::UnlabeledDataset pool = adapters::strip_labels(test);
        const adapters::FittedClassifier fitted =
            method == adapters::Method::sa ? adapters::fit_sa(source, pool, h)
                                           : adapters::fit_gfk(source, pool, h);
        p.per_split[s] =
            accuracy_percent(fitted.predict(test.features), test.labels);
      }
      const Aggregate agg = aggregate_accuracies(p.per_split);
      p.mean = agg.mean;
      p.standard_error = agg.standard_error;
      any_ok = true;
      out.push_back(std::move(p));
    }
  }
  if (!any_ok)
    throw Error("all-dims-infeasible",
                "no requested subspace dimension is feasible");
  return out;
}

}  // namespace dabench::protocol
