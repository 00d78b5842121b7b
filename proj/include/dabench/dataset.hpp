#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dabench::data {

// Feature-layer tag. Activations are opaque vectors to this toolkit; the tag
// only travels through bookkeeping and reports.
enum class Layer { decaf6, decaf7, decaf8, other };

Layer layer_from_string(std::string_view s);
std::string_view to_string(Layer layer);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Feature matrix plus class labels and domain bookkeeping. Rows are examples.
// Immutable by convention after construction; safe to share across threads.
struct LabeledDataset {
  Eigen::MatrixXd features;              // n x d
  std::vector<int> labels;               // size n, values in [0, K)
  std::string domain;
  Layer layer = Layer::other;
  std::vector<std::string> class_names;  // size K

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  int n_classes() const { return static_cast<int>(class_names.size()); }

  // Throws Error on any invariant violation: non-finite features, label out
  // of range, label count != row count, K < 2, d < 1.
  void validate() const;
};

struct DomainEntry {
  std::string name;
  std::string path;        // resolved against base_dir when relative
  int per_class_hint = 0;  // advisory example count per class, 0 = unknown
};

// JSON manifest: {feature_dim, class_names: [...], domains: [{name, path,
// per_class_hint}]}. Labels in feature files are strings; class_names order
// defines the contiguous label ids used everywhere else.
struct DatasetManifest {
  int feature_dim = 0;
  std::vector<std::string> class_names;
  std::vector<DomainEntry> domains;
  std::filesystem::path base_dir;  // directory of the manifest file, set by load()

  void validate() const;
  const DomainEntry& find_domain(const std::string& name) const;

  static DatasetManifest load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;
};

// Reads one domain's feature CSV (header `id,label,f0,...,f{d-1}`) into a
// dataset. Row order is preserved. Throws Error with kinds: missing-domain,
// io-failure, dimension-mismatch, unknown-label, malformed-row.
LabeledDataset load_dataset(const DatasetManifest& manifest,
                            const std::string& domain_name, Layer layer);

// Inverse of load_dataset: decimal CSV, UTF-8, LF line endings. Floats are
// written in shortest round-trip form so load(write(ds)) == ds exactly.
void write_dataset(const LabeledDataset& dataset,
                   const std::filesystem::path& path);

}  // namespace dabench::data
