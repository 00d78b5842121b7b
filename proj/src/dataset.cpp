#include "dabench/dataset.hpp"

#include "dabench/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace dabench::data {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

using nlohmann::json;

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("malformed-row", "bad numeric field '" + std::string(s) +
                                     "' in " + context);
  return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

Layer layer_from_string(std::string_view s) {
  if (s == "decaf6") return Layer::decaf6;
  if (s == "decaf7") return Layer::decaf7;
  if (s == "decaf8") return Layer::decaf8;
  if (s == "other") return Layer::other;
  throw Error("invalid-config", "unknown layer tag '" + std::string(s) + "'");
}

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::decaf6: return "decaf6";
    case Layer::decaf7: return "decaf7";
    case Layer::decaf8: return "decaf8";
    case Layer::other: return "other";
  }
  return "other";
}

void LabeledDataset::validate() const {
  if (dim() < 1) throw Error("dimension-mismatch", "feature dimension must be >= 1");
  if (n_classes() < 2) throw Error("invalid-config", "need at least 2 classes");
  if (static_cast<Eigen::Index>(labels.size()) != n())
    throw Error("malformed-row", "label count " + std::to_string(labels.size()) +
                                     " != row count " + std::to_string(n()));
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0 || labels[i] >= n_classes())
      throw Error("unknown-label", "label id " + std::to_string(labels[i]) +
                                       " out of range at row " + std::to_string(i));
  if (n() > 0 && !features.allFinite())
    throw Error("malformed-row", "non-finite feature value in domain '" + domain + "'");
}

void DatasetManifest::validate() const {
  if (feature_dim < 1) throw Error("invalid-config", "feature_dim must be >= 1");
  if (class_names.empty()) throw Error("invalid-config", "class_names is empty");
  for (size_t i = 0; i < class_names.size(); ++i)
    for (size_t j = i + 1; j < class_names.size(); ++j)
      if (class_names[i] == class_names[j])
        throw Error("invalid-config", "duplicate class name '" + class_names[i] + "'");
  for (size_t i = 0; i < domains.size(); ++i)
    for (size_t j = i + 1; j < domains.size(); ++j)
      if (domains[i].name == domains[j].name)
        throw Error("invalid-config", "duplicate domain name '" + domains[i].name + "'");
}

const DomainEntry& DatasetManifest::find_domain(const std::string& name) const {
  for (const auto& d : domains)
    if (d.name == name) return d;
  throw Error("missing-domain", "domain '" + name + "' not in manifest");
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("io-failure", "cannot open manifest " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid-config", "manifest parse error: " + std::string(e.what()));
  }
  DatasetManifest m;
  try {
    m.feature_dim = j.at("feature_dim").get<int>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& d : j.at("domains")) {
      DomainEntry e;
      e.name = d.at("name").get<std::string>();
      e.path = d.at("path").get<std::string>();
      e.per_class_hint = d.value("per_class_hint", 0);
      m.domains.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error("invalid-config", "manifest schema error: " + std::string(e.what()));
  }
  m.base_dir = file.parent_path();
  m.validate();
  return m;
}

void DatasetManifest::save(const std::filesystem::path& file) const {
  validate();
  json j;
  j["feature_dim"] = feature_dim;
  j["class_names"] = class_names;
  j["domains"] = json::array();
  for (const auto& d : domains)
    j["domains"].push_back({{"name", d.name},
                            {"path", d.path},
                            {"per_class_hint", d.per_class_hint}});
  std::ofstream out(file);
  if (!out) throw Error("io-failure", "cannot write manifest " + file.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error("io-failure", "short write to " + file.string());
}

LabeledDataset load_dataset(const DatasetManifest& manifest,
                            const std::string& domain_name, Layer layer) {
  manifest.validate();
  const DomainEntry& entry = manifest.find_domain(domain_name);

  std::filesystem::path path(entry.path);
  if (path.is_relative() && !manifest.base_dir.empty())
    path = manifest.base_dir / path;

  std::ifstream in(path);
  if (!in) throw Error("io-failure", "cannot open feature file " + path.string());

  const int d = manifest.feature_dim;
  std::unordered_map<std::string, int> label_ids;
  for (size_t i = 0; i < manifest.class_names.size(); ++i)
    label_ids.emplace(manifest.class_names[i], static_cast<int>(i));

  std::string line;
  if (!std::getline(in, line))
    throw Error("malformed-row", "missing header line in " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    auto fields = split_csv_line(line);
    if (fields.size() < 2 || fields[0] != "id" || fields[1] != "label")
      throw Error("malformed-row", "bad header in " + path.string());
    if (static_cast<int>(fields.size()) - 2 != d)
      throw Error("dimension-mismatch",
                  "header has " + std::to_string(fields.size() - 2) +
                      " feature columns, manifest says " + std::to_string(d));
  }

  std::vector<double> values;
  std::vector<int> labels;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != d + 2)
      throw Error("dimension-mismatch",
                  "row " + std::to_string(row) + " has " +
                      std::to_string(fields.size() - 2) + " feature columns, expected " +
                      std::to_string(d));
    auto it = label_ids.find(std::string(fields[1]));
    if (it == label_ids.end())
      throw Error("unknown-label", "label '" + std::string(fields[1]) +
                                       "' at row " + std::to_string(row) +
                                       " not in class_names");
    labels.push_back(it->second);
    for (int c = 0; c < d; ++c)
      values.push_back(parse_double(fields[c + 2],
                                    "row " + std::to_string(row) + " of " + path.string()));
    ++row;
  }

  LabeledDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(row), d);
  for (size_t i = 0; i < row; ++i)
    for (int c = 0; c < d; ++c)
      ds.features(static_cast<Eigen::Index>(i), c) = values[i * d + c];
  ds.labels = std::move(labels);
  ds.domain = domain_name;
  ds.layer = layer;
  ds.class_names = manifest.class_names;
  ds.validate();
  return ds;
}

void write_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
  dataset.validate();
  std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
  if (!out) throw Error("io-failure", "cannot write " + path.string());

  out << "id,label";
  for (Eigen::Index c = 0; c < dataset.dim(); ++c) out << ",f" << c;
  out << "\n";
  for (Eigen::Index i = 0; i < dataset.n(); ++i) {
    out << i << ',' << dataset.class_names[dataset.labels[i]];
    for (Eigen::Index c = 0; c < dataset.dim(); ++c)
      out << ',' << format_double(dataset.features(i, c));
    out << "\n";
  }
  if (!out) throw Error("io-failure", "short write to " + path.string());
}

}  // namespace dabench::data
