#pragma once

#include "dabench/dataset.hpp"
#include "dabench/error.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testutil {

// Kind slug of the dabench::Error a callable throws; sentinel otherwise.
template <typename F>
std::string thrown_kind(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const dabench::Error& e) {
    return e.kind();
  } catch (...) {
    return "<other-exception>";
  }
  return "<no-throw>";
}

inline dabench::data::LabeledDataset make_dataset(
    Eigen::MatrixXd features, std::vector<int> labels, int n_classes,
    std::string domain) {
  dabench::data::LabeledDataset ds;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  ds.domain = std::move(domain);
  for (int c = 0; c < n_classes; ++c)
    ds.class_names.push_back("class" + std::to_string(c));
  return ds;
}

// Unique temp directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("dabench-test-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace testutil
