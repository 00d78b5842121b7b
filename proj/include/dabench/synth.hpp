#pragma once

#include "dabench/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>

namespace dabench::data {

// Desk-scale stand-in for a real domain shift. Class means sit on a sphere of
// radius class_mean_scale; the target domain is the source distribution pushed
// through x -> A x + b where A rotates by rotation_angle in one seed-chosen
// 2-plane (identity elsewhere) and ||b|| = translation_norm.
struct SyntheticShiftConfig {
  int n_classes = 16;
  int dim = 64;
  int n_source_per_class = 20;
  int n_target_per_class = 20;
  double class_mean_scale = 4.0;
  double rotation_angle = 0.8;  // radians, in [0, pi]
  double translation_norm = 2.0;
  double noise_sigma = 1.0;
  std::uint64_t seed = 7;

  void validate() const;
  static SyntheticShiftConfig load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;
};

enum class DomainSide { source, target };

// Ground truth behind a generated pair: the exact class means of both domains
// and the shift map itself. target_means.row(c) == A * source_means.row(c) + b.
struct ShiftOracle {
  Eigen::MatrixXd source_means;  // K x d
  Eigen::MatrixXd target_means;  // K x d
  Eigen::MatrixXd shift_matrix;  // A, d x d
  Eigen::VectorXd shift_offset;  // b
  double noise_sigma = 0.0;

  static ShiftOracle load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;
};

struct ShiftedPair {
  LabeledDataset source;
  LabeledDataset target;
  ShiftOracle oracle;
};

// Deterministic for a fixed config (single mt19937_64 stream, documented draw
// order). Source points are N(mu_c, sigma^2 I); each target point is
// A x + b with x a fresh draw from the same class distribution, so the
// no-shift configuration leaves source and target identically distributed.
ShiftedPair generate_shifted_pair(const SyntheticShiftConfig& config);

// Fraction of rows whose nearest true class mean (Euclidean, for the stated
// domain) matches the row label. The brute-force reference every adapter
// fixture is calibrated against.
double oracle_accuracy(const ShiftOracle& oracle, const LabeledDataset& dataset,
                       DomainSide side);

}  // namespace dabench::data
