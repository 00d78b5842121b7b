#include "dabench/synth.hpp"

#include "dabench/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <random>

namespace dabench::data {

namespace {

using nlohmann::json;

Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = gauss(rng);
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.size();
  const auto cols = rows == 0 ? 0 : j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

}  // namespace

void SyntheticShiftConfig::validate() const {
  if (n_classes < 2) throw Error("invalid-config", "n_classes must be >= 2");
  if (dim < 2) throw Error("invalid-config", "dim must be >= 2 for a 2-plane rotation");
  if (n_source_per_class < 1 || n_target_per_class < 1)
    throw Error("invalid-config", "per-class counts must be >= 1");
  if (!(noise_sigma > 0)) throw Error("invalid-config", "noise_sigma must be > 0");
  if (rotation_angle < 0 || rotation_angle > M_PI)
    throw Error("invalid-config", "rotation_angle must be in [0, pi]");
  if (class_mean_scale < 0) throw Error("invalid-config", "class_mean_scale must be >= 0");
  if (translation_norm < 0) throw Error("invalid-config", "translation_norm must be >= 0");
}

SyntheticShiftConfig SyntheticShiftConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("io-failure", "cannot open config " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid-config", "config parse error: " + std::string(e.what()));
  }
  SyntheticShiftConfig c;
  c.n_classes = j.value("n_classes", c.n_classes);
  c.dim = j.value("dim", c.dim);
  c.n_source_per_class = j.value("n_source_per_class", c.n_source_per_class);
  c.n_target_per_class = j.value("n_target_per_class", c.n_target_per_class);
  c.class_mean_scale = j.value("class_mean_scale", c.class_mean_scale);
  c.rotation_angle = j.value("rotation_angle", c.rotation_angle);
  c.translation_norm = j.value("translation_norm", c.translation_norm);
  c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

void SyntheticShiftConfig::save(const std::filesystem::path& file) const {
  validate();
  json j{{"n_classes", n_classes},
         {"dim", dim},
         {"n_source_per_class", n_source_per_class},
         {"n_target_per_class", n_target_per_class},
         {"class_mean_scale", class_mean_scale},
         {"rotation_angle", rotation_angle},
         {"translation_norm", translation_norm},
         {"noise_sigma", noise_sigma},
         {"seed", seed}};
  std::ofstream out(file);
  if (!out) throw Error("io-failure", "cannot write config " + file.string());
  out << j.dump(2) << "\n";
}

ShiftOracle ShiftOracle::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("io-failure", "cannot open oracle file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid-config", "oracle parse error: " + std::string(e.what()));
  }
  ShiftOracle o;
  o.source_means = matrix_from_json(j.at("source_means"));
  o.target_means = matrix_from_json(j.at("target_means"));
  o.shift_matrix = matrix_from_json(j.at("shift_matrix"));
  Eigen::MatrixXd b = matrix_from_json(j.at("shift_offset"));
  o.shift_offset = b.reshaped();
  o.noise_sigma = j.at("noise_sigma").get<double>();
  return o;
}

void ShiftOracle::save(const std::filesystem::path& file) const {
  json j;
  j["source_means"] = matrix_to_json(source_means);
  j["target_means"] = matrix_to_json(target_means);
  j["shift_matrix"] = matrix_to_json(shift_matrix);
  j["shift_offset"] = matrix_to_json(shift_offset.transpose());
  j["noise_sigma"] = noise_sigma;
  std::ofstream out(file);
  if (!out) throw Error("io-failure", "cannot write oracle file " + file.string());
  out << j.dump(2) << "\n";
}

ShiftedPair generate_shifted_pair(const SyntheticShiftConfig& config) {
  config.validate();
  const int K = config.n_classes;
  const int d = config.dim;

  // Single stream, fixed draw order: class means, rotation plane, offset
  // direction, source points (class-major), target points (class-major).
  std::mt19937_64 rng(config.seed);

  Eigen::MatrixXd means(K, d);
  for (int c = 0; c < K; ++c) {
    Eigen::VectorXd v = gaussian_vector(rng, d);
    double norm = v.norm();
    if (norm == 0) norm = 1;  // measure-zero, but keep it total
    means.row(c) = (config.class_mean_scale / norm) * v.transpose();
  }

  // Rotation in the 2-plane spanned by orthonormal u, v:
  //   A = I + (cos a - 1)(u u^T + v v^T) + sin a (v u^T - u v^T).
  Eigen::VectorXd u = gaussian_vector(rng, d).normalized();
  Eigen::VectorXd w = gaussian_vector(rng, d);
  w -= u.dot(w) * u;
  Eigen::VectorXd v = w.normalized();
  const double ca = std::cos(config.rotation_angle);
  const double sa = std::sin(config.rotation_angle);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d);
  A += (ca - 1.0) * (u * u.transpose() + v * v.transpose());
  A += sa * (v * u.transpose() - u * v.transpose());

  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  {
    Eigen::VectorXd dir = gaussian_vector(rng, d).normalized();
    b = config.translation_norm * dir;
  }

  ShiftOracle oracle;
  oracle.source_means = means;
  oracle.target_means =
      (means * A.transpose()).rowwise() + b.transpose();
  oracle.shift_matrix = A;
  oracle.shift_offset = b;
  oracle.noise_sigma = config.noise_sigma;

  std::vector<std::string> class_names(K);
  for (int c = 0; c < K; ++c) class_names[c] = "class" + std::to_string(c);

  auto draw_source_point = [&](int c) {
    return Eigen::VectorXd(means.row(c).transpose() +
                           config.noise_sigma * gaussian_vector(rng, d));
  };

  LabeledDataset source;
  source.features.resize(K * config.n_source_per_class, d);
  source.domain = "source";
  source.class_names = class_names;
  for (int c = 0; c < K; ++c)
    for (int i = 0; i < config.n_source_per_class; ++i) {
      source.features.row(c * config.n_source_per_class + i) =
          draw_source_point(c).transpose();
      source.labels.push_back(c);
    }

  // Target points are fresh source-distribution draws pushed through the
  // shift map. A is orthogonal, so per-class covariance stays sigma^2 I and
  // the no-shift configuration yields identically distributed domains.
  LabeledDataset target;
  target.features.resize(K * config.n_target_per_class, d);
  target.domain = "target";
  target.class_names = class_names;
  for (int c = 0; c < K; ++c)
    for (int i = 0; i < config.n_target_per_class; ++i) {
      Eigen::VectorXd x = draw_source_point(c);
      target.features.row(c * config.n_target_per_class + i) =
          (A * x + b).transpose();
      target.labels.push_back(c);
    }

  source.validate();
  target.validate();
  return ShiftedPair{std::move(source), std::move(target), std::move(oracle)};
}

double oracle_accuracy(const ShiftOracle& oracle, const LabeledDataset& dataset,
                       DomainSide side) {
  const Eigen::MatrixXd& means =
      side == DomainSide::source ? oracle.source_means : oracle.target_means;
  if (dataset.dim() != means.cols())
    throw Error("dimension-mismatch",
                "dataset dim " + std::to_string(dataset.dim()) +
                    " != oracle dim " + std::to_string(means.cols()));
  if (dataset.n() == 0) return 0.0;

  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < dataset.n(); ++i) {
    int best = 0;
    double best_d2 = (dataset.features.row(i) - means.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < means.rows(); ++c) {
      double d2 = (dataset.features.row(i) - means.row(c)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = static_cast<int>(c);
      }
    }
    if (best == dataset.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.n());
}

}  // namespace dabench::data
