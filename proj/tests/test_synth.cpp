#include "dabench/synth.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace dabench;
using testutil::thrown_kind;

namespace {

data::SyntheticShiftConfig small_config() {
  data::SyntheticShiftConfig cfg;
  cfg.n_classes = 3;
  cfg.dim = 8;
  cfg.n_source_per_class = 15;
  cfg.n_target_per_class = 12;
  cfg.rotation_angle = 0.9;
  cfg.translation_norm = 1.5;
  cfg.noise_sigma = 0.7;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("generation is deterministic in the config") {
  const data::SyntheticShiftConfig cfg = small_config();
  const data::ShiftedPair a = data::generate_shifted_pair(cfg);
  const data::ShiftedPair b = data::generate_shifted_pair(cfg);
  CHECK(a.source.features == b.source.features);
  CHECK(a.target.features == b.target.features);
  CHECK(a.source.labels == b.source.labels);
  CHECK(a.oracle.shift_matrix == b.oracle.shift_matrix);
  CHECK(a.oracle.source_means == b.oracle.source_means);

  data::SyntheticShiftConfig other = cfg;
  other.seed = 43;
  CHECK(data::generate_shifted_pair(other).source.features !=
        a.source.features);
}

TEST_CASE("generated pair has the declared shape and bookkeeping") {
  const data::SyntheticShiftConfig cfg = small_config();
  const data::ShiftedPair pair = data::generate_shifted_pair(cfg);

  CHECK(pair.source.n() == 45);
  CHECK(pair.target.n() == 36);
  CHECK(pair.source.dim() == 8);
  CHECK(pair.source.n_classes() == 3);
  CHECK(pair.source.domain == "source");
  CHECK(pair.target.domain == "target");
  for (int c = 0; c < 3; ++c) {
    int n_src = 0;
    int n_tgt = 0;
    for (int l : pair.source.labels) n_src += l == c;
    for (int l : pair.target.labels) n_tgt += l == c;
    CHECK(n_src == 15);
    CHECK(n_tgt == 12);
  }
  pair.source.validate();
  pair.target.validate();
}

TEST_CASE("oracle records the exact shift that produced the target") {
  const data::SyntheticShiftConfig cfg = small_config();
  const data::ShiftOracle& o = data::generate_shifted_pair(cfg).oracle;
  const Eigen::MatrixXd& A = o.shift_matrix;

  CHECK((A.transpose() * A - Eigen::MatrixXd::Identity(8, 8))
            .cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(o.shift_offset.norm() - cfg.translation_norm) <= 1e-12);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(o.source_means.row(c).norm() - cfg.class_mean_scale) <=
          1e-12);
    const Eigen::VectorXd mapped =
        A * o.source_means.row(c).transpose() + o.shift_offset;
    CHECK((o.target_means.row(c).transpose() - mapped).cwiseAbs().maxCoeff() <=
          1e-12);
  }
  CHECK(o.noise_sigma == cfg.noise_sigma);
}

TEST_CASE("zero-shift config leaves both domains identically distributed") {
  data::SyntheticShiftConfig cfg = small_config();
  cfg.rotation_angle = 0.0;
  cfg.translation_norm = 0.0;
  const data::ShiftOracle& o = data::generate_shifted_pair(cfg).oracle;
  CHECK(o.shift_matrix.isIdentity(1e-12));
  CHECK(o.shift_offset.isZero(0.0));
  CHECK(o.target_means == o.source_means);
}

TEST_CASE("sample class means converge to the oracle means") {
  data::SyntheticShiftConfig cfg = small_config();
  cfg.n_source_per_class = 2000;
  cfg.n_target_per_class = 2000;
  cfg.noise_sigma = 1.0;
  const data::ShiftedPair pair = data::generate_shifted_pair(cfg);

  for (int c = 0; c < 3; ++c) {
    Eigen::RowVectorXd mean_s = Eigen::RowVectorXd::Zero(8);
    Eigen::RowVectorXd mean_t = Eigen::RowVectorXd::Zero(8);
    for (Eigen::Index i = 0; i < pair.source.n(); ++i)
      if (pair.source.labels[static_cast<std::size_t>(i)] == c)
        mean_s += pair.source.features.row(i);
    for (Eigen::Index i = 0; i < pair.target.n(); ++i)
      if (pair.target.labels[static_cast<std::size_t>(i)] == c)
        mean_t += pair.target.features.row(i);
    mean_s /= 2000.0;
    mean_t /= 2000.0;
    // sigma sqrt(d/n) is about 0.06 here; 0.2 leaves seed headroom.
    CHECK((mean_s - pair.oracle.source_means.row(c)).norm() <= 0.2);
    CHECK((mean_t - pair.oracle.target_means.row(c)).norm() <= 0.2);
  }
}

TEST_CASE("oracle accuracy is near one at low noise and degrades cross-domain") {
  data::SyntheticShiftConfig cfg = small_config();
  cfg.noise_sigma = 0.3;
  cfg.class_mean_scale = 4.0;
  // A shift on the order of the mean sphere radius, so nearest-unshifted-mean
  // actually misassigns target rows; the small_config shift is too gentle.
  cfg.rotation_angle = 2.5;
  cfg.translation_norm = 6.0;
  const data::ShiftedPair pair = data::generate_shifted_pair(cfg);

  const double in_source =
      data::oracle_accuracy(pair.oracle, pair.source, data::DomainSide::source);
  const double in_target =
      data::oracle_accuracy(pair.oracle, pair.target, data::DomainSide::target);
  CHECK(in_source >= 0.99);
  CHECK(in_target >= 0.99);

  // Scoring target rows against the unshifted means must do worse.
  const double mismatched =
      data::oracle_accuracy(pair.oracle, pair.target, data::DomainSide::source);
  CHECK(mismatched < in_target);
}

TEST_CASE("config and oracle round-trip through their files") {
  const testutil::TempDir tmp("synth");
  const data::SyntheticShiftConfig cfg = small_config();
  cfg.save(tmp.path() / "config.json");
  const data::SyntheticShiftConfig back =
      data::SyntheticShiftConfig::load(tmp.path() / "config.json");
  CHECK(back.n_classes == cfg.n_classes);
  CHECK(back.dim == cfg.dim);
  CHECK(back.n_source_per_class == cfg.n_source_per_class);
  CHECK(back.n_target_per_class == cfg.n_target_per_class);
  CHECK(back.class_mean_scale == cfg.class_mean_scale);
  CHECK(back.rotation_angle == cfg.rotation_angle);
  CHECK(back.translation_norm == cfg.translation_norm);
  CHECK(back.noise_sigma == cfg.noise_sigma);
  CHECK(back.seed == cfg.seed);

  const data::ShiftOracle oracle = data::generate_shifted_pair(cfg).oracle;
  oracle.save(tmp.path() / "oracle.json");
  const data::ShiftOracle o2 = data::ShiftOracle::load(tmp.path() / "oracle.json");
  CHECK(o2.source_means == oracle.source_means);
  CHECK(o2.target_means == oracle.target_means);
  CHECK(o2.shift_matrix == oracle.shift_matrix);
  CHECK(o2.shift_offset == oracle.shift_offset);
  CHECK(o2.noise_sigma == oracle.noise_sigma);
}

TEST_CASE("config validation rejects degenerate settings") {
  const auto invalid = [](auto mutate) {
    data::SyntheticShiftConfig cfg;
    mutate(cfg);
    return thrown_kind([&] { cfg.validate(); });
  };
  CHECK(invalid([](auto& c) { c.n_classes = 1; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.dim = 1; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.n_source_per_class = 0; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.n_target_per_class = 0; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.noise_sigma = 0.0; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.rotation_angle = -0.1; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.rotation_angle = 3.5; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.translation_norm = -1.0; }) == "invalid-config");
  CHECK(invalid([](auto& c) { c.class_mean_scale = -1.0; }) == "invalid-config");
}
