#pragma once

#include "dabench/adapters.hpp"
#include "dabench/dataset.hpp"
#include "dabench/protocol.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dabench::cli {

// One experiment request, fed either by a dataset manifest or by a synthetic
// shifted-pair config (exactly one of the two).
struct RunRequest {
  std::string manifest_path;
  std::string synth_config_path;
  bool synth_defaults = false;  // synthesize with the default config
  std::string source = "source";
  std::string target = "target";
  std::string layer = "other";
  std::vector<std::string> methods;  // empty means all nine
  adapters::Hyperparameters hyper;
  protocol::SplitSpec splits;
  int jobs = 0;
  std::filesystem::path out_dir = ".";

  void validate() const;
};

struct LoadedPair {
  data::LabeledDataset source;
  data::LabeledDataset target;
};
LoadedPair load_inputs(const RunRequest& request);

struct SynthOutputs {
  std::filesystem::path source_csv;
  std::filesystem::path target_csv;
  std::filesystem::path manifest;
  std::filesystem::path oracle;
  double oracle_accuracy_source = 0.0;
  double oracle_accuracy_target = 0.0;
};

// Writes source/target CSVs, the manifest, and the oracle into out_dir.
// Empty config_path means the default config.
SynthOutputs cmd_synth(const std::string& config_path,
                       const std::filesystem::path& out_dir);

// Runs the full experiment and writes results.csv, per-split.csv, results.md
// into request.out_dir.
protocol::ResultTable cmd_run(const RunRequest& request);

enum class SweepKind { alpha, subspace };

// Runs the requested sweep and writes sweep.csv into request.out_dir. The
// alpha sweep uses alpha_grid; the subspace sweep uses dims.
std::vector<protocol::SweepPoint> cmd_sweep(const RunRequest& request,
                                            SweepKind kind,
                                            const std::vector<double>& alpha_grid,
                                            const std::vector<int>& dims);

}  // namespace dabench::cli
