#include "dabench/cli.hpp"

#include "dabench/error.hpp"
#include "dabench/reports.hpp"
#include "dabench/synth.hpp"

#include <filesystem>
#include <system_error>
#include <utility>

namespace dabench::cli {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error("io-failure",
                "cannot create output directory '" + dir.string() + "': " +
                    ec.message());
}

}  // namespace

void RunRequest::validate() const {
  const bool has_manifest = !manifest_path.empty();
  const bool has_synth = !synth_config_path.empty() || synth_defaults;
  if (has_manifest == has_synth)
    throw Error("invalid-config",
                "exactly one of a manifest and a synthetic config is required");
  if (source == target)
    throw Error("invalid-config",
                "source and target domains must differ, both are '" + source +
                    "'");
  data::layer_from_string(layer);  // throws on an unknown tag
  splits.validate();
  for (const std::string& name : methods)
    adapters::method_from_string(name);  // throws on an unknown method
}

LoadedPair load_inputs(const RunRequest& request) {
  request.validate();
  const data::Layer layer = data::layer_from_string(request.layer);
  if (!request.manifest_path.empty()) {
    const data::DatasetManifest manifest =
        data::DatasetManifest::load(request.manifest_path);
    LoadedPair pair{data::load_dataset(manifest, request.source, layer),
                    data::load_dataset(manifest, request.target, layer)};
    return pair;
  }
  data::SyntheticShiftConfig config;
  if (!request.synth_config_path.empty())
    config = data::SyntheticShiftConfig::load(request.synth_config_path);
  data::ShiftedPair generated = data::generate_shifted_pair(config);
  for (data::LabeledDataset* ds : {&generated.source, &generated.target})
    ds->layer = layer;
  if (request.source != generated.source.domain ||
      request.target != generated.target.domain)
    throw Error("missing-domain",
                "synthetic pairs define domains 'source' and 'target', got '" +
                    request.source + "' and '" + request.target + "'");
  return LoadedPair{std::move(generated.source), std::move(generated.target)};
}

SynthOutputs cmd_synth(const std::string& config_path,
                       const std::filesystem::path& out_dir) {
  data::SyntheticShiftConfig config;
  if (!config_path.empty())
    config = data::SyntheticShiftConfig::load(config_path);
  config.validate();
  ensure_dir(out_dir);

  const data::ShiftedPair pair = data::generate_shifted_pair(config);
  SynthOutputs outputs;
  outputs.source_csv = out_dir / "source.csv";
  outputs.target_csv = out_dir / "target.csv";
  outputs.manifest = out_dir / "manifest.json";
  outputs.oracle = out_dir / "oracle.json";

  data::write_dataset(pair.source, outputs.source_csv);
  data::write_dataset(pair.target, outputs.target_csv);

  data::DatasetManifest manifest;
  manifest.feature_dim = config.dim;
  manifest.class_names = pair.source.class_names;
  manifest.domains = {
      {"source", "source.csv", config.n_source_per_class},
      {"target", "target.csv", config.n_target_per_class},
  };
  manifest.save(outputs.manifest);
  pair.oracle.save(outputs.oracle);

  outputs.oracle_accuracy_source =
      data::oracle_accuracy(pair.oracle, pair.source, data::DomainSide::source);
  outputs.oracle_accuracy_target =
      data::oracle_accuracy(pair.oracle, pair.target, data::DomainSide::target);
  return outputs;
}

protocol::ResultTable cmd_run(const RunRequest& request) {
  const LoadedPair pair = load_inputs(request);
  ensure_dir(request.out_dir);

  protocol::ExperimentConfig config;
  config.source_domain = request.source;
  config.target_domain = request.target;
  config.layer = data::layer_from_string(request.layer);
  config.splits = request.splits;
  config.jobs = request.jobs;
  if (request.methods.empty()) {
    for (adapters::Method m : adapters::all_methods())
      config.methods.push_back({m, request.hyper});
  } else {
    for (const std::string& name : request.methods)
      config.methods.push_back(
          {adapters::method_from_string(name), request.hyper});
  }

  const protocol::ResultTable table =
      protocol::run_experiment(config, pair.source, pair.target);
  write_results_csv(table, request.out_dir / "results.csv");
  write_per_split_csv(table, request.out_dir / "per-split.csv");
  write_results_markdown(table, request.out_dir / "results.md");
  return table;
}

std::vector<protocol::SweepPoint> cmd_sweep(const RunRequest& request,
                                            SweepKind kind,
                                            const std::vector<double>& alpha_grid,
                                            const std::vector<int>& dims) {
  const LoadedPair pair = load_inputs(request);
  ensure_dir(request.out_dir);

  std::vector<protocol::SweepPoint> points;
  if (kind == SweepKind::alpha)
    points = protocol::sweep_alpha(pair.source, pair.target, request.splits,
                                   request.hyper, alpha_grid);
  else
    points = protocol::sweep_subspace_dim(pair.source, pair.target,
                                          request.splits, request.hyper, dims);
  write_sweep_csv(points, request.out_dir / "sweep.csv");
  return points;
}

}  // namespace dabench::cli
