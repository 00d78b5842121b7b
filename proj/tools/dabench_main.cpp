#include "dabench/cli.hpp"
#include "dabench/error.hpp"
#include "dabench/reports.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

void add_common_flags(CLI::App* cmd, dabench::cli::RunRequest& req,
                      std::string& alpha_csv) {
  cmd->add_option("--manifest", req.manifest_path, "Dataset manifest JSON");
  cmd->add_option("--synth", req.synth_config_path,
                  "Synthetic shifted-pair config JSON");
  cmd->add_flag("--synth-default", req.synth_defaults,
                "Synthesize the default shifted pair in memory");
  cmd->add_option("--source", req.source, "Source domain name")
      ->capture_default_str();
  cmd->add_option("--target", req.target, "Target domain name")
      ->capture_default_str();
  cmd->add_option("--layer", req.layer, "Feature layer tag")
      ->capture_default_str();
  cmd->add_option("--seed", req.splits.seed, "Split-sampling seed")
      ->capture_default_str();
  cmd->add_option("--splits", req.splits.n_splits, "Number of random splits")
      ->capture_default_str();
  cmd->add_option("--train-per-class", req.splits.train_per_class,
                  "Labeled target examples per class")
      ->capture_default_str();
  cmd->add_option("--test-per-class", req.splits.test_per_class,
                  "Test examples per class")
      ->capture_default_str();
  cmd->add_option("--jobs", req.jobs,
                  "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  cmd->add_option("--out", req.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--C", req.hyper.C, "SVM C")->capture_default_str();
  cmd->add_option("--gamma", req.hyper.gamma, "Transfer strength for pmt")
      ->capture_default_str();
  cmd->add_option("--alpha-grid", alpha_csv,
                  "Comma-separated late-fusion alphas in [0,1]");
  cmd->add_option("--k", req.hyper.subspace_dim, "Subspace dimension for sa/gfk")
      ->capture_default_str();
  cmd->add_option("--mmdt-iters", req.hyper.mmdt_max_iters,
                  "MMDT alternations")
      ->capture_default_str();
  cmd->add_option("--mmdt-tol", req.hyper.mmdt_tol,
                  "MMDT convergence threshold")
      ->capture_default_str();
  cmd->add_flag("--normalize", req.hyper.normalize_features,
                "l2-normalize each example first");
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t pos = csv.find(',', start);
    const std::string item =
        csv.substr(start, pos == std::string::npos ? pos : pos - start);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  for (const std::string& item : split_csv(csv)) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (const std::string& item : split_csv(csv)) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain adaptation benchmark on precomputed feature vectors"};
  app.require_subcommand(1);

  std::string synth_config;
  std::string synth_out = ".";
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic shifted domain pair with ground truth");
  synth->add_option("--config", synth_config, "Config JSON (default when omitted)");
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();

  dabench::cli::RunRequest run_req;
  std::string run_alpha_csv;
  std::string run_methods_csv;
  CLI::App* run = app.add_subcommand("run", "Run the benchmark table");
  add_common_flags(run, run_req, run_alpha_csv);
  run->add_option("--methods", run_methods_csv,
                  "Comma-separated method subset (default: all)");

  dabench::cli::RunRequest sweep_req;
  std::string sweep_alpha_csv;
  std::string sweep_kind = "alpha";
  std::string dims_csv = "2,4,8,16,32";
  CLI::App* sweep = app.add_subcommand("sweep", "Hyperparameter sweeps");
  add_common_flags(sweep, sweep_req, sweep_alpha_csv);
  sweep->add_option("--type", sweep_kind, "alpha or subspace")
      ->capture_default_str();
  sweep->add_option("--dims", dims_csv, "Comma-separated subspace dims")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const dabench::cli::SynthOutputs outputs =
          dabench::cli::cmd_synth(synth_config, synth_out);
      std::printf("wrote %s\n", outputs.manifest.string().c_str());
      std::printf("oracle accuracy: source %.4f, target %.4f\n",
                  outputs.oracle_accuracy_source,
                  outputs.oracle_accuracy_target);
    } else if (run->parsed()) {
      if (!run_alpha_csv.empty())
        run_req.hyper.alpha_grid = parse_doubles(run_alpha_csv);
      if (!run_methods_csv.empty()) run_req.methods = split_csv(run_methods_csv);
      const dabench::protocol::ResultTable table = dabench::cli::cmd_run(run_req);
      for (const auto& row : table.rows)
        std::printf("%-12s %s \xc2\xb1 %s\n", row.method.c_str(),
                    dabench::cli::format_percent_2dp(row.mean).c_str(),
                    dabench::cli::format_percent_2dp(row.standard_error).c_str());
      std::printf("wrote %s\n",
                  (run_req.out_dir / "results.csv").string().c_str());
    } else if (sweep->parsed()) {
      if (!sweep_alpha_csv.empty())
        sweep_req.hyper.alpha_grid = parse_doubles(sweep_alpha_csv);
      dabench::cli::SweepKind kind;
      if (sweep_kind == "alpha")
        kind = dabench::cli::SweepKind::alpha;
      else if (sweep_kind == "subspace")
        kind = dabench::cli::SweepKind::subspace;
      else
        throw dabench::Error("invalid-config",
                             "--type must be alpha or subspace, got '" +
                                 sweep_kind + "'");
      const std::vector<dabench::protocol::SweepPoint> points =
          dabench::cli::cmd_sweep(sweep_req, kind,
                                  sweep_req.hyper.alpha_grid,
                                  parse_ints(dims_csv));
      std::printf("wrote %s (%zu rows)\n",
                  (sweep_req.out_dir / "sweep.csv").string().c_str(),
                  points.size());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
