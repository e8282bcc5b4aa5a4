// Command-line front end: synth, run and sweep subcommands around the
// anchor-graph tensor factorization pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "agtf/errors.hpp"
#include "agtf/experiment.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CliOptions {
  agtf::ExperimentConfig config;
  std::string anchor_method = "kmeans";
  std::string manifest;
  bool use_synth = false;
  agtf::SynthSpec synth;
  std::vector<double> sweep_anchor_rate, sweep_p, sweep_lambda1, sweep_lambda2;
};

/// JSON config file with flat keys mirroring the experiment config; values
/// become CLI defaults, so explicitly passed flags override them.
void apply_json_config(const std::string& path, CliOptions& opts) {
  std::ifstream in(path);
  if (!in) throw agtf::ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw agtf::ConfigError(path + ": " + e.what());
  }
  agtf::ExperimentConfig& config = opts.config;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "manifest") opts.manifest = value.get<std::string>();
      else if (key == "anchor_rate") config.anchor_rate = value.get<double>();
      else if (key == "neighbor_k") config.neighbor_k = value.get<Eigen::Index>();
      else if (key == "anchor_method") opts.anchor_method = value.get<std::string>();
      else if (key == "k") config.solver.K = value.get<int>();
      else if (key == "lambda1") config.solver.lambda1 = value.get<double>();
      else if (key == "lambda2") config.solver.lambda2 = value.get<double>();
      else if (key == "p") config.solver.p = value.get<double>();
      else if (key == "mu0") config.solver.mu0 = value.get<double>();
      else if (key == "rho0") config.solver.rho0 = value.get<double>();
      else if (key == "sigma0") config.solver.sigma0 = value.get<double>();
      else if (key == "eta") config.solver.eta = value.get<double>();
      else if (key == "penalty_cap") config.solver.penalty_cap = value.get<double>();
      else if (key == "epsilon") config.solver.epsilon = value.get<double>();
      else if (key == "max_iter") config.solver.max_iter = value.get<int>();
      else if (key == "rotate_prox") config.solver.rotate_prox = value.get<bool>();
      else if (key == "rotate_prox_anchor")
        config.solver.rotate_prox_anchor = value.get<bool>();
      else if (key == "seed") config.solver.seed = value.get<std::uint64_t>();
      else if (key == "trials") config.trials = value.get<int>();
      else if (key == "out") config.out_dir = value.get<std::string>();
      else if (key == "synth") {
        opts.use_synth = true;
        opts.synth.n = value.value("n", opts.synth.n);
        if (value.contains("view_dims"))
          opts.synth.view_dims = value.at("view_dims").get<std::vector<Eigen::Index>>();
        opts.synth.cluster_std = value.value("cluster_std", opts.synth.cluster_std);
      } else {
        throw agtf::ConfigError(path + ": unknown config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw agtf::ConfigError(path + ": key '" + key + "': " + e.what());
    }
  }
}

void add_common_options(CLI::App* cmd, CliOptions& opts, std::string& config_path) {
  cmd->add_option("--config", config_path,
                  "JSON config file (already applied as defaults; flags override)");
  cmd->add_option("--manifest", opts.manifest, "dataset manifest (json)");
  cmd->add_flag("--synth", opts.use_synth, "generate a synthetic dataset instead");
  cmd->add_option("--synth-n", opts.synth.n, "synthetic sample count");
  cmd->add_option("--synth-dims", opts.synth.view_dims, "synthetic per-view feature dims");
  cmd->add_option("--synth-std", opts.synth.cluster_std, "synthetic cluster noise std");
  cmd->add_option("--k", opts.config.solver.K, "number of clusters");
  cmd->add_option("--anchor-rate", opts.config.anchor_rate, "anchors = max(K, rate*n)");
  cmd->add_option("--neighbor-k", opts.config.neighbor_k, "anchor-graph neighbor count");
  cmd->add_option("--anchor-method", opts.anchor_method, "kmeans | uniform_random");
  cmd->add_option("--p", opts.config.solver.p, "Schatten exponent in (0,1]");
  cmd->add_option("--lambda1", opts.config.solver.lambda1, "sample-indicator penalty");
  cmd->add_option("--lambda2", opts.config.solver.lambda2, "anchor-indicator penalty");
  cmd->add_option("--epsilon", opts.config.solver.epsilon, "residual stop tolerance");
  cmd->add_option("--max-iter", opts.config.solver.max_iter, "iteration cap");
  cmd->add_option("--eta", opts.config.solver.eta, "penalty growth factor");
  cmd->add_option("--rotate-prox", opts.config.solver.rotate_prox,
                  "sample-indicator prox in the cluster-mode-third orientation (0|1)");
  cmd->add_option("--rotate-prox-anchor", opts.config.solver.rotate_prox_anchor,
                  "anchor-indicator prox in the rotated orientation too (0|1)");
  cmd->add_option("--seed", opts.config.solver.seed, "random seed");
  cmd->add_option("--trials", opts.config.trials, "repeated runs with seed, seed+1, ...");
  cmd->add_option("--out", opts.config.out_dir, "output directory");
}

void finalize_config(CliOptions& opts) {
  if (opts.anchor_method == "kmeans") {
    opts.config.anchor_method = agtf::AnchorMethod::kKMeans;
  } else if (opts.anchor_method == "uniform_random") {
    opts.config.anchor_method = agtf::AnchorMethod::kUniformRandom;
  } else {
    throw agtf::ConfigError("unknown anchor method '" + opts.anchor_method +
                            "' (kmeans | uniform_random)");
  }
  if (!opts.manifest.empty()) opts.config.manifest = opts.manifest;
  if (opts.use_synth) {
    opts.synth.K = opts.config.solver.K;
    opts.synth.seed = opts.config.solver.seed;
    opts.config.synth = opts.synth;
  }
  if (opts.config.manifest && opts.config.synth)
    throw agtf::ConfigError("--manifest and --synth are mutually exclusive");
}

int run_synth(const CliOptions& opts) {
  agtf::SynthSpec spec = opts.synth;
  spec.K = opts.config.solver.K;
  spec.seed = opts.config.solver.seed;
  agtf::synth_dataset(spec, opts.config.out_dir);
  std::cout << "wrote synthetic dataset to " << opts.config.out_dir << "/manifest.json\n";
  return kExitOk;
}

int run_run(const CliOptions& opts) {
  const agtf::ExperimentResult result = agtf::run_experiment(opts.config);
  std::cout << "iterations=" << result.iterations
            << " converged=" << (result.converged ? "true" : "false");
  if (result.acc)
    std::cout << " acc=" << *result.acc << " nmi=" << *result.nmi
              << " purity=" << *result.purity;
  std::cout << " runtime_seconds=" << result.runtime_seconds << '\n';
  std::cout << "artifacts under " << opts.config.out_dir << '\n';
  return kExitOk;
}

int run_sweep(const CliOptions& opts) {
  std::vector<agtf::SweepAxis> axes;
  if (!opts.sweep_anchor_rate.empty()) axes.push_back({"anchor_rate", opts.sweep_anchor_rate});
  if (!opts.sweep_p.empty()) axes.push_back({"p", opts.sweep_p});
  if (!opts.sweep_lambda1.empty()) axes.push_back({"lambda1", opts.sweep_lambda1});
  if (!opts.sweep_lambda2.empty()) axes.push_back({"lambda2", opts.sweep_lambda2});
  const auto points = agtf::sweep(opts.config, axes);
  int failed = 0;
  for (const auto& pt : points)
    if (pt.status != "ok") ++failed;
  std::cout << points.size() << " grid points (" << failed << " failed), sweep.csv under "
            << opts.config.out_dir << '\n';
  return kExitOk;
}

/// --config is honored before CLI11 parses, so file values act as defaults.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpretable multi-view clustering via anchor-graph tensor factorization"};
  app.require_subcommand(1);
  CliOptions opts;
  std::string config_path;

  try {
    const std::string pre = prescan_config_path(argc, argv);
    if (!pre.empty()) apply_json_config(pre, opts);

    CLI::App* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic multi-view dataset + manifest");
    CLI::App* run_cmd = app.add_subcommand("run", "run the clustering pipeline");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid sweep over hyperparameters");
    add_common_options(synth_cmd, opts, config_path);
    add_common_options(run_cmd, opts, config_path);
    add_common_options(sweep_cmd, opts, config_path);
    sweep_cmd->add_option("--sweep-anchor-rate", opts.sweep_anchor_rate,
                          "anchor_rate grid values");
    sweep_cmd->add_option("--sweep-p", opts.sweep_p, "p grid values");
    sweep_cmd->add_option("--sweep-lambda1", opts.sweep_lambda1, "lambda1 grid values");
    sweep_cmd->add_option("--sweep-lambda2", opts.sweep_lambda2, "lambda2 grid values");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? kExitOk : kExitConfig;
    }

    finalize_config(opts);
    if (synth_cmd->parsed()) return run_synth(opts);
    if (run_cmd->parsed()) return run_run(opts);
    return run_sweep(opts);
  } catch (const agtf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const agtf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const agtf::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
