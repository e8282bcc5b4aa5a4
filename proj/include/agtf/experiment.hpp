#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agtf/dataset.hpp"
#include "agtf/solver.hpp"

namespace agtf {

struct ExperimentConfig {
  std::optional<std::string> manifest;  // dataset manifest path
  std::optional<SynthSpec> synth;       // or generate on the fly
  double anchor_rate = 0.4;             // m = max(K, round(anchor_rate * n))
  Eigen::Index neighbor_k = 5;
  AnchorMethod anchor_method = AnchorMethod::kKMeans;
  SolverConfig solver;
  int trials = 1;                       // repeated runs with seed, seed+1, ...
  std::string out_dir = "out";

  void validate(Eigen::Index n) const;
};

struct ExperimentResult {
  std::optional<double> acc, nmi, purity;
  int iterations = 0;
  bool converged = false;
  double runtime_seconds = 0;   // full pipeline
  double solver_seconds = 0;    // solver loop only
  Eigen::Index anchors = 0;
  std::vector<int> sample_labels;
  std::vector<int> anchor_labels;
  std::vector<TraceRecord> trace;
};

/// Full pipeline on an in-memory dataset: standardize, select anchors, build
/// per-view graphs, assemble the tensor, solve, label, score.
ExperimentResult run_pipeline(const Dataset& dataset, const ExperimentConfig& config,
                              std::uint64_t seed);

/// Pipeline plus artifact emission: metrics.json, labels.csv,
/// anchors_labels.csv and trace.csv under config.out_dir. With trials > 1
/// the primary artifacts come from the first seed and metrics.json gains a
/// per-trial summary.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepAxis {
  std::string name;  // one of anchor_rate, p, lambda1, lambda2
  std::vector<double> values;
};

struct SweepPoint {
  double anchor_rate, p, lambda1, lambda2;
  std::string status;  // "ok" or the error category
  ExperimentResult result;
};

/// Cartesian product of the axes; one pipeline run per grid point, results
/// aggregated into sweep.csv under config.out_dir. Failures are recorded per
/// point, not propagated.
std::vector<SweepPoint> sweep(const ExperimentConfig& config,
                              const std::vector<SweepAxis>& axes);

/// Anchor count rule shared by the pipeline and validation.
Eigen::Index anchor_count(Eigen::Index n, double anchor_rate, int K);

void write_metrics_json(const std::filesystem::path& path, const ExperimentConfig& config,
                        const ExperimentResult& result,
                        const std::vector<ExperimentResult>& trials);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);

}  // namespace agtf
