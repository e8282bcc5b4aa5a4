#include "agtf/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "agtf/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace agtf {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

Eigen::Index anchor_count(Eigen::Index n, double anchor_rate, int K) {
  const auto m = static_cast<Eigen::Index>(std::llround(anchor_rate * static_cast<double>(n)));
  return std::max<Eigen::Index>(K, m);
}

void ExperimentConfig::validate(Eigen::Index n) const {
  if (!(anchor_rate > 0) || anchor_rate > 1)
    throw ConfigError("ExperimentConfig: anchor_rate must lie in (0, 1]");
  if (std::llround(anchor_rate * static_cast<double>(n)) < solver.K)
    throw ConfigError("ExperimentConfig: anchor_rate * n must be >= K");
  if (neighbor_k < 1) throw ConfigError("ExperimentConfig: neighbor_k must be >= 1");
  if (trials < 1) throw ConfigError("ExperimentConfig: trials must be >= 1");
  solver.validate();
}

ExperimentResult run_pipeline(const Dataset& dataset, const ExperimentConfig& config,
                              std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  if (dataset.views.empty()) throw DataError("run_pipeline: dataset has no views");
  const Eigen::Index n = dataset.views.front().data.rows();
  for (const ViewMatrix& v : dataset.views)
    if (v.data.rows() != n) throw DataError("run_pipeline: views disagree on sample count");
  config.validate(n);

  const Eigen::Index m = anchor_count(n, config.anchor_rate, config.solver.K);
  if (m > n) throw ConfigError("run_pipeline: anchor count exceeds sample count");
  const Eigen::Index k = std::min<Eigen::Index>(config.neighbor_k, m - 1);
  if (k < 1) throw ConfigError("run_pipeline: need at least 2 anchors for one neighbor");

  std::vector<AnchorGraph> graphs;
  graphs.reserve(dataset.views.size());
  for (size_t v = 0; v < dataset.views.size(); ++v) {
    ViewMatrix view = dataset.views[v];
    standardize_features(view.data);
    const Matrix anchors =
        select_anchors(view, m, seed * 7919 + v, config.anchor_method);
    graphs.push_back(build_anchor_graph(view, anchors, k));
  }
  const RealTensor3 S = assemble_graph_tensor(graphs);

  SolverConfig solver_config = config.solver;
  solver_config.seed = seed;

  const auto solver_start = std::chrono::steady_clock::now();
  auto [state, labels] = run(S, solver_config);
  const double solver_seconds = seconds_since(solver_start);

  ExperimentResult result;
  result.iterations = labels.iterations;
  result.converged = labels.converged;
  result.anchors = m;
  result.sample_labels = std::move(labels.sample_labels);
  result.anchor_labels = std::move(labels.anchor_labels);
  result.trace = std::move(labels.trace);
  result.solver_seconds = solver_seconds;
  if (dataset.labels) {
    result.acc = acc(*dataset.labels, result.sample_labels);
    result.nmi = nmi(*dataset.labels, result.sample_labels);
    result.purity = purity(*dataset.labels, result.sample_labels);
  }
  result.runtime_seconds = seconds_since(start);
  return result;
}

namespace {

Dataset load_or_synth(const ExperimentConfig& config) {
  if (config.manifest) return load_dataset(*config.manifest);
  if (config.synth) {
    SynthSpec spec = *config.synth;
    spec.K = config.solver.K;
    spec.seed = config.solver.seed;
    return synth_dataset(spec, fs::path(config.out_dir) / "synth");
  }
  throw ConfigError("no dataset: provide a manifest path or a synth spec");
}

json config_json(const ExperimentConfig& config, Eigen::Index m) {
  json j = {{"anchor_rate", config.anchor_rate},
            {"neighbor_k", config.neighbor_k},
            {"anchor_method",
             config.anchor_method == AnchorMethod::kKMeans ? "kmeans" : "uniform_random"},
            {"anchors", m},
            {"k", config.solver.K},
            {"lambda1", config.solver.lambda1},
            {"lambda2", config.solver.lambda2},
            {"p", config.solver.p},
            {"mu0", config.solver.mu0},
            {"rho0", config.solver.rho0},
            {"sigma0", config.solver.sigma0},
            {"eta", config.solver.eta},
            {"penalty_cap", config.solver.penalty_cap},
            {"epsilon", config.solver.epsilon},
            {"max_iter", config.solver.max_iter},
            {"rotate_prox", config.solver.rotate_prox},
            {"rotate_prox_anchor", config.solver.rotate_prox_anchor},
            {"seed", config.solver.seed},
            {"trials", config.trials},
            {"out", config.out_dir}};
  if (config.manifest) j["manifest"] = *config.manifest;
  if (config.synth) {
    j["synth"] = {{"n", config.synth->n},
                  {"view_dims", config.synth->view_dims},
                  {"cluster_std", config.synth->cluster_std}};
  }
  return j;
}

}  // namespace

void write_metrics_json(const fs::path& path, const ExperimentConfig& config,
                        const ExperimentResult& result,
                        const std::vector<ExperimentResult>& trials) {
  json j;
  if (result.acc) {
    j["acc"] = *result.acc;
    j["nmi"] = *result.nmi;
    j["purity"] = *result.purity;
  }
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["runtime_seconds"] = result.runtime_seconds;
  j["solver_seconds"] = result.solver_seconds;
  j["config"] = config_json(config, result.anchors);

  if (trials.size() > 1 && result.acc) {
    std::vector<double> accs, nmis, purities;
    json per_trial = json::array();
    for (const ExperimentResult& t : trials) {
      accs.push_back(*t.acc);
      nmis.push_back(*t.nmi);
      purities.push_back(*t.purity);
      per_trial.push_back({{"acc", *t.acc},
                           {"nmi", *t.nmi},
                           {"purity", *t.purity},
                           {"iterations", t.iterations},
                           {"converged", t.converged}});
    }
    j["trials"] = {{"count", trials.size()},
                   {"acc_mean", mean_of(accs)},   {"acc_std", std_of(accs)},
                   {"nmi_mean", mean_of(nmis)},   {"nmi_std", std_of(nmis)},
                   {"purity_mean", mean_of(purities)}, {"purity_std", std_of(purities)},
                   {"runs", per_trial}};
  }

  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "iter,res_hq,res_hj,res_gf,objective,mu,rho,sigma\n";
  for (const TraceRecord& r : trace)
    out << r.iter << ',' << r.res_HQ << ',' << r.res_HJ << ',' << r.res_GF << ','
        << r.objective << ',' << r.mu << ',' << r.rho << ',' << r.sigma << '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  const Dataset dataset = load_or_synth(config);

  std::vector<ExperimentResult> trials;
  trials.reserve(static_cast<size_t>(config.trials));
  for (int t = 0; t < config.trials; ++t)
    trials.push_back(run_pipeline(dataset, config, config.solver.seed + t));
  const ExperimentResult& primary = trials.front();

  write_metrics_json(out_dir / "metrics.json", config, primary, trials);
  write_csv_labels(out_dir / "labels.csv", primary.sample_labels);
  write_csv_labels(out_dir / "anchors_labels.csv", primary.anchor_labels);
  write_trace_csv(out_dir / "trace.csv", primary.trace);
  return primary;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& config,
                              const std::vector<SweepAxis>& axes) {
  for (const SweepAxis& axis : axes) {
    if (axis.values.empty()) throw ConfigError("sweep: empty axis " + axis.name);
    if (axis.name != "anchor_rate" && axis.name != "p" && axis.name != "lambda1" &&
        axis.name != "lambda2")
      throw ConfigError("sweep: unknown axis " + axis.name);
  }
  if (axes.empty()) throw ConfigError("sweep: no axes");

  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  const Dataset dataset = load_or_synth(config);

  // Cartesian product, outermost axis slowest.
  std::vector<SweepPoint> points;
  std::vector<size_t> index(axes.size(), 0);
  while (true) {
    ExperimentConfig point_config = config;
    for (size_t a = 0; a < axes.size(); ++a) {
      const double value = axes[a].values[index[a]];
      if (axes[a].name == "anchor_rate") point_config.anchor_rate = value;
      else if (axes[a].name == "p") point_config.solver.p = value;
      else if (axes[a].name == "lambda1") point_config.solver.lambda1 = value;
      else point_config.solver.lambda2 = value;
    }

    SweepPoint point{point_config.anchor_rate, point_config.solver.p,
                     point_config.solver.lambda1, point_config.solver.lambda2,
                     "ok", {}};
    try {
      point.result = run_pipeline(dataset, point_config, point_config.solver.seed);
    } catch (const ConfigError& e) {
      point.status = std::string("config_error: ") + e.what();
    } catch (const DataError& e) {
      point.status = std::string("data_error: ") + e.what();
    } catch (const NumericError& e) {
      point.status = std::string("numeric_error: ") + e.what();
    }
    points.push_back(std::move(point));

    size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++index[a] < axes[a].values.size()) break;
      index[a] = 0;
      if (a == 0) {
        write_sweep_csv(out_dir / "sweep.csv", points);
        return points;
      }
    }
  }
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepPoint>& points) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "anchor_rate,p,lambda1,lambda2,anchors,acc,nmi,purity,iterations,converged,"
         "runtime_seconds,solver_seconds,status\n";
  for (const SweepPoint& pt : points) {
    out << pt.anchor_rate << ',' << pt.p << ',' << pt.lambda1 << ',' << pt.lambda2 << ','
        << pt.result.anchors << ',';
    if (pt.result.acc) out << *pt.result.acc;
    out << ',';
    if (pt.result.nmi) out << *pt.result.nmi;
    out << ',';
    if (pt.result.purity) out << *pt.result.purity;
    out << ',' << pt.result.iterations << ',' << (pt.result.converged ? 1 : 0) << ','
        << pt.result.runtime_seconds << ',' << pt.result.solver_seconds << ',' << pt.status
        << '\n';
  }
}

}  // namespace agtf
