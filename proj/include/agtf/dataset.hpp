#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agtf/anchor.hpp"
#include "agtf/metrics.hpp"

namespace agtf {

struct ViewSpec {
  int id = 0;
  std::string path;
  std::string format;  // "csv" or "f64le"
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

struct DatasetManifest {
  std::string name;
  Eigen::Index n = 0;
  std::vector<ViewSpec> views;
  std::optional<std::string> labels_path;  // csv, 0-based integers
};

struct Dataset {
  std::string name;
  std::vector<ViewMatrix> views;
  std::optional<LabelVector> labels;
};

DatasetManifest read_manifest(const std::filesystem::path& manifest_path);

/// Load all views (and labels when present) described by a manifest; paths
/// resolve relative to the manifest file. Shapes are validated and
/// non-finite values rejected with their location.
Dataset load_dataset(const std::filesystem::path& manifest_path);

Matrix load_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

Matrix load_f64le_matrix(const std::filesystem::path& path, Eigen::Index rows, Eigen::Index cols);
void write_f64le_matrix(const std::filesystem::path& path, const Matrix& m);

LabelVector load_csv_labels(const std::filesystem::path& path);
void write_csv_labels(const std::filesystem::path& path, const LabelVector& labels);

struct SynthSpec {
  int K = 4;
  Eigen::Index n = 400;
  std::vector<Eigen::Index> view_dims = {10, 8, 12};
  double cluster_std = 1.0;
  std::uint64_t seed = 0;
};

/// Generate a multi-view Gaussian-blob dataset with a shared balanced
/// cluster assignment; per view the K centers sit on a regular simplex with
/// pairwise distance 10*cluster_std + 1. Writes views (f64le), labels.csv
/// and manifest.json under out_dir and returns the loaded dataset.
Dataset synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace agtf
