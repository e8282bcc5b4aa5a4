#include "agtf/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "agtf/errors.hpp"
#include "agtf/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace agtf {

namespace {

json parse_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return j;
}

std::vector<double> parse_csv_row(const std::string& line, const fs::path& path, int lineno) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    size_t consumed = 0;
    double value;
    try {
      value = std::stod(cell, &consumed);
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell +
                      "'");
    }
    row.push_back(value);
  }
  return row;
}

}  // namespace

Matrix load_csv_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row = parse_csv_row(line, path, lineno);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": ragged row (" +
                      std::to_string(row.size()) + " vs " +
                      std::to_string(rows.front().size()) + " columns)");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": empty csv");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (!std::isfinite(v))
        throw DataError(path.string() + ": non-finite value at row " + std::to_string(i) +
                        ", col " + std::to_string(j));
      m(i, j) = v;
    }
  return m;
}

void write_csv_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix load_f64le_matrix(const fs::path& path, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg());
  const std::uint64_t expected = static_cast<std::uint64_t>(rows) * cols * sizeof(double);
  if (bytes != expected)
    throw DataError(path.string() + ": size " + std::to_string(bytes) + " bytes, expected " +
                    std::to_string(expected) + " for " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  in.seekg(0);
  // Row-major on disk; transpose into Eigen's column-major layout.
  std::vector<double> buf(static_cast<size_t>(rows) * cols);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
  if (!in) throw DataError(path.string() + ": short read");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double v = buf[static_cast<size_t>(i) * cols + j];
      if (!std::isfinite(v))
        throw DataError(path.string() + ": non-finite value at row " + std::to_string(i) +
                        ", col " + std::to_string(j));
      m(i, j) = v;
    }
  return m;
}

void write_f64le_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

LabelVector load_csv_labels(const fs::path& path) {
  const Matrix m = load_csv_matrix(path);
  LabelVector labels;
  labels.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v != std::floor(v) || v < 0)
        throw DataError(path.string() + ": labels must be 0-based integers, got " +
                        std::to_string(v));
      labels.push_back(static_cast<int>(v));
    }
  return labels;
}

void write_csv_labels(const fs::path& path, const LabelVector& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (int l : labels) out << l << '\n';
}

DatasetManifest read_manifest(const fs::path& manifest_path) {
  const json j = parse_json_file(manifest_path);
  DatasetManifest m;
  try {
    m.name = j.value("name", "dataset");
    m.n = j.at("n").get<Eigen::Index>();
    for (const json& jv : j.at("views")) {
      ViewSpec v;
      v.id = jv.value("id", static_cast<int>(m.views.size()));
      v.path = jv.at("path").get<std::string>();
      v.format = jv.at("format").get<std::string>();
      v.rows = jv.value("rows", m.n);
      v.cols = jv.value("cols", Eigen::Index(0));
      if (v.format != "csv" && v.format != "f64le")
        throw DataError(manifest_path.string() + ": unknown view format '" + v.format + "'");
      m.views.push_back(std::move(v));
    }
    if (j.contains("labels")) m.labels_path = j.at("labels").at("path").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  if (m.views.empty()) throw DataError(manifest_path.string() + ": no views");
  return m;
}

Dataset load_dataset(const fs::path& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();

  Dataset ds;
  ds.name = manifest.name;
  for (const ViewSpec& spec : manifest.views) {
    const fs::path path = base / spec.path;
    Matrix data = spec.format == "csv" ? load_csv_matrix(path)
                                       : load_f64le_matrix(path, spec.rows, spec.cols);
    if (data.rows() != manifest.n)
      throw DataError(path.string() + ": " + std::to_string(data.rows()) + " rows, manifest n = " +
                      std::to_string(manifest.n));
    if (spec.format == "csv" && spec.cols > 0 && data.cols() != spec.cols)
      throw DataError(path.string() + ": " + std::to_string(data.cols()) +
                      " cols, manifest says " + std::to_string(spec.cols));
    ds.views.push_back(ViewMatrix{std::move(data), spec.id});
  }
  if (manifest.labels_path) {
    LabelVector labels = load_csv_labels(base / *manifest.labels_path);
    if (static_cast<Eigen::Index>(labels.size()) != manifest.n)
      throw DataError("labels length " + std::to_string(labels.size()) + " != n = " +
                      std::to_string(manifest.n));
    ds.labels = std::move(labels);
  }
  return ds;
}

namespace {

// K centers pairwise `edge` apart (regular simplex). dim >= K uses the
// scaled standard basis; dim == K-1 uses e_1..e_{K-1} plus the equidistant
// point alpha*(1,..,1), alpha = (1+sqrt(K))/(K-1), all pairwise sqrt(2)
// before scaling.
Matrix simplex_centers(int K, Eigen::Index dim, double edge, Rng& rng) {
  if (dim < K - 1) throw ConfigError("synth_dataset: view dim must be >= K-1");
  const double scale = edge / std::sqrt(2.0);
  Matrix centers = Matrix::Zero(K, dim);
  if (dim >= K) {
    for (int c = 0; c < K; ++c) centers(c, c) = scale;
  } else {
    for (int c = 0; c < K - 1; ++c) centers(c, c) = scale;
    const double alpha = (1.0 + std::sqrt(static_cast<double>(K))) / (K - 1.0);
    for (int c = 0; c < K - 1; ++c) centers(K - 1, c) = alpha * scale;
  }
  centers.rowwise() -= centers.colwise().mean();

  // Push vertices outward by random factors in [1, 1.5]: distances only
  // grow (vertices of a centered regular simplex have nonpositive mutual
  // dot products), and the broken symmetry avoids degenerate instances.
  for (int c = 0; c < K; ++c) centers.row(c) *= 1.0 + 0.5 * rng.uniform01();

  // Seeded random rotation spreads the arrangement over all coordinates.
  Matrix gauss(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) gauss(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix qmat = qr.householderQ();
  return centers * qmat.transpose();
}

}  // namespace

Dataset synth_dataset(const SynthSpec& spec, const fs::path& out_dir) {
  if (spec.K < 2) throw ConfigError("synth_dataset: K must be >= 2");
  if (spec.n < 5 * spec.K) throw ConfigError("synth_dataset: need n >= 5*K");
  if (spec.view_dims.empty()) throw ConfigError("synth_dataset: need at least one view");
  for (Eigen::Index d : spec.view_dims)
    if (d < spec.K - 1) throw ConfigError("synth_dataset: every view dim must be >= K-1");
  if (spec.cluster_std < 0) throw ConfigError("synth_dataset: cluster_std must be >= 0");

  fs::create_directories(out_dir);

  // Balanced shared assignment: cluster sizes differ by at most one.
  LabelVector labels(static_cast<size_t>(spec.n));
  for (Eigen::Index i = 0; i < spec.n; ++i)
    labels[static_cast<size_t>(i)] = static_cast<int>(i % spec.K);

  const double edge = 10.0 * spec.cluster_std + 1.0;

  Dataset ds;
  ds.name = "synth";
  json views_json = json::array();
  for (size_t v = 0; v < spec.view_dims.size(); ++v) {
    Rng rng(spec.seed * 1000003 + v);
    const Eigen::Index dim = spec.view_dims[v];
    const Matrix centers = simplex_centers(spec.K, dim, edge, rng);
    Matrix x(spec.n, dim);
    for (Eigen::Index i = 0; i < spec.n; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        x(i, j) = centers(labels[static_cast<size_t>(i)], j) + spec.cluster_std * rng.normal();

    const std::string filename = "view" + std::to_string(v) + ".f64le";
    write_f64le_matrix(out_dir / filename, x);
    views_json.push_back({{"id", static_cast<int>(v)},
                          {"path", filename},
                          {"format", "f64le"},
                          {"rows", spec.n},
                          {"cols", dim}});
    ds.views.push_back(ViewMatrix{std::move(x), static_cast<int>(v)});
  }

  write_csv_labels(out_dir / "labels.csv", labels);
  ds.labels = labels;

  json manifest = {{"name", "synth"},
                   {"n", spec.n},
                   {"views", views_json},
                   {"labels", {{"path", "labels.csv"}, {"format", "csv"}}}};
  std::ofstream out(out_dir / "manifest.json");
  if (!out) throw DataError("cannot write manifest under " + out_dir.string());
  out << manifest.dump(2) << '\n';

  return ds;
}

}  // namespace agtf
