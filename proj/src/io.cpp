#include "csi/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csi/rng.hpp"
#include "csi/text.hpp"
#include "csi/version.hpp"

namespace csi {

namespace {

[[noreturn]] void line_error(const std::string& path, std::size_t line_no,
                             const std::string& msg) {
  throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

ResponseKind infer_kind(const std::vector<double>& y) {
  for (double v : y)
    if (v != 1.0 && v != -1.0) return ResponseKind::kRegression;
  return ResponseKind::kBinaryClassification;
}

}  // namespace

Dataset load_dense_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);

  std::vector<double> y;
  std::vector<double> x;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t line_no = 0;
  bool saw_data = false;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    if (content.front() == '#') continue;
    const auto cells = split(content, ',');

    if (!saw_data) {
      double probe;
      if (!parse_double(trim(cells[0]), probe)) continue;  // header row
    }

    if (cells.size() < 2)
      line_error(path, line_no, "expected a response and at least one feature");
    if (!saw_data) {
      d = cells.size() - 1;
      saw_data = true;
    } else if (cells.size() != d + 1) {
      line_error(path, line_no,
                 "expected " + std::to_string(d + 1) + " fields, got " +
                     std::to_string(cells.size()));
    }

    double value;
    if (!parse_double(trim(cells[0]), value))
      line_error(path, line_no, "bad response '" + std::string(trim(cells[0])) + "'");
    y.push_back(value);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      if (!parse_double(trim(cells[j]), value))
        line_error(path, line_no, "bad number '" + std::string(trim(cells[j])) +
                                      "' in column " + std::to_string(j));
      x.push_back(value);
    }
    ++n;
  }
  if (n == 0) throw std::runtime_error(path + ": no data rows");

  const ResponseKind kind = infer_kind(y);
  return Dataset(FeatureMatrix::dense(n, d, std::move(x)), Vector(std::move(y)), kind);
}

void save_dense_csv(const Dataset& ds, const std::string& path,
                    const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (!comment.empty()) out << "# " << comment << '\n';
  out << 'y';
  for (std::size_t j = 0; j < ds.dim(); ++j) out << ",x" << j;
  out << '\n';
  const FeatureMatrix dense = ds.features().to_dense();
  std::span<const double> x = dense.dense_values();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << format_double(ds.responses()[i]);
    for (std::size_t j = 0; j < ds.dim(); ++j)
      out << ',' << format_double(x[i * ds.dim() + j]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

Dataset load_sparse(const std::string& path, std::size_t dims_override) {
  std::ifstream in = open_or_throw(path);

  std::vector<double> y;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t max_index = 0;  // 1-based
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    if (content.front() == '#') continue;
    const auto toks = tokenize(content);

    double label;
    if (!parse_double(toks[0], label))
      line_error(path, line_no, "bad label '" + std::string(toks[0]) + "'");
    y.push_back(label);

    std::size_t prev_index = 0;
    for (std::size_t t = 1; t < toks.size(); ++t) {
      const auto parts = split(toks[t], ':');
      std::size_t index;
      double value;
      if (parts.size() != 2 || !parse_size(parts[0], index) ||
          !parse_double(parts[1], value))
        line_error(path, line_no, "bad entry '" + std::string(toks[t]) +
                                      "' (expected idx:val)");
      if (index == 0)
        line_error(path, line_no, "indices are 1-based; found index 0");
      if (index <= prev_index)
        line_error(path, line_no, "indices must be strictly increasing");
      prev_index = index;
      max_index = std::max(max_index, index);
      indices.push_back(static_cast<std::uint32_t>(index - 1));
      values.push_back(value);
    }
    row_offsets.push_back(indices.size());
  }
  if (y.empty()) throw std::runtime_error(path + ": no data rows");

  std::size_t d = dims_override != 0 ? dims_override : max_index;
  if (d < max_index)
    throw std::runtime_error(path + ": --dims " + std::to_string(dims_override) +
                             " is smaller than the largest index " +
                             std::to_string(max_index));
  if (d == 0) throw std::runtime_error(path + ": no features found; pass --dims");

  const ResponseKind kind = infer_kind(y);
  const std::size_t n = y.size();
  FeatureMatrix features = FeatureMatrix::sparse(n, d, std::move(row_offsets),
                                                 std::move(indices), std::move(values));
  return Dataset(std::move(features), Vector(std::move(y)), kind);
}

std::vector<std::vector<std::size_t>> load_groups(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::vector<std::size_t>> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    if (content.front() == '#') continue;
    std::vector<std::size_t> group;
    for (const auto tok : tokenize(content)) {
      std::size_t index;
      if (!parse_size(tok, index))
        line_error(path, line_no, "bad index '" + std::string(tok) + "'");
      group.push_back(index);
    }
    groups.push_back(std::move(group));
  }
  if (groups.empty()) throw std::runtime_error(path + ": no groups");
  return groups;
}

linalg::DenseMat load_matrix_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    if (content.front() == '#') continue;
    const auto cells = split(content, ',');
    if (rows == 0) {
      cols = cells.size();
    } else if (cells.size() != cols) {
      line_error(path, line_no, "expected " + std::to_string(cols) + " fields, got " +
                                    std::to_string(cells.size()));
    }
    for (const auto cell : cells) {
      double value;
      if (!parse_double(trim(cell), value))
        line_error(path, line_no, "bad number '" + std::string(trim(cell)) + "'");
      data.push_back(value);
    }
    ++rows;
  }
  if (rows == 0) throw std::runtime_error(path + ": empty matrix");
  linalg::DenseMat m(rows, cols);
  m.data = std::move(data);
  return m;
}

Dataset dataset_subset(const Dataset& ds, const std::vector<std::size_t>& rows) {
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) y[i] = ds.responses()[rows[i]];

  const FeatureMatrix& m = ds.features();
  if (m.is_sparse()) {
    std::vector<std::size_t> row_offsets{0};
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    for (std::size_t r : rows) {
      for (std::size_t k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) {
        indices.push_back(m.indices()[k]);
        values.push_back(m.sparse_values()[k]);
      }
      row_offsets.push_back(indices.size());
    }
    return Dataset(FeatureMatrix::sparse(rows.size(), m.cols(), std::move(row_offsets),
                                         std::move(indices), std::move(values)),
                   Vector(std::move(y)), ds.kind());
  }
  std::vector<double> x(rows.size() * m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) m.copy_row(rows[i], x.data() + i * m.cols());
  return Dataset(FeatureMatrix::dense(rows.size(), m.cols(), std::move(x)),
                 Vector(std::move(y)), ds.kind());
}

SplitResult split(const Dataset& ds, const SplitFractions& fractions,
                  std::uint64_t seed) {
  if (!(fractions.train > 0.0) || !(fractions.val > 0.0) || !(fractions.test > 0.0))
    throw std::invalid_argument("split: fractions must be positive");
  const double sum = fractions.train + fractions.val + fractions.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split: fractions must sum to 1");

  const std::size_t n = ds.size();
  const auto n_val = static_cast<std::size_t>(static_cast<double>(n) * fractions.val);
  const auto n_test = static_cast<std::size_t>(static_cast<double>(n) * fractions.test);
  if (n_val + n_test >= n) throw std::invalid_argument("split: empty training part");
  const std::size_t n_train = n - n_val - n_test;
  if (n_val == 0 || n_test == 0)
    throw std::invalid_argument("split: a part would be empty at n=" + std::to_string(n));

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j = i + rng.integer(n - i);
    std::swap(perm[i], perm[j]);
  }

  const std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + n_train);
  const std::vector<std::size_t> val_rows(perm.begin() + n_train,
                                          perm.begin() + n_train + n_val);
  const std::vector<std::size_t> test_rows(perm.begin() + n_train + n_val, perm.end());
  return SplitResult{dataset_subset(ds, train_rows), dataset_subset(ds, val_rows),
                     dataset_subset(ds, test_rows)};
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return std::string(out);
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["argv"] = manifest.argv;
  j["config"] = manifest.config;
  j["inputs"] = manifest.input_digests;
  j["library_version"] = kVersion;
  j["rng"] = Rng::kIdentity;
  if (manifest.has_seed) j["seed"] = manifest.seed;
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  j["timestamp"] = epoch ? epoch : "";

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = out_dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace csi
