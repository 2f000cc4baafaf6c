#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "csi/data_model.hpp"
#include "csi/linalg.hpp"

namespace csi {

/// Dense CSV: first column is the response, the rest are features. Lines
/// starting with '#' are skipped; a single header row is auto-detected by a
/// non-numeric first token. Ragged rows and non-numeric cells are reported
/// with their line number. Responses that are all -1/+1 make the dataset a
/// classification problem, anything else a regression.
Dataset load_dense_csv(const std::string& path);

/// Writes a dataset in the dense CSV layout (with a y,x0,... header line).
/// Numbers use shortest round-trip decimals, so load(save(ds)) preserves the
/// content exactly. An optional '#' comment line goes first.
void save_dense_csv(const Dataset& ds, const std::string& path,
                    const std::string& comment = "");

/// Sparse rows, one sample per line: `label idx:val idx:val ...` with 1-based
/// strictly increasing indices. The feature count is the largest index seen
/// unless dims_override is nonzero (useful when a test file lacks the highest
/// training feature).
Dataset load_sparse(const std::string& path, std::size_t dims_override = 0);

/// Group file: one line per group, whitespace-separated zero-based indices.
std::vector<std::vector<std::size_t>> load_groups(const std::string& path);

/// Dense numeric CSV without response column (Laplacians etc.).
linalg::DenseMat load_matrix_csv(const std::string& path);

struct SplitFractions {
  double train = 0.5;
  double val = 0.25;
  double test = 0.25;
};

struct SplitResult {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Seeded permutation then contiguous cut. Validation and test get
/// floor(n * fraction) rows, the remainder goes to the training part.
/// Errors out when any part would be empty.
SplitResult split(const Dataset& ds, const SplitFractions& fractions,
                  std::uint64_t seed);

/// Rows of ds selected by index, preserving storage kind.
Dataset dataset_subset(const Dataset& ds, const std::vector<std::size_t>& rows);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string fnv1a64_file(const std::string& path);

/// Everything needed to re-run a command identically, written as
/// manifest.json into each output directory. The timestamp field reads
/// SOURCE_DATE_EPOCH when set and stays empty otherwise, keeping outputs
/// byte-identical across repeat runs.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_digests;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

/// The command-line entry point (parsing, dispatch, error reporting).
/// Exposed so tests can drive the CLI in-process.
int cli_main(const std::vector<std::string>& args);

}  // namespace csi
