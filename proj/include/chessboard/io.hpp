#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "chessboard/analysis.hpp"
#include "chessboard/kernel.hpp"
#include "chessboard/montecarlo.hpp"

namespace chessboard {

using Json = nlohmann::ordered_json;

// 17 significant digits, enough to round-trip a double exactly.
std::string fmt_g17(double v);

// Columns: t,x,end_dir,w0,w1,w2,w3,phi_r,phi_i,g - one row per present
// cell, sorted by (t, x, end_dir).
void write_kernel_csv(const KernelTable& table, std::ostream& os);
Json kernel_json(const KernelTable& table);

// Columns: t,x,sigma,channel,count - every valid bond key with
// t <= max_t, sorted by (t, x, sigma, channel).
void write_counts_csv(const ChargeLattice& lattice, std::ostream& os);
Json metadata_json(const ChargeLattice& lattice);

// Rebuilds a lattice from the counts CSV and its metadata sidecar.
ChargeLattice read_counts(const std::filesystem::path& csv_path,
                          const std::filesystem::path& meta_path);

// Same shape as the counts CSV with a real-valued mean column; rows are
// limited to keys with a positive crossing probability.
void write_expected_csv(const ExpectedLattice& expected, std::ostream& os);

// Columns: t,x,mc,exact,scaled_mc,z.
void write_comparison_csv(const SliceComparison& cmp, std::ostream& os);
Json summary_json(const SliceComparison& cmp);

// Run manifest: command, parameters, timestamps and SHA-256 digests of
// every produced file.
struct RunManifest {
  std::string command;
  Json params;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  std::vector<std::pair<std::string, std::string>> output_digests;
};

Json manifest_json(const RunManifest& m);

std::string sha256_file_hex(const std::filesystem::path& p);
std::string now_iso8601();

void write_text_file(const std::filesystem::path& p, const std::string& content);

}  // namespace chessboard
