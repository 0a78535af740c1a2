#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chessboard/analysis.hpp"
#include "chessboard/errors.hpp"
#include "chessboard/io.hpp"
#include "chessboard/kernel.hpp"
#include "chessboard/montecarlo.hpp"
#include "chessboard/twin.hpp"

namespace fs = std::filesystem;
using namespace chessboard;

namespace {

// Exit codes: 0 success, 2 usage error, 3 guard error, 4 I/O error.
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integer flags accept plain and scientific notation: "1000000", "1e6",
// "2.5e3"; anything non-integral or out of range is a usage error.
std::int64_t parse_integer_flag(const std::string& name, const std::string& text) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size() && std::isfinite(v) && v == std::floor(v) &&
        std::abs(v) <= 9007199254740992.0)  // 2^53: exactly representable
      return static_cast<std::int64_t>(v);
  } catch (const std::exception&) {
  }
  throw UsageError("--" + name + ": expected an integer, got '" + text + "'");
}

std::uint64_t parse_unsigned_flag(const std::string& name, const std::string& text) {
  if (!text.empty() && text[0] == '-')
    throw UsageError("--" + name + " must be nonnegative");
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  const std::int64_t v = parse_integer_flag(name, text);
  if (v < 0) throw UsageError("--" + name + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

double parse_real_flag(const std::string& name, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--" + name + ": expected a number, got '" + text + "'");
}

void write_with_digest(const fs::path& p, const std::string& content,
                       RunManifest& manifest) {
  write_text_file(p, content);
  manifest.output_digests.emplace_back(p.filename().string(), sha256_file_hex(p));
}

void finish_manifest(RunManifest& manifest, const fs::path& out_dir,
                     const std::string& file_name) {
  manifest.finished = now_iso8601();
  write_text_file(out_dir / file_name, manifest_json(manifest).dump(2) + "\n");
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out.empty() ? "." : out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  return dir;
}

struct ExactArgs {
  std::string steps, corner_weight;
  std::string convention = "feynman";
  std::string start = "+";
  std::string out = ".";
  std::string format = "both";
};

int run_exact(const ExactArgs& args) {
  const std::int64_t steps = parse_integer_flag("steps", args.steps);
  const double a = parse_real_flag("corner-weight", args.corner_weight);
  if (steps < 1) throw UsageError("--steps must be >= 1");
  if (a < 0.0) throw UsageError("--corner-weight must be >= 0");
  if (args.format != "csv" && args.format != "json" && args.format != "both")
    throw UsageError("--format must be csv, json or both");
  if (args.convention != "feynman" && args.convention != "gersch")
    throw UsageError("--convention must be feynman or gersch");
  if (args.start != "+" && args.start != "-")
    throw UsageError("--start must be + or -");
  const Convention conv =
      args.convention == "gersch" ? Convention::gersch : Convention::feynman;
  const Dir start = args.start == "+" ? Dir::plus : Dir::minus;

  const fs::path out_dir = ensure_out_dir(args.out);
  RunManifest manifest;
  manifest.command = "exact";
  manifest.params = Json{{"steps", steps},
                         {"corner_weight", a},
                         {"convention", args.convention},
                         {"start", args.start},
                         {"format", args.format}};
  manifest.started = now_iso8601();

  const KernelTable table = kernel_table({steps, a, conv}, start);
  if (args.format != "json") {
    std::ostringstream os;
    write_kernel_csv(table, os);
    write_with_digest(out_dir / "kernel.csv", os.str(), manifest);
  }
  if (args.format != "csv")
    write_with_digest(out_dir / "kernel.json", kernel_json(table).dump(2) + "\n",
                      manifest);
  finish_manifest(manifest, out_dir, "manifest_exact.json");
  return 0;
}

struct SimulateArgs {
  std::string steps, corner_prob, loops;
  std::string seed = "0";
  std::string workers = "1";
  std::string out = ".";
};

int run_simulate(const SimulateArgs& args) {
  SimConfig cfg;
  cfg.n_steps = parse_integer_flag("steps", args.steps);
  cfg.corner_prob = parse_real_flag("corner-prob", args.corner_prob);
  cfg.loops = parse_integer_flag("loops", args.loops);
  cfg.seed = parse_unsigned_flag("seed", args.seed);
  cfg.workers = parse_integer_flag("workers", args.workers);
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const fs::path out_dir = ensure_out_dir(args.out);
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.params = Json{{"steps", cfg.n_steps},
                         {"corner_prob", cfg.corner_prob},
                         {"loops", cfg.loops},
                         {"workers", cfg.workers}};
  manifest.has_seed = true;
  manifest.seed = cfg.seed;
  manifest.started = now_iso8601();

  std::cerr << "simulate: " << cfg.loops << " loops, n_steps=" << cfg.n_steps
            << ", corner_prob=" << cfg.corner_prob << ", workers=" << cfg.workers
            << "\n";
  const ChargeLattice lattice = run(cfg);

  std::ostringstream csv;
  write_counts_csv(lattice, csv);
  write_with_digest(out_dir / "counts.csv", csv.str(), manifest);
  write_with_digest(out_dir / "metadata.json",
                    metadata_json(lattice).dump(2) + "\n", manifest);
  finish_manifest(manifest, out_dir, "manifest_simulate.json");
  return 0;
}

struct OracleArgs {
  std::string steps, corner_prob;
  std::string out = ".";
};

int run_oracle(const OracleArgs& args) {
  const std::int64_t steps = parse_integer_flag("steps", args.steps);
  const double p_c = parse_real_flag("corner-prob", args.corner_prob);
  if (steps < 1) throw UsageError("--steps must be >= 1");
  if (p_c < 0.0 || p_c > 1.0) throw UsageError("--corner-prob must be in [0,1]");

  const fs::path out_dir = ensure_out_dir(args.out);
  RunManifest manifest;
  manifest.command = "oracle";
  manifest.params = Json{{"steps", steps}, {"corner_prob", p_c}};
  manifest.started = now_iso8601();

  const ExpectedLattice expected = expected_lattice(steps, p_c);
  std::ostringstream csv;
  write_expected_csv(expected, csv);
  write_with_digest(out_dir / "expected.csv", csv.str(), manifest);
  finish_manifest(manifest, out_dir, "manifest_oracle.json");
  return 0;
}

struct CompareArgs {
  std::string sim;
  std::string meta;
  std::string slice;
  std::string out = ".";
};

int run_compare(const CompareArgs& args) {
  const std::int64_t t = parse_integer_flag("slice", args.slice);
  const fs::path sim_path(args.sim);
  const fs::path meta_path =
      args.meta.empty() ? sim_path.parent_path() / "metadata.json" : fs::path(args.meta);

  const ChargeLattice lattice = read_counts(sim_path, meta_path);
  SliceComparison cmp;
  try {
    cmp = compare_slice(lattice, t);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!cmp.warning.empty()) std::cerr << "compare: warning: " << cmp.warning << "\n";

  const fs::path out_dir = ensure_out_dir(args.out);
  RunManifest manifest;
  manifest.command = "compare";
  manifest.params = Json{{"sim", sim_path.string()},
                         {"meta", meta_path.string()},
                         {"slice", t}};
  manifest.started = now_iso8601();

  const std::string suffix = "_t" + std::to_string(t);
  std::ostringstream csv;
  write_comparison_csv(cmp, csv);
  write_with_digest(out_dir / ("comparison" + suffix + ".csv"), csv.str(), manifest);
  write_with_digest(out_dir / ("summary" + suffix + ".json"),
                    summary_json(cmp).dump(2) + "\n", manifest);
  finish_manifest(manifest, out_dir, "manifest_compare.json");
  return 0;
}

int run_twin(const std::string& path_string) {
  Path p = [&] {
    try {
      return Path::parse(path_string);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const Path ext = extend_even(p);
  const Path twin = orthogonal_twin(p);
  std::cout << "path: " << p.str() << "\n";
  std::cout << "extended: " << ext.str() << "\n";
  std::cout << "twin: " << twin.str() << "\n";
  std::cout << "meetings:";
  for (const Site& m : meeting_points(p, twin))
    std::cout << " (" << m.x << "," << m.t << ")";
  std::cout << "\n";
  const EntwinedLoop loop = entwine(p);
  std::cout << "moves: " << loop.moves.size() << "\n";
  std::int64_t x = 0, t = 0;
  for (const Move& m : loop.moves) {
    const std::int64_t nx = x + sign(m.space_dir) * m.time_dir;
    const std::int64_t nt = t + m.time_dir;
    std::cout << (m.channel == Channel::A ? 'A' : 'B') << ','
              << (m.space_dir == Dir::plus ? "+1" : "-1") << ','
              << (m.time_dir > 0 ? "+1" : "-1") << ',' << x << ',' << t << ',' << nx
              << ',' << nt << "\n";
    x = nx;
    t = nt;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feynman chessboard propagator toolkit"};
  app.require_subcommand(1);

  ExactArgs exact_args;
  CLI::App* exact = app.add_subcommand("exact", "Exact kernel table by transfer matrix");
  exact->add_option("--steps", exact_args.steps, "Number of time slices")->required();
  exact->add_option("--corner-weight", exact_args.corner_weight,
                    "Weight per corner (a = eps*m)")
      ->required();
  exact->add_option("--convention", exact_args.convention,
                    "Corner factor convention: feynman or gersch");
  exact->add_option("--start", exact_args.start, "First step direction: + or -");
  exact->add_option("--out", exact_args.out, "Output directory");
  exact->add_option("--format", exact_args.format, "csv, json or both");

  SimulateArgs sim_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Entwined-loop Monte Carlo charge deposition");
  simulate->add_option("--steps", sim_args.steps, "Base path length")->required();
  simulate->add_option("--corner-prob", sim_args.corner_prob,
                       "Per-step flip probability")
      ->required();
  simulate->add_option("--loops", sim_args.loops, "Number of loops")->required();
  simulate->add_option("--seed", sim_args.seed, "RNG seed");
  simulate->add_option("--workers", sim_args.workers, "Parallel shard count");
  simulate->add_option("--out", sim_args.out, "Output directory");

  OracleArgs oracle_args;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Exact per-loop expectation by enumeration");
  oracle->add_option("--steps", oracle_args.steps, "Base path length (<= 16)")
      ->required();
  oracle->add_option("--corner-prob", oracle_args.corner_prob,
                     "Per-step flip probability")
      ->required();
  oracle->add_option("--out", oracle_args.out, "Output directory");

  CompareArgs cmp_args;
  CLI::App* compare =
      app.add_subcommand("compare", "Slice comparison of a simulation vs the kernel");
  compare->add_option("--sim", cmp_args.sim, "counts.csv from simulate")->required();
  compare->add_option("--meta", cmp_args.meta,
                      "metadata.json (default: next to counts.csv)");
  compare->add_option("--slice", cmp_args.slice, "Time slice t")->required();
  compare->add_option("--out", cmp_args.out, "Output directory");

  std::string twin_path;
  CLI::App* twin = app.add_subcommand("twin", "Print the twin and entwined loop");
  twin->add_option("path", twin_path, "Path over {+,-}, e.g. \"++-\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (exact->parsed()) return run_exact(exact_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (oracle->parsed()) return run_oracle(oracle_args);
    if (compare->parsed()) return run_compare(cmp_args);
    if (twin->parsed()) return run_twin(twin_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
