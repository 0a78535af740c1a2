#include "chessboard/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "chessboard/errors.hpp"

namespace chessboard {

namespace {

const char* dir_label(Dir d) { return d == Dir::plus ? "+1" : "-1"; }
const char* channel_label(Channel ch) { return ch == Channel::A ? "A" : "B"; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_kernel_csv(const KernelTable& table, std::ostream& os) {
  os << "t,x,end_dir,w0,w1,w2,w3,phi_r,phi_i,g\n";
  table.for_each_present([&](std::int64_t t, std::int64_t x, Dir end, const KernelCell& c) {
    const PhiPair phi = phi_components(c);
    os << t << ',' << x << ',' << dir_label(end) << ',' << fmt_g17(c.w[0]) << ','
       << fmt_g17(c.w[1]) << ',' << fmt_g17(c.w[2]) << ',' << fmt_g17(c.w[3]) << ','
       << fmt_g17(phi.phi_r) << ',' << fmt_g17(phi.phi_i) << ','
       << fmt_g17(signed_kernel(c)) << '\n';
  });
}

Json kernel_json(const KernelTable& table) {
  Json j;
  j["params"] = {{"t_max", table.params().t_max},
                 {"corner_weight", table.params().corner_weight},
                 {"convention",
                  table.params().convention == Convention::feynman ? "feynman" : "gersch"},
                 {"start", table.start() == Dir::plus ? "+" : "-"}};
  Json cells = Json::array();
  table.for_each_present([&](std::int64_t t, std::int64_t x, Dir end, const KernelCell& c) {
    const PhiPair phi = phi_components(c);
    cells.push_back({{"t", t},
                     {"x", x},
                     {"end_dir", sign(end)},
                     {"w0", c.w[0]},
                     {"w1", c.w[1]},
                     {"w2", c.w[2]},
                     {"w3", c.w[3]},
                     {"phi_r", phi.phi_r},
                     {"phi_i", phi.phi_i},
                     {"g", signed_kernel(c)}});
  });
  j["cells"] = std::move(cells);
  return j;
}

void write_counts_csv(const ChargeLattice& lattice, std::ostream& os) {
  os << "t,x,sigma,channel,count\n";
  lattice.layout.for_each_bond(
      [&](std::int64_t t, std::int64_t x, Dir sigma, Channel ch, std::size_t idx) {
        if (t > lattice.max_t) return;
        os << t << ',' << x << ',' << dir_label(sigma) << ',' << channel_label(ch)
           << ',' << lattice.counts[idx] << '\n';
      });
}

Json metadata_json(const ChargeLattice& lattice) {
  return Json{{"n_steps", lattice.config.n_steps},
              {"corner_prob", lattice.config.corner_prob},
              {"loops", lattice.loops_completed},
              {"seed", lattice.config.seed},
              {"workers", lattice.config.workers},
              {"max_t", lattice.max_t}};
}

ChargeLattice read_counts(const std::filesystem::path& csv_path,
                          const std::filesystem::path& meta_path) {
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw IoError("cannot open metadata file " + meta_path.string());
  Json meta;
  try {
    meta = Json::parse(meta_in);
  } catch (const std::exception& e) {
    throw IoError("bad metadata JSON in " + meta_path.string() + ": " + e.what());
  }
  SimConfig cfg;
  try {
    cfg.n_steps = meta.at("n_steps").get<std::int64_t>();
    cfg.corner_prob = meta.at("corner_prob").get<double>();
    cfg.loops = meta.at("loops").get<std::int64_t>();
    cfg.seed = meta.at("seed").get<std::uint64_t>();
    cfg.workers = meta.at("workers").get<std::int64_t>();
  } catch (const std::exception& e) {
    throw IoError("incomplete metadata in " + meta_path.string() + ": " + e.what());
  }

  ChargeLattice lattice(cfg);
  lattice.loops_completed = cfg.loops;
  lattice.max_t = meta.at("max_t").get<std::int64_t>();

  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open counts file " + csv_path.string());
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) !=
          std::vector<std::string>{"t", "x", "sigma", "channel", "count"})
    throw IoError("bad counts header in " + csv_path.string());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw IoError("bad counts row at line " + std::to_string(line_no));
    try {
      const std::int64_t t = std::stoll(fields[0]);
      const std::int64_t x = std::stoll(fields[1]);
      const Dir sigma = std::stoll(fields[2]) > 0 ? Dir::plus : Dir::minus;
      if (fields[3] != "A" && fields[3] != "B")
        throw IoError("bad channel at line " + std::to_string(line_no));
      const Channel ch = fields[3] == "A" ? Channel::A : Channel::B;
      if (!lattice.layout.valid_bond(t, x, sigma))
        throw IoError("bond outside lattice at line " + std::to_string(line_no));
      lattice.counts[lattice.layout.index(t, x, sigma, ch)] = std::stoll(fields[4]);
    } catch (const IoError&) {
      throw;
    } catch (const std::exception&) {
      throw IoError("unparsable counts row at line " + std::to_string(line_no));
    }
  }
  return lattice;
}

void write_expected_csv(const ExpectedLattice& expected, std::ostream& os) {
  os << "t,x,sigma,channel,mean\n";
  expected.layout.for_each_bond(
      [&](std::int64_t t, std::int64_t x, Dir sigma, Channel ch, std::size_t idx) {
        if (expected.touch[idx] <= 0.0) return;
        os << t << ',' << x << ',' << dir_label(sigma) << ',' << channel_label(ch)
           << ',' << fmt_g17(expected.mean[idx]) << '\n';
      });
}

void write_comparison_csv(const SliceComparison& cmp, std::ostream& os) {
  os << "t,x,mc,exact,scaled_mc,z\n";
  for (const auto& e : cmp.entries) {
    os << cmp.t << ',' << e.x << ',' << fmt_g17(e.mc) << ',' << fmt_g17(e.exact) << ','
       << fmt_g17(cmp.scale * e.mc) << ',' << fmt_g17(e.z) << '\n';
  }
}

Json summary_json(const SliceComparison& cmp) {
  Json j{{"t", cmp.t},
         {"scale", cmp.scale},
         {"reduced_chi2", cmp.reduced_chi2},
         {"n_points", cmp.entries.size()},
         {"max_abs_z", cmp.max_abs_z}};
  if (!cmp.warning.empty()) j["warning"] = cmp.warning;
  return j;
}

Json manifest_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["params"] = m.params;
  if (m.has_seed) j["seed"] = m.seed;
  j["started"] = m.started;
  j["finished"] = m.finished;
  Json outputs = Json::object();
  for (const auto& [name, digest] : m.output_digests) outputs[name] = digest;
  j["outputs"] = std::move(outputs);
  return j;
}

std::string sha256_file_hex(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string() + " for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw IoError("cannot allocate digest context");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + p.string());
}

}  // namespace chessboard
