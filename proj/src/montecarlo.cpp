#include "chessboard/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chessboard/errors.hpp"

namespace chessboard {

void validate(const SimConfig& cfg) {
  if (cfg.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!(cfg.corner_prob >= 0.0 && cfg.corner_prob <= 1.0))
    throw std::invalid_argument("corner_prob must be in [0,1]");
  if (cfg.loops < 1) throw std::invalid_argument("loops must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
}

LatticeLayout::LatticeLayout(std::int64_t t_cap) : t_cap_(t_cap) {
  if (t_cap < 1) throw std::invalid_argument("t_cap must be >= 1");
  offsets_.resize(static_cast<std::size_t>(t_cap) + 1, 0);
  std::size_t off = 0;
  for (std::int64_t t = 1; t <= t_cap; ++t) {
    offsets_[static_cast<std::size_t>(t)] = off;
    off += static_cast<std::size_t>(t + 1) * 4;
  }
  size_ = off;
}

ChargeLattice::ChargeLattice(SimConfig cfg)
    : config(cfg), layout(2 * cfg.n_steps), counts(layout.size(), 0) {
  validate(cfg);
}

namespace {

void sample_steps_into(std::vector<Dir>& steps, std::int64_t n,
                       std::uint64_t flip_threshold, LoopRng& rng) {
  steps.resize(static_cast<std::size_t>(n));
  steps[0] = Dir::plus;
  for (std::int64_t k = 1; k < n; ++k) {
    const bool turn = rng.next_u32() < flip_threshold;
    steps[static_cast<std::size_t>(k)] =
        turn ? flip(steps[static_cast<std::size_t>(k - 1)])
             : steps[static_cast<std::size_t>(k - 1)];
  }
}

}  // namespace

Path sample_path(std::int64_t n, double p_c, LoopRng& rng) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(p_c >= 0.0 && p_c <= 1.0)) throw std::invalid_argument("p_c must be in [0,1]");
  std::vector<Dir> steps;
  sample_steps_into(steps, n, bernoulli_threshold(p_c), rng);
  return Path(std::move(steps));
}

void deposit(const EntwinedLoop& loop, ChargeLattice& lattice) {
  if (loop.height > lattice.layout.t_cap())
    throw std::invalid_argument("loop does not fit in the lattice");
  std::int64_t x = 0, t = 0;
  auto* counts = lattice.counts.data();
  const LatticeLayout& layout = lattice.layout;
  for (const Move& m : loop.moves) {
    if (m.time_dir > 0) {
      x += sign(m.space_dir);
      t += 1;
      counts[layout.index(t, x, m.space_dir, m.channel)] += 1;
    } else {
      counts[layout.index(t, x, m.space_dir, m.channel)] -= 1;
      x -= sign(m.space_dir);
      t -= 1;
    }
  }
  lattice.max_t = std::max(lattice.max_t, loop.height);
}

void run_range(const SimConfig& cfg, std::int64_t lo, std::int64_t hi,
               ChargeLattice& lattice) {
  const std::uint64_t threshold = bernoulli_threshold(cfg.corner_prob);
  std::vector<Dir> steps;
  EntwinedLoop loop;
  EntwineWorkspace ws;
  for (std::int64_t i = lo; i < hi; ++i) {
    LoopRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    sample_steps_into(steps, cfg.n_steps, threshold, rng);
    entwine_into(steps, loop, ws);
    deposit(loop, lattice);
  }
  lattice.loops_completed += hi - lo;
}

ChargeLattice run_serial(const SimConfig& cfg) {
  validate(cfg);
  ChargeLattice lattice(cfg);
  run_range(cfg, 0, cfg.loops, lattice);
  return lattice;
}

ChargeLattice run(const SimConfig& cfg) {
  validate(cfg);
  const std::int64_t shards = std::min(cfg.workers, cfg.loops);
  std::vector<ChargeLattice> parts(static_cast<std::size_t>(shards), ChargeLattice(cfg));

#ifdef _OPENMP
  const int threads = static_cast<int>(std::min<std::int64_t>(shards, omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::int64_t b = 0; b < shards; ++b) {
    const std::int64_t lo = cfg.loops * b / shards;
    const std::int64_t hi = cfg.loops * (b + 1) / shards;
    run_range(cfg, lo, hi, parts[static_cast<std::size_t>(b)]);
  }

  ChargeLattice result = std::move(parts[0]);
  for (std::size_t b = 1; b < parts.size(); ++b) result = merge(result, parts[b]);
  return result;
}

ChargeLattice merge(const ChargeLattice& a, const ChargeLattice& b) {
  if (a.config.n_steps != b.config.n_steps ||
      a.config.corner_prob != b.config.corner_prob || a.config.seed != b.config.seed ||
      !(a.layout == b.layout))
    throw std::invalid_argument("merge: incompatible lattices");
  ChargeLattice out = a;
  for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
  out.loops_completed = a.loops_completed + b.loops_completed;
  out.max_t = std::max(a.max_t, b.max_t);
  return out;
}

ExpectedLattice expected_lattice(std::int64_t n, double p_c) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(p_c >= 0.0 && p_c <= 1.0)) throw std::invalid_argument("p_c must be in [0,1]");
  if (n > 16) throw GuardError("expected_lattice guarded at n <= 16 (2^(n-1) paths)");

  ExpectedLattice out(n, p_c);
  std::vector<Dir> steps(static_cast<std::size_t>(n));
  EntwinedLoop loop;
  EntwineWorkspace ws;

  const std::uint64_t n_paths = 1ull << (n - 1);
  for (std::uint64_t mask = 0; mask < n_paths; ++mask) {
    steps[0] = Dir::plus;
    for (std::int64_t k = 1; k < n; ++k)
      steps[static_cast<std::size_t>(k)] =
          (mask >> (k - 1)) & 1 ? flip(steps[static_cast<std::size_t>(k - 1)])
                                : steps[static_cast<std::size_t>(k - 1)];
    const auto r = static_cast<double>(corner_count(steps));
    const double prob =
        std::pow(p_c, r) * std::pow(1.0 - p_c, static_cast<double>(n - 1) - r);
    if (prob == 0.0) continue;

    entwine_into(steps, loop, ws);
    std::int64_t x = 0, t = 0;
    for (const Move& m : loop.moves) {
      std::size_t idx;
      if (m.time_dir > 0) {
        x += sign(m.space_dir);
        t += 1;
        idx = out.layout.index(t, x, m.space_dir, m.channel);
      } else {
        idx = out.layout.index(t, x, m.space_dir, m.channel);
        x -= sign(m.space_dir);
        t -= 1;
      }
      out.mean[idx] += prob * m.time_dir;
      out.touch[idx] += prob;
    }
    out.max_t = std::max(out.max_t, loop.height);
  }
  return out;
}

}  // namespace chessboard
