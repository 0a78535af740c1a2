#pragma once

#include <cstdint>
#include <vector>

#include "chessboard/path.hpp"
#include "chessboard/rng.hpp"
#include "chessboard/twin.hpp"

namespace chessboard {

struct SimConfig {
  std::int64_t n_steps = 1;   // base path length t_b in lattice units
  double corner_prob = 0.5;   // per-step direction-flip probability
  std::int64_t loops = 1;     // number of entwined loops to traverse
  std::uint64_t seed = 0;
  std::int64_t workers = 1;   // shard count for the parallel run
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

void validate(const SimConfig& cfg);

// Dense flat indexing of (t, x, arrival direction, channel) over the
// light cone up to t_cap. A bond key is valid when both of its endpoints
// lie in the cone: |x| <= t, x == t (mod 2), |x - sigma| <= t - 1.
class LatticeLayout {
 public:
  explicit LatticeLayout(std::int64_t t_cap);

  std::int64_t t_cap() const { return t_cap_; }
  std::size_t size() const { return size_; }

  bool valid_bond(std::int64_t t, std::int64_t x, Dir sigma) const {
    return t >= 1 && t <= t_cap_ && x >= -t && x <= t && (x + t) % 2 == 0 &&
           x - sign(sigma) >= -(t - 1) && x - sign(sigma) <= t - 1;
  }

  // Unchecked; caller guarantees valid_bond.
  std::size_t index(std::int64_t t, std::int64_t x, Dir sigma, Channel ch) const {
    return offsets_[static_cast<std::size_t>(t)] +
           static_cast<std::size_t>((x + t) / 2) * 4 +
           (sigma == Dir::plus ? 2u : 0u) + static_cast<std::size_t>(ch);
  }

  // Calls fn(t, x, sigma, ch, flat_index) for every valid bond key,
  // ordered by (t, x, sigma, channel) with sigma -1 < +1 and A < B.
  template <typename Fn>
  void for_each_bond(Fn&& fn) const {
    for (std::int64_t t = 1; t <= t_cap_; ++t)
      for (std::int64_t x = -t; x <= t; x += 2)
        for (Dir sigma : {Dir::minus, Dir::plus})
          for (Channel ch : {Channel::A, Channel::B})
            if (valid_bond(t, x, sigma)) fn(t, x, sigma, ch, index(t, x, sigma, ch));
  }

  friend bool operator==(const LatticeLayout& a, const LatticeLayout& b) {
    return a.t_cap_ == b.t_cap_;
  }

 private:
  std::int64_t t_cap_;
  std::size_t size_;
  std::vector<std::size_t> offsets_;  // offsets_[t] = start of slice t
};

// Signed traversal counts per (site, arrival direction, channel), plus
// run metadata. Sized for the even-R extension (t up to 2 * n_steps).
struct ChargeLattice {
  explicit ChargeLattice(SimConfig cfg);

  SimConfig config;
  std::int64_t loops_completed = 0;
  std::int64_t max_t = 0;  // largest loop height seen
  LatticeLayout layout;
  std::vector<std::int64_t> counts;

  std::int64_t count_at(Site s, Dir sigma, Channel ch) const {
    if (!layout.valid_bond(s.t, s.x, sigma)) return 0;
    return counts[layout.index(s.t, s.x, sigma, ch)];
  }
};

// Classical per-step flip process: first step +x, each later step reverses
// with probability p_c. Path frequency is p_c^R (1-p_c)^(n-1-R).
Path sample_path(std::int64_t n, double p_c, LoopRng& rng);

// Registers +1 (-1) at the upper endpoint of every upward (downward) move,
// keyed by the bond's space direction and source channel.
void deposit(const EntwinedLoop& loop, ChargeLattice& lattice);

// Runs loop indices [lo, hi) into the given lattice; the stream of loop i
// depends only on (config.seed, i).
void run_range(const SimConfig& cfg, std::int64_t lo, std::int64_t hi,
               ChargeLattice& lattice);

// Serial reference: all loops in index order on one thread.
ChargeLattice run_serial(const SimConfig& cfg);

// OpenMP run over config.workers shards (block partition of loop indices).
// Counts are bit-identical to run_serial for every worker count.
ChargeLattice run(const SimConfig& cfg);

// Pointwise sum of two shards of the same simulation.
ChargeLattice merge(const ChargeLattice& a, const ChargeLattice& b);

// Exact per-loop expectation of deposit counts, by enumeration of all
// 2^(n-1) base paths. mean is the signed expectation, touch the
// probability that the key receives a deposit at all (each key gets at
// most one per loop, so the per-loop variance is touch - mean^2).
struct ExpectedLattice {
  std::int64_t n_steps = 1;
  double corner_prob = 0.5;
  std::int64_t max_t = 0;
  LatticeLayout layout;
  std::vector<double> mean;
  std::vector<double> touch;

  explicit ExpectedLattice(std::int64_t n, double p_c)
      : n_steps(n), corner_prob(p_c), layout(2 * n),
        mean(layout.size(), 0.0), touch(layout.size(), 0.0) {}

  double mean_at(Site s, Dir sigma, Channel ch) const {
    if (!layout.valid_bond(s.t, s.x, sigma)) return 0.0;
    return mean[layout.index(s.t, s.x, sigma, ch)];
  }
  double touch_at(Site s, Dir sigma, Channel ch) const {
    if (!layout.valid_bond(s.t, s.x, sigma)) return 0.0;
    return touch[layout.index(s.t, s.x, sigma, ch)];
  }
};

// Guarded at n <= 16.
ExpectedLattice expected_lattice(std::int64_t n, double p_c);

}  // namespace chessboard
