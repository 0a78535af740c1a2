#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "chessboard/path.hpp"

namespace chessboard {

// Sign convention for the imaginary part of the kernel: Feynman weights a
// corner with +i, Gersch with -i. Real tables are identical under both;
// only complex_kernel depends on the choice.
enum class Convention { feynman, gersch };

struct KernelParams {
  std::int64_t t_max = 1;          // number of time steps
  double corner_weight = 0.0;      // dimensionless a (epsilon*m per corner)
  Convention convention = Convention::feynman;
};

// Four real corner-weight sums at one (site, final direction), split by
// corner count mod 4. Each w[r] is a nonnegative partition function; the
// complex kernel is recovered as (w0 - w2) + i (w1 - w3).
struct KernelCell {
  std::array<double, 4> w{};
  bool present = false;  // reachable by at least one path
};

struct PhiPair {
  double phi_r = 0.0;
  double phi_i = 0.0;
};

// Corner-weight sums for every reachable (site, final direction) with
// 1 <= t <= t_max, for paths from the origin whose first step is fixed.
class KernelTable {
 public:
  KernelTable(KernelParams params, Dir start);

  const KernelParams& params() const { return params_; }
  Dir start() const { return start_; }

  // Zero, non-present cell for sites outside the table.
  const KernelCell& cell(Site s, Dir end) const;
  bool has_cell(Site s, Dir end) const { return cell(s, end).present; }

  KernelCell& at(std::int64_t t, std::int64_t x, Dir end);

  // Calls fn(t, x, end, cell) for every present cell, ordered by
  // (t, x, end) with end = -1 before +1.
  template <typename Fn>
  void for_each_present(Fn&& fn) const {
    for (std::int64_t t = 1; t <= params_.t_max; ++t) {
      for (std::int64_t x = -t; x <= t; x += 2) {
        for (Dir end : {Dir::minus, Dir::plus}) {
          const KernelCell& c = slices_[static_cast<std::size_t>(t - 1)]
                                       [cell_index(t, x, end)];
          if (c.present) fn(t, x, end, c);
        }
      }
    }
  }

 private:
  static std::size_t cell_index(std::int64_t t, std::int64_t x, Dir end) {
    return static_cast<std::size_t>((x + t) / 2) * 2 + (end == Dir::plus ? 1 : 0);
  }

  KernelParams params_;
  Dir start_;
  std::vector<std::vector<KernelCell>> slices_;  // slices_[t-1], (t+1)*2 cells
};

// Slice-by-slice transfer-matrix recursion over (x, final direction,
// R mod 4): a straight continuation carries weight unchanged, a turn
// multiplies by corner_weight and advances R mod 4.
KernelTable kernel_table(const KernelParams& params, Dir start);

// Literal sum over every path of every length 1..t_max with the given
// first step; independent oracle for kernel_table. Guarded at t_max <= 20.
KernelTable enumerate_kernel(const KernelParams& params, Dir start);

inline PhiPair phi_components(const KernelCell& c) {
  return {c.w[0] - c.w[2], c.w[1] - c.w[3]};
}

// (w0 - w2) + (w1 - w3): the blue-minus-red traversal count a single
// entwined path reproduces; equals phi_r + phi_i.
inline double signed_kernel(const KernelCell& c) {
  return (c.w[0] - c.w[2]) + (c.w[1] - c.w[3]);
}

inline double unsigned_sum(const KernelCell& c) {
  return c.w[0] + c.w[1] + c.w[2] + c.w[3];
}

// Kernel value at one cell under the table's convention.
std::complex<double> complex_kernel(const KernelTable& table, Site s, Dir end);

// N(R) with endpoint, start and end directions fixed; integer dynamic
// program over (x, direction, exact corner count). Returns 0 for
// unreachable sites or impossible R.
std::int64_t count_paths(std::int64_t x, std::int64_t t, Dir end, Dir start,
                         std::int64_t corners);

// Largest entrywise |difference| between two tables of equal shape;
// infinity if presence patterns differ.
double table_max_abs_diff(const KernelTable& a, const KernelTable& b);

}  // namespace chessboard
