#include "chessboard/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "chessboard/errors.hpp"

namespace chessboard {

namespace {

void check_params(const KernelParams& p) {
  if (p.t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (!(p.corner_weight >= 0.0)) throw std::invalid_argument("corner_weight must be >= 0");
}

const KernelCell kZeroCell{};

}  // namespace

KernelTable::KernelTable(KernelParams params, Dir start)
    : params_(params), start_(start) {
  check_params(params_);
  slices_.resize(static_cast<std::size_t>(params_.t_max));
  for (std::int64_t t = 1; t <= params_.t_max; ++t)
    slices_[static_cast<std::size_t>(t - 1)].resize(static_cast<std::size_t>(t + 1) * 2);
}

const KernelCell& KernelTable::cell(Site s, Dir end) const {
  if (s.t < 1 || s.t > params_.t_max) return kZeroCell;
  if (s.x < -s.t || s.x > s.t || (s.x + s.t) % 2 != 0) return kZeroCell;
  return slices_[static_cast<std::size_t>(s.t - 1)][cell_index(s.t, s.x, end)];
}

KernelCell& KernelTable::at(std::int64_t t, std::int64_t x, Dir end) {
  return slices_[static_cast<std::size_t>(t - 1)][cell_index(t, x, end)];
}

KernelTable kernel_table(const KernelParams& params, Dir start) {
  check_params(params);
  KernelTable table(params, start);
  const double a = params.corner_weight;

  // State per slice: weight[slot][dir][r] plus reachability.
  struct State {
    std::array<std::array<double, 4>, 2> w{};
    std::array<bool, 2> reach{};
  };
  std::vector<State> cur(2), next;

  // t = 1: the single one-step path.
  {
    const std::size_t slot = start == Dir::plus ? 1 : 0;
    cur[slot].w[start == Dir::plus ? 1 : 0][0] = 1.0;
    cur[slot].reach[start == Dir::plus ? 1 : 0] = true;
  }

  for (std::int64_t t = 1; t <= params.t_max; ++t) {
    // Record the slice into the table.
    for (std::int64_t x = -t; x <= t; x += 2) {
      const std::size_t slot = static_cast<std::size_t>((x + t) / 2);
      for (int d = 0; d < 2; ++d) {
        if (!cur[slot].reach[d]) continue;
        KernelCell& cell = table.at(t, x, d == 1 ? Dir::plus : Dir::minus);
        cell.present = true;
        cell.w = cur[slot].w[d];
      }
    }
    if (t == params.t_max) break;

    // Advance one slice: straight keeps (w, r), a turn costs a and bumps r.
    next.assign(static_cast<std::size_t>(t + 2), State{});
    for (std::int64_t x = -t; x <= t; x += 2) {
      const std::size_t slot = static_cast<std::size_t>((x + t) / 2);
      for (int d = 0; d < 2; ++d) {
        if (!cur[slot].reach[d]) continue;
        const int s = d == 1 ? 1 : -1;
        const std::size_t straight = static_cast<std::size_t>((x + s + t + 1) / 2);
        const std::size_t turned = static_cast<std::size_t>((x - s + t + 1) / 2);
        next[straight].reach[d] = true;
        next[turned].reach[1 - d] = true;
        for (int r = 0; r < 4; ++r) {
          const double w = cur[slot].w[d][r];
          next[straight].w[d][r] += w;
          next[turned].w[1 - d][(r + 1) & 3] += w * a;
        }
      }
    }
    cur.swap(next);
  }
  return table;
}

KernelTable enumerate_kernel(const KernelParams& params, Dir start) {
  check_params(params);
  if (params.t_max > 20)
    throw GuardError("enumerate_kernel guarded at t_max <= 20 (2^(t_max-1) paths)");
  KernelTable table(params, start);
  const double a = params.corner_weight;

  std::vector<Dir> steps;
  for (std::int64_t t = 1; t <= params.t_max; ++t) {
    const std::uint64_t n_paths = 1ull << (t - 1);
    for (std::uint64_t mask = 0; mask < n_paths; ++mask) {
      steps.assign(1, start);
      for (std::int64_t k = 1; k < t; ++k)
        steps.push_back((mask >> (k - 1)) & 1 ? Dir::plus : Dir::minus);
      const Site end = end_site(steps);
      const std::int64_t r = corner_count(steps);
      KernelCell& cell = table.at(end.t, end.x, steps.back());
      cell.present = true;
      cell.w[static_cast<std::size_t>(r & 3)] += std::pow(a, static_cast<double>(r));
    }
  }
  return table;
}

std::complex<double> complex_kernel(const KernelTable& table, Site s, Dir end) {
  const PhiPair phi = phi_components(table.cell(s, end));
  const double sgn = table.params().convention == Convention::feynman ? 1.0 : -1.0;
  return {phi.phi_r, sgn * phi.phi_i};
}

std::int64_t count_paths(std::int64_t x, std::int64_t t, Dir end, Dir start,
                         std::int64_t corners) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (corners < 0 || corners > t - 1) return 0;
  if (x < -t || x > t || (x + t) % 2 != 0) return 0;

  // counts[slot][dir][r], advanced slice by slice.
  const auto r_dim = static_cast<std::size_t>(corners + 1);
  auto index = [r_dim](std::size_t slot, int d, std::int64_t r) {
    return (slot * 2 + static_cast<std::size_t>(d)) * r_dim + static_cast<std::size_t>(r);
  };
  std::vector<std::int64_t> cur(2 * 2 * r_dim, 0), next;
  cur[index(start == Dir::plus ? 1 : 0, start == Dir::plus ? 1 : 0, 0)] = 1;

  for (std::int64_t u = 1; u < t; ++u) {
    next.assign(static_cast<std::size_t>(u + 2) * 2 * r_dim, 0);
    for (std::int64_t xu = -u; xu <= u; xu += 2) {
      const std::size_t slot = static_cast<std::size_t>((xu + u) / 2);
      for (int d = 0; d < 2; ++d) {
        const int s = d == 1 ? 1 : -1;
        for (std::int64_t r = 0; r <= corners; ++r) {
          const std::int64_t c = cur[index(slot, d, r)];
          if (c == 0) continue;
          const std::size_t straight = static_cast<std::size_t>((xu + s + u + 1) / 2);
          next[index(straight, d, r)] += c;
          if (r + 1 <= corners) {
            const std::size_t turned = static_cast<std::size_t>((xu - s + u + 1) / 2);
            next[index(turned, 1 - d, r + 1)] += c;
          }
        }
      }
    }
    cur.swap(next);
  }
  const std::size_t slot = static_cast<std::size_t>((x + t) / 2);
  return cur[index(slot, end == Dir::plus ? 1 : 0, corners)];
}

double table_max_abs_diff(const KernelTable& a, const KernelTable& b) {
  if (a.params().t_max != b.params().t_max || a.start() != b.start())
    return std::numeric_limits<double>::infinity();
  double max_diff = 0.0;
  bool presence_mismatch = false;
  a.for_each_present([&](std::int64_t t, std::int64_t x, Dir end, const KernelCell& ca) {
    const KernelCell& cb = b.cell({x, t}, end);
    if (!cb.present) presence_mismatch = true;
    for (int r = 0; r < 4; ++r)
      max_diff = std::max(max_diff, std::abs(ca.w[static_cast<std::size_t>(r)] -
                                             cb.w[static_cast<std::size_t>(r)]));
  });
  b.for_each_present([&](std::int64_t t, std::int64_t x, Dir end, const KernelCell&) {
    if (!a.cell({x, t}, end).present) presence_mismatch = true;
  });
  return presence_mismatch ? std::numeric_limits<double>::infinity() : max_diff;
}

}  // namespace chessboard
