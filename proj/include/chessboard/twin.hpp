#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chessboard/path.hpp"

namespace chessboard {

// Which of the two entwined paths a move belongs to: A is the (extended)
// original path, B its orthogonal twin.
enum class Channel : std::uint8_t { A = 0, B = 1 };

// One unit move of an entwined loop. space_dir is the direction of the
// underlying bond in the +t sense; a move advances (x, t) by
// (sign(space_dir) * time_dir, time_dir).
struct Move {
  Dir space_dir = Dir::plus;
  std::int8_t time_dir = 1;  // +1 ascending in t, -1 descending
  Channel channel = Channel::A;
  friend bool operator==(const Move&, const Move&) = default;
};

// Closed continuous space-time loop through a path and its orthogonal
// twin: all ascending moves first, then the complementary sections
// descending back to the origin.
struct EntwinedLoop {
  std::vector<Move> moves;
  std::int64_t height = 0;  // top time reached; moves.size() == 2 * height
};

// Appends a mirrored copy of the last leg when the corner count is even,
// so the result always has an odd corner count; odd-R paths pass through
// unchanged.
Path extend_even(const Path& p);

// The leg-permuted companion path: pairwise swap of the legs of the
// even-extended input. Starts opposite to the input and ends at the same
// site as the extended input.
Path orthogonal_twin(const Path& p);

// Sites where the extended path and its twin coincide, one per leg pair;
// the last entry is the common endpoint. Rejects b that is not the twin
// of a.
std::vector<Site> meeting_points(const Path& a, const Path& b);

// Feynman corner coloring of one step: +1 (blue) while the number of
// corners strictly before the step is 0 or 1 mod 4, -1 (red) for 2 or 3.
// step_index is 0-based.
int feynman_color(const Path& p, std::size_t step_index);

// Builds the entwined loop of a path: ascend the original and twin in
// alternating sections between meetings, then descend the complementary
// sections in reverse order.
EntwinedLoop entwine(const Path& p);

// Reusable buffers for the Monte Carlo hot loop.
struct EntwineWorkspace {
  std::vector<Leg> legs;
  std::vector<Dir> ext_steps;
  std::vector<Dir> twin_steps;
  std::vector<std::int64_t> meet_times;
};

// Allocation-free variant of entwine for preallocated workspaces.
void entwine_into(std::span<const Dir> path, EntwinedLoop& out, EntwineWorkspace& ws);

}  // namespace chessboard
