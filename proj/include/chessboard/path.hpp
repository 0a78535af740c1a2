#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chessboard {

// Direction of one unit step along x. Steps advance t by one lattice unit
// and x by sign(dir), so every path lives on the light-cone sublattice
// x == t (mod 2).
enum class Dir : std::int8_t { minus = -1, plus = +1 };

constexpr int sign(Dir d) { return static_cast<int>(d); }
constexpr Dir flip(Dir d) { return static_cast<Dir>(-static_cast<std::int8_t>(d)); }
constexpr Dir dir_from_sign(int s) { return s > 0 ? Dir::plus : Dir::minus; }

// Lattice site in units of the lattice spacing.
struct Site {
  std::int64_t x = 0;
  std::int64_t t = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

// Maximal run of equal-direction steps (a domain in the Ising picture).
struct Leg {
  Dir dir = Dir::plus;
  std::int64_t len = 0;
  friend bool operator==(const Leg&, const Leg&) = default;
};

using LegSeq = std::vector<Leg>;

// A chessboard trajectory: a nonempty sequence of unit steps starting at
// the origin. Immutable after construction.
class Path {
 public:
  explicit Path(std::vector<Dir> steps);

  // Parses a string over {+,-}, one character per step.
  static Path parse(std::string_view text);
  std::string str() const;

  std::size_t size() const { return steps_.size(); }
  Dir operator[](std::size_t i) const { return steps_[i]; }
  const std::vector<Dir>& steps() const { return steps_; }
  std::span<const Dir> span() const { return steps_; }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<Dir> steps_;
};

// Number of adjacent step pairs with opposite sign (R).
std::int64_t corner_count(std::span<const Dir> steps);
inline std::int64_t corner_count(const Path& p) { return corner_count(p.span()); }

// Run-length encoding of a path into alternating legs; R + 1 legs.
LegSeq to_legs(std::span<const Dir> steps);
inline LegSeq to_legs(const Path& p) { return to_legs(p.span()); }

// Expands a leg sequence back to steps. Rejects empty, non-alternating or
// non-positive-length input.
Path from_legs(const LegSeq& legs);

// The n + 1 visited sites, starting at (0,0).
std::vector<Site> positions(const Path& p);

// Endpoint of a step sequence started at the origin.
Site end_site(std::span<const Dir> steps);

}  // namespace chessboard
