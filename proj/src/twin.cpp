#include "chessboard/twin.hpp"

#include <stdexcept>

namespace chessboard {

namespace {

// Legs of the even-extended path, into a reusable buffer. Always an even
// count: R odd keeps the R+1 legs, R even appends the mirrored last leg.
void extended_legs_into(std::span<const Dir> steps, std::vector<Leg>& legs) {
  legs.clear();
  for (Dir d : steps) {
    if (!legs.empty() && legs.back().dir == d) {
      ++legs.back().len;
    } else {
      legs.push_back({d, 1});
    }
  }
  if (legs.size() % 2 == 1) legs.push_back({flip(legs.back().dir), legs.back().len});
}

void expand_legs_into(const std::vector<Leg>& legs, std::vector<Dir>& steps) {
  steps.clear();
  for (const Leg& l : legs)
    steps.insert(steps.end(), static_cast<std::size_t>(l.len), l.dir);
}

// Swaps adjacent leg pairs in place: (l1,l2,l3,l4,...) -> (l2,l1,l4,l3,...).
// This single rule covers every row of the twin permutation once the input
// is even-extended, including R = 0 where it yields (-l1, l1).
void pairswap_in_place(std::vector<Leg>& legs) {
  for (std::size_t i = 0; i + 1 < legs.size(); i += 2) std::swap(legs[i], legs[i + 1]);
}

}  // namespace

Path extend_even(const Path& p) {
  if (corner_count(p) % 2 == 1) return p;
  LegSeq legs = to_legs(p);
  legs.push_back({flip(legs.back().dir), legs.back().len});
  return from_legs(legs);
}

Path orthogonal_twin(const Path& p) {
  std::vector<Leg> legs;
  extended_legs_into(p.span(), legs);
  pairswap_in_place(legs);
  return from_legs(legs);
}

std::vector<Site> meeting_points(const Path& a, const Path& b) {
  if (b != orthogonal_twin(a))
    throw std::invalid_argument("meeting_points: b is not the orthogonal twin of a");
  std::vector<Leg> legs;
  extended_legs_into(a.span(), legs);
  std::vector<Site> meetings;
  Site s{0, 0};
  for (std::size_t i = 0; i < legs.size(); ++i) {
    s.x += sign(legs[i].dir) * legs[i].len;
    s.t += legs[i].len;
    if (i % 2 == 1) meetings.push_back(s);
  }
  return meetings;
}

int feynman_color(const Path& p, std::size_t step_index) {
  if (step_index >= p.size()) throw std::invalid_argument("step index out of range");
  std::int64_t corners = 0;
  for (std::size_t k = 1; k <= step_index; ++k)
    if (p[k] != p[k - 1]) ++corners;
  return corners % 4 < 2 ? 1 : -1;
}

EntwinedLoop entwine(const Path& p) {
  EntwinedLoop loop;
  EntwineWorkspace ws;
  entwine_into(p.span(), loop, ws);
  return loop;
}

void entwine_into(std::span<const Dir> path, EntwinedLoop& out, EntwineWorkspace& ws) {
  if (path.empty()) throw std::invalid_argument("path must have at least one step");

  extended_legs_into(path, ws.legs);
  expand_legs_into(ws.legs, ws.ext_steps);
  pairswap_in_place(ws.legs);
  expand_legs_into(ws.legs, ws.twin_steps);

  // Meeting times: cumulative step counts after each leg pair. Leg lengths
  // of the twin are a pairwise permutation, so both paths hit them together.
  ws.meet_times.clear();
  std::int64_t t = 0;
  for (std::size_t i = 0; i < ws.legs.size(); ++i) {
    t += ws.legs[i].len;
    if (i % 2 == 1) ws.meet_times.push_back(t);
  }

  const std::int64_t height = static_cast<std::int64_t>(ws.ext_steps.size());
  out.height = height;
  out.moves.clear();
  out.moves.reserve(static_cast<std::size_t>(2 * height));

  // Ascent: sections between consecutive meetings, alternating A, B, A, ...
  std::int64_t from = 0;
  for (std::size_t j = 0; j < ws.meet_times.size(); ++j) {
    const bool on_a = j % 2 == 0;
    const std::vector<Dir>& src = on_a ? ws.ext_steps : ws.twin_steps;
    for (std::int64_t k = from; k < ws.meet_times[j]; ++k)
      out.moves.push_back({src[static_cast<std::size_t>(k)], 1,
                           on_a ? Channel::A : Channel::B});
    from = ws.meet_times[j];
  }

  // Descent: the complementary sections (B, A, B, ...) in reverse order,
  // each traversed downward.
  for (std::size_t j = ws.meet_times.size(); j-- > 0;) {
    const bool on_b = j % 2 == 0;
    const std::vector<Dir>& src = on_b ? ws.twin_steps : ws.ext_steps;
    const std::int64_t lo = j == 0 ? 0 : ws.meet_times[j - 1];
    for (std::int64_t k = ws.meet_times[j]; k-- > lo;)
      out.moves.push_back({src[static_cast<std::size_t>(k)], -1,
                           on_b ? Channel::B : Channel::A});
  }
}

}  // namespace chessboard
