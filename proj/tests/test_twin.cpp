#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chessboard/twin.hpp"

using namespace chessboard;

namespace {

// Walks a loop and returns the visited (x,t) sites, origin included.
std::vector<Site> loop_sites(const EntwinedLoop& loop) {
  std::vector<Site> sites{{0, 0}};
  for (const Move& m : loop.moves) {
    const Site prev = sites.back();
    sites.push_back({prev.x + sign(m.space_dir) * m.time_dir, prev.t + m.time_dir});
  }
  return sites;
}

// Reassembles the step sequence of one channel, ordered by the time
// interval each move covers.
std::vector<Dir> channel_steps(const EntwinedLoop& loop, Channel ch) {
  std::vector<std::pair<std::int64_t, Dir>> keyed;
  std::vector<Site> sites = loop_sites(loop);
  for (std::size_t i = 0; i < loop.moves.size(); ++i) {
    if (loop.moves[i].channel != ch) continue;
    const std::int64_t t_low = std::min(sites[i].t, sites[i + 1].t);
    keyed.emplace_back(t_low, loop.moves[i].space_dir);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Dir> steps;
  for (const auto& [t, d] : keyed) steps.push_back(d);
  return steps;
}

Path random_path(std::mt19937_64& gen, int max_len, double p_c) {
  std::uniform_int_distribution<int> len_dist(1, max_len);
  std::bernoulli_distribution flip(p_c);
  std::bernoulli_distribution coin(0.5);
  const int n = len_dist(gen);
  std::vector<Dir> steps{coin(gen) ? Dir::plus : Dir::minus};
  for (int i = 1; i < n; ++i)
    steps.push_back(flip(gen) ? chessboard::flip(steps.back()) : steps.back());
  return Path(std::move(steps));
}

std::multiset<std::int64_t> leg_lengths(const Path& p) {
  std::multiset<std::int64_t> out;
  for (const Leg& l : to_legs(p.steps())) out.insert(l.len);
  return out;
}

}  // namespace

TEST_CASE("extend_even") {
  CHECK(extend_even(Path::parse("+")).str() == "+-");
  CHECK(extend_even(Path::parse("++-")).str() == "++-");
  CHECK(extend_even(Path::parse("+-+")).str() == "+-+-");
  CHECK(extend_even(Path::parse("--++")).str() == "--++");   // R=1, odd
  CHECK(extend_even(Path::parse("--++-")).str() == "--++-+");  // R=2, leg len 1
  CHECK(corner_count(extend_even(Path::parse("+")).steps()) % 2 == 1);
}

TEST_CASE("orthogonal twin on hand cases") {
  CHECK(orthogonal_twin(Path::parse("+")).str() == "-+");
  CHECK(orthogonal_twin(Path::parse("++-")).str() == "-++");
  CHECK(orthogonal_twin(Path::parse("+-+")).str() == "-+-+");
  // R=3: legs (l1,l2,l3,l4) -> (l2,l1,l4,l3)
  CHECK(orthogonal_twin(Path::parse("+-+-")).str() == "-+-+");
  CHECK(orthogonal_twin(Path::parse("++--+-")).str() == "--++-+");
}

TEST_CASE("the listed zero-corner rule equals the generic pairswap") {
  // (-l1, l1) must coincide with pairswapping the extended path (l1, -l1).
  for (int len = 1; len <= 5; ++len)
    for (const Dir d : {Dir::plus, Dir::minus}) {
      const Path p = from_legs({{d, len}});
      const Path ext = extend_even(p);
      const LegSeq ext_legs = to_legs(ext.steps());
      const Path generic = from_legs({ext_legs[1], ext_legs[0]});
      CHECK(orthogonal_twin(p).steps() == generic.steps());
    }
}

TEST_CASE("meeting points on hand cases") {
  const auto m1 = meeting_points(Path::parse("++-"), Path::parse("-++"));
  CHECK(m1 == std::vector<Site>{{1, 3}});
  const auto m2 = meeting_points(Path::parse("+-+"), Path::parse("-+-+"));
  CHECK(m2 == std::vector<Site>{{0, 2}, {0, 4}});
  const auto m3 = meeting_points(Path::parse("+"), Path::parse("-+"));
  CHECK(m3 == std::vector<Site>{{0, 2}});
}

TEST_CASE("meeting points reject non-twins") {
  CHECK_THROWS_AS(meeting_points(Path::parse("++-"), Path::parse("++-")),
                  std::invalid_argument);
  CHECK_THROWS_AS(meeting_points(Path::parse("+"), Path::parse("+-")),
                  std::invalid_argument);
}

TEST_CASE("feynman coloring") {
  const Path a = Path::parse("++-");
  for (std::size_t i = 0; i < 3; ++i) CHECK(feynman_color(a, i) == 1);
  const Path b = Path::parse("+-+-");
  CHECK(feynman_color(b, 0) == 1);
  CHECK(feynman_color(b, 1) == 1);
  CHECK(feynman_color(b, 2) == -1);
  CHECK(feynman_color(b, 3) == -1);
  const Path c = Path::parse("+-+-+-");
  CHECK(feynman_color(c, 4) == 1);
  CHECK(feynman_color(c, 5) == 1);
}

TEST_CASE("entwine: single step") {
  const EntwinedLoop loop = entwine(Path::parse("+"));
  REQUIRE(loop.moves.size() == 4);
  CHECK(loop.height == 2);
  CHECK(loop.moves[0] == Move{Dir::plus, 1, Channel::A});
  CHECK(loop.moves[1] == Move{Dir::minus, 1, Channel::A});
  CHECK(loop.moves[2] == Move{Dir::plus, -1, Channel::B});
  CHECK(loop.moves[3] == Move{Dir::minus, -1, Channel::B});
  const std::vector<Site> sites = loop_sites(loop);
  CHECK(sites == std::vector<Site>{{0, 0}, {1, 1}, {0, 2}, {-1, 1}, {0, 0}});
}

TEST_CASE("entwine: one meeting keeps channels contiguous") {
  const EntwinedLoop loop = entwine(Path::parse("++-"));
  REQUIRE(loop.moves.size() == 6);
  CHECK(loop.height == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(loop.moves[static_cast<std::size_t>(i)].channel == Channel::A);
    CHECK(loop.moves[static_cast<std::size_t>(i)].time_dir == 1);
    CHECK(loop.moves[static_cast<std::size_t>(i + 3)].channel == Channel::B);
    CHECK(loop.moves[static_cast<std::size_t>(i + 3)].time_dir == -1);
  }
  const std::vector<Site> sites = loop_sites(loop);
  CHECK(sites[3] == Site{1, 3});
  CHECK(sites[6] == Site{0, 0});
}

TEST_CASE("entwine: two meetings alternate channels") {
  const EntwinedLoop loop = entwine(Path::parse("+-+"));
  REQUIRE(loop.moves.size() == 8);
  CHECK(loop.height == 4);
  const std::vector<Channel> want{Channel::A, Channel::A, Channel::B, Channel::B,
                                  Channel::A, Channel::A, Channel::B, Channel::B};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(loop.moves[i].channel == want[i]);
    CHECK(loop.moves[i].time_dir == (i < 4 ? 1 : -1));
  }
  const std::vector<Site> sites = loop_sites(loop);
  CHECK(sites[2] == Site{0, 2});  // channel switch happens at the meeting
  CHECK(sites[4] == Site{0, 4});
  CHECK(sites[8] == Site{0, 0});
}

TEST_CASE("twin and loop properties on random paths") {
  std::mt19937_64 gen(20240517);
  int checked = 0;
  for (const double p_c : {0.1, 0.5, 0.9}) {
    for (int rep = 0; rep < 700; ++rep) {
      const Path p = random_path(gen, 64, p_c);
      const Path ext = extend_even(p);
      const Path twin = orthogonal_twin(p);
      const std::int64_t r_ext = corner_count(ext.steps());

      // Leg multiset preserved, opposite start, same endpoint.
      CHECK(leg_lengths(twin) == leg_lengths(ext));
      CHECK(twin.steps().front() == flip(p.steps().front()));
      CHECK(end_site(twin.steps()) == end_site(ext.steps()));

      // Corner parity and odd-R involution.
      CHECK(corner_count(twin.steps()) == r_ext);
      if (corner_count(p.steps()) % 2 == 1)
        CHECK(orthogonal_twin(twin).steps() == p.steps());

      // Meeting structure: r_ext is odd, so ceil((R'+1)/2) = (R'+1)/2.
      const std::vector<Site> meets = meeting_points(p, twin);
      CHECK(static_cast<std::int64_t>(meets.size()) == (r_ext + 1) / 2);
      CHECK(meets.back() == end_site(ext.steps()));
      const std::vector<Site> a_pos = positions(ext);
      const LegSeq legs = to_legs(ext.steps());
      std::int64_t covered = 0;
      for (std::size_t k = 0; k + 1 < legs.size(); k += 2) {
        covered += legs[k].len + legs[k + 1].len;
        CHECK(meets[k / 2] == a_pos[static_cast<std::size_t>(covered)]);
      }

      // Loop invariants: closure, continuity, nonnegative time, ascent
      // before descent, double coverage, per-slice neutrality.
      const EntwinedLoop loop = entwine(p);
      CHECK(loop.moves.size() == 2 * ext.steps().size());
      CHECK(loop.height == static_cast<std::int64_t>(ext.steps().size()));
      const std::vector<Site> sites = loop_sites(loop);
      CHECK(sites.back() == Site{0, 0});
      bool descending = false;
      std::map<std::int64_t, int> slice_net;
      for (std::size_t i = 0; i < loop.moves.size(); ++i) {
        CHECK(sites[i].t >= 0);
        if (loop.moves[i].time_dir == -1) descending = true;
        if (descending) CHECK(loop.moves[i].time_dir == -1);
        slice_net[std::max(sites[i].t, sites[i + 1].t)] += loop.moves[i].time_dir;
      }
      for (const auto& [t, net] : slice_net) CHECK(net == 0);
      CHECK(channel_steps(loop, Channel::A) == ext.steps());
      CHECK(channel_steps(loop, Channel::B) == twin.steps());

      // Color/time-direction agreement: the move covering time interval
      // [t, t+1) on channel A carries the blue/red color of step t of the
      // extended path; channel B carries the negated color of the twin.
      std::vector<int> a_dir(ext.steps().size(), 0);
      std::vector<int> b_dir(twin.steps().size(), 0);
      for (std::size_t i = 0; i < loop.moves.size(); ++i) {
        const std::int64_t t_low = std::min(sites[i].t, sites[i + 1].t);
        if (loop.moves[i].channel == Channel::A)
          a_dir[static_cast<std::size_t>(t_low)] = loop.moves[i].time_dir;
        else
          b_dir[static_cast<std::size_t>(t_low)] = loop.moves[i].time_dir;
      }
      for (std::size_t i = 0; i < ext.steps().size(); ++i)
        CHECK(a_dir[i] == feynman_color(ext, i));
      for (std::size_t i = 0; i < twin.steps().size(); ++i)
        CHECK(b_dir[i] == -feynman_color(twin, i));
      ++checked;
    }
  }
  CHECK(checked == 2100);
}

TEST_CASE("entwine_into matches entwine") {
  std::mt19937_64 gen(99);
  EntwinedLoop out;
  EntwineWorkspace ws;
  for (int rep = 0; rep < 500; ++rep) {
    const Path p = random_path(gen, 40, 0.4);
    entwine_into(p.steps(), out, ws);
    const EntwinedLoop want = entwine(p);
    CHECK(out.moves == want.moves);
    CHECK(out.height == want.height);
  }
}
