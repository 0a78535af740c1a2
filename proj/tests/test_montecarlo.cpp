#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "chessboard/errors.hpp"
#include "chessboard/montecarlo.hpp"

using namespace chessboard;

namespace {

// Net deposit of every slice 1..max: must vanish for interior slices.
std::vector<std::int64_t> slice_sums(const ChargeLattice& lat) {
  std::vector<std::int64_t> sums(static_cast<std::size_t>(lat.layout.t_cap()) + 1, 0);
  lat.layout.for_each_bond([&](std::int64_t t, std::int64_t, Dir, Channel, std::size_t i) {
    sums[static_cast<std::size_t>(t)] += lat.counts[i];
  });
  return sums;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(SimConfig{0, 0.5, 1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SimConfig{3, -0.1, 1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SimConfig{3, 1.5, 1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SimConfig{3, 0.5, 0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SimConfig{3, 0.5, 1, 0, 0}), std::invalid_argument);
  CHECK_NOTHROW(validate(SimConfig{3, 0.5, 1, 0, 1}));
}

TEST_CASE("lattice layout geometry") {
  const LatticeLayout layout(6);
  CHECK(layout.size() == (2 + 3 + 4 + 5 + 6 + 7) * 4);
  CHECK(layout.valid_bond(1, 1, Dir::plus));
  CHECK_FALSE(layout.valid_bond(1, 1, Dir::minus));  // lower end (2,0) off-cone
  CHECK(layout.valid_bond(2, 0, Dir::minus));
  CHECK_FALSE(layout.valid_bond(2, 1, Dir::plus));  // parity
  CHECK_FALSE(layout.valid_bond(7, 1, Dir::plus));  // beyond cap
  CHECK_FALSE(layout.valid_bond(3, -3, Dir::plus)); // lower end (-4,2) off-cone
  CHECK(layout.valid_bond(3, -3, Dir::minus));

  // Flat indices of valid bonds are unique and in range.
  std::vector<bool> seen(layout.size(), false);
  std::size_t n_valid = 0;
  layout.for_each_bond([&](std::int64_t, std::int64_t, Dir, Channel, std::size_t i) {
    REQUIRE(i < layout.size());
    CHECK_FALSE(seen[i]);
    seen[i] = true;
    ++n_valid;
  });
  // Slice t has t+1 sites; all four (sigma, channel) keys are valid except
  // at the two cone edges, where one sigma is cut (2 keys each).
  std::size_t want = 0;
  for (std::int64_t t = 1; t <= 6; ++t) want += static_cast<std::size_t>(t + 1) * 4 - 4;
  CHECK(n_valid == want);
}

TEST_CASE("sample_path degenerate flip probabilities") {
  LoopRng rng(123, 0);
  CHECK(sample_path(5, 0.0, rng).str() == "+++++");
  CHECK(sample_path(4, 1.0, rng).str() == "+-+-");
  CHECK(sample_path(1, 0.7, rng).str() == "+");
}

TEST_CASE("sample_path corner-count mean") {
  const std::int64_t n = 21;
  const std::int64_t reps = 100000;
  std::int64_t corners = 0;
  for (std::int64_t i = 0; i < reps; ++i) {
    LoopRng rng(2024, static_cast<std::uint64_t>(i));
    corners += corner_count(sample_path(n, 0.5, rng).steps());
  }
  const double mean = static_cast<double>(corners) / static_cast<double>(reps);
  const double se = std::sqrt(static_cast<double>(n - 1) * 0.25 /
                              static_cast<double>(reps));
  CHECK(std::abs(mean - 10.0) <= 5.0 * se);
}

TEST_CASE("deposit: single-step loop") {
  ChargeLattice lat(SimConfig{1, 0.5, 1, 0, 1});
  deposit(entwine(Path::parse("+")), lat);
  CHECK(lat.count_at({1, 1}, Dir::plus, Channel::A) == 1);
  CHECK(lat.count_at({0, 2}, Dir::minus, Channel::A) == 1);
  CHECK(lat.count_at({-1, 1}, Dir::minus, Channel::B) == -1);
  CHECK(lat.count_at({0, 2}, Dir::plus, Channel::B) == -1);
  CHECK(lat.max_t == 2);
  std::int64_t total = 0;
  for (const std::int64_t c : lat.counts) total += std::abs(c);
  CHECK(total == 4);
}

TEST_CASE("deposit: three-step loop") {
  ChargeLattice lat(SimConfig{3, 0.5, 1, 0, 1});
  deposit(entwine(Path::parse("++-")), lat);
  CHECK(lat.count_at({1, 1}, Dir::plus, Channel::A) == 1);
  CHECK(lat.count_at({2, 2}, Dir::plus, Channel::A) == 1);
  CHECK(lat.count_at({1, 3}, Dir::minus, Channel::A) == 1);
  CHECK(lat.count_at({-1, 1}, Dir::minus, Channel::B) == -1);
  CHECK(lat.count_at({0, 2}, Dir::plus, Channel::B) == -1);
  CHECK(lat.count_at({1, 3}, Dir::plus, Channel::B) == -1);
  CHECK(lat.max_t == 3);
}

TEST_CASE("deposit: oversized loop is rejected") {
  ChargeLattice lat(SimConfig{1, 0.5, 1, 0, 1});
  CHECK_THROWS_AS(deposit(entwine(Path::parse("++")), lat), std::invalid_argument);
}

TEST_CASE("per-slice neutrality is exact") {
  const SimConfig cfg{9, 0.4, 500, 77, 1};
  const ChargeLattice lat = run_serial(cfg);
  const std::vector<std::int64_t> sums = slice_sums(lat);
  for (std::int64_t t = 1; t <= lat.max_t; ++t)
    CHECK(sums[static_cast<std::size_t>(t)] == 0);
}

TEST_CASE("run: deterministic zero-corner loop") {
  const ChargeLattice lat = run(SimConfig{3, 0.0, 1, 42, 1});
  CHECK(lat.loops_completed == 1);
  CHECK(lat.max_t == 6);
  // Extended path (+,+,+,-,-,-); twin (-,-,-,+,+,+).
  CHECK(lat.count_at({1, 1}, Dir::plus, Channel::A) == 1);
  CHECK(lat.count_at({2, 2}, Dir::plus, Channel::A) == 1);
  CHECK(lat.count_at({3, 3}, Dir::plus, Channel::A) == 1);
  CHECK(lat.count_at({2, 4}, Dir::minus, Channel::A) == 1);
  CHECK(lat.count_at({1, 5}, Dir::minus, Channel::A) == 1);
  CHECK(lat.count_at({0, 6}, Dir::minus, Channel::A) == 1);
  CHECK(lat.count_at({-1, 1}, Dir::minus, Channel::B) == -1);
  CHECK(lat.count_at({-2, 2}, Dir::minus, Channel::B) == -1);
  CHECK(lat.count_at({-3, 3}, Dir::minus, Channel::B) == -1);
  CHECK(lat.count_at({-2, 4}, Dir::plus, Channel::B) == -1);
  CHECK(lat.count_at({-1, 5}, Dir::plus, Channel::B) == -1);
  CHECK(lat.count_at({0, 6}, Dir::plus, Channel::B) == -1);
  std::int64_t total = 0;
  for (const std::int64_t c : lat.counts) total += std::abs(c);
  CHECK(total == 12);
}

TEST_CASE("first bond count equals completed loops") {
  for (const double p_c : {0.0, 0.3, 1.0}) {
    const ChargeLattice lat = run_serial(SimConfig{6, p_c, 400, 5, 1});
    CHECK(lat.count_at({1, 1}, Dir::plus, Channel::A) == 400);
  }
}

TEST_CASE("parallel run matches serial reference") {
  for (const std::int64_t workers : {1, 2, 4, 7}) {
    const SimConfig cfg{10, 0.3, 2000, 31415, workers};
    const ChargeLattice par = run(cfg);
    const ChargeLattice ser = run_serial(cfg);
    CHECK(par.loops_completed == ser.loops_completed);
    CHECK(par.max_t == ser.max_t);
    CHECK(par.counts == ser.counts);
  }
}

TEST_CASE("workers in excess of loops") {
  const SimConfig cfg{4, 0.5, 3, 9, 16};
  const ChargeLattice par = run(cfg);
  const ChargeLattice ser = run_serial(cfg);
  CHECK(par.counts == ser.counts);
}

TEST_CASE("merge identity, commutativity, and shard equivalence") {
  const SimConfig cfg{8, 0.5, 1000, 2718, 1};
  ChargeLattice a(cfg);
  ChargeLattice b(cfg);
  run_range(cfg, 0, 600, a);
  run_range(cfg, 600, 1000, b);

  const ChargeLattice empty(cfg);
  const ChargeLattice id = merge(a, empty);
  CHECK(id.counts == a.counts);
  CHECK(id.loops_completed == a.loops_completed);

  const ChargeLattice ab = merge(a, b);
  const ChargeLattice ba = merge(b, a);
  CHECK(ab.counts == ba.counts);
  CHECK(ab.loops_completed == 1000);

  const ChargeLattice whole = run_serial(cfg);
  CHECK(ab.counts == whole.counts);
  CHECK(std::max(a.max_t, b.max_t) == whole.max_t);

  ChargeLattice other(SimConfig{9, 0.5, 1000, 2718, 1});
  CHECK_THROWS_AS(merge(a, other), std::invalid_argument);
}

TEST_CASE("expected_lattice: one-step path") {
  const ExpectedLattice exp = expected_lattice(1, 0.3);
  CHECK(exp.max_t == 2);
  CHECK(exp.mean_at({1, 1}, Dir::plus, Channel::A) == 1.0);
  CHECK(exp.mean_at({0, 2}, Dir::minus, Channel::A) == 1.0);
  CHECK(exp.mean_at({-1, 1}, Dir::minus, Channel::B) == -1.0);
  CHECK(exp.mean_at({0, 2}, Dir::plus, Channel::B) == -1.0);
  CHECK(exp.touch_at({1, 1}, Dir::plus, Channel::A) == 1.0);
  CHECK(exp.mean_at({-1, 1}, Dir::plus, Channel::A) == 0.0);
}

TEST_CASE("expected_lattice: two-step average") {
  const ExpectedLattice exp = expected_lattice(2, 0.5);
  // Loop of (+,+): extension (+,+,-,-); loop of (+,-): twin (-,+,...)
  // Each base path has weight 1/2; check a few cells by hand.
  CHECK(exp.mean_at({1, 1}, Dir::plus, Channel::A) == 1.0);
  CHECK(exp.mean_at({2, 2}, Dir::plus, Channel::A) == 0.5);
  CHECK(exp.mean_at({0, 2}, Dir::minus, Channel::A) == 0.5);
  CHECK(exp.mean_at({-1, 1}, Dir::minus, Channel::B) == -1.0);

  // Test-side oracle: deposit both loops explicitly with weight 1/2.
  ExpectedLattice manual(2, 0.5);
  for (const char* s : {"++", "+-"}) {
    ChargeLattice lat(SimConfig{2, 0.5, 1, 0, 1});
    deposit(entwine(Path::parse(s)), lat);
    for (std::size_t i = 0; i < lat.counts.size(); ++i) {
      manual.mean[i] += 0.5 * static_cast<double>(lat.counts[i]);
      manual.touch[i] += 0.5 * static_cast<double>(lat.counts[i] != 0);
    }
  }
  for (std::size_t i = 0; i < exp.mean.size(); ++i) {
    CHECK(exp.mean[i] == doctest::Approx(manual.mean[i]).epsilon(1e-15));
    CHECK(exp.touch[i] == doctest::Approx(manual.touch[i]).epsilon(1e-15));
  }
}

TEST_CASE("expected_lattice: neutrality and guard") {
  const ExpectedLattice exp = expected_lattice(7, 0.35);
  std::vector<double> sums(static_cast<std::size_t>(exp.layout.t_cap()) + 1, 0.0);
  exp.layout.for_each_bond([&](std::int64_t t, std::int64_t, Dir, Channel, std::size_t i) {
    sums[static_cast<std::size_t>(t)] += exp.mean[i];
  });
  for (std::int64_t t = 1; t <= exp.max_t; ++t)
    CHECK(std::abs(sums[static_cast<std::size_t>(t)]) <= 1e-12);
  CHECK_THROWS_AS(expected_lattice(17, 0.5), GuardError);
}

TEST_CASE("monte carlo agrees with the exact expectation") {
  const std::int64_t n = 10;
  const double p_c = 0.5;
  const std::int64_t loops = 200000;
  const ChargeLattice lat = run(SimConfig{n, p_c, loops, 777, 4});
  const ExpectedLattice exp = expected_lattice(n, p_c);
  REQUIRE(lat.layout == exp.layout);
  int compared = 0;
  exp.layout.for_each_bond([&](std::int64_t, std::int64_t, Dir, Channel, std::size_t i) {
    const double mu = exp.mean[i];
    const double var = exp.touch[i] - mu * mu;  // deposits are 0 or ±1 per loop
    const double got = static_cast<double>(lat.counts[i]) / static_cast<double>(loops);
    if (var <= 0.0) {
      CHECK(got == doctest::Approx(mu).epsilon(1e-12));
      return;
    }
    const double se = std::sqrt(var / static_cast<double>(loops));
    CHECK(std::abs(got - mu) <= 5.0 * se);
    ++compared;
  });
  CHECK(compared > 100);
}
