// Times the serial reference against the OpenMP shard runner on the same
// configuration and verifies that both produce identical counts.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "chessboard/montecarlo.hpp"

using namespace chessboard;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  SimConfig cfg;
  cfg.n_steps = 30;
  cfg.corner_prob = 0.5;
  cfg.loops = 500000;
  cfg.seed = 2024;
  cfg.workers = 8;
  if (argc > 1) cfg.n_steps = std::stoll(argv[1]);
  if (argc > 2) cfg.loops = std::stoll(argv[2]);
  if (argc > 3) cfg.workers = std::stoll(argv[3]);
  validate(cfg);

  std::printf("bench: n_steps=%lld loops=%lld workers=%lld\n",
              static_cast<long long>(cfg.n_steps), static_cast<long long>(cfg.loops),
              static_cast<long long>(cfg.workers));

  const auto t_serial = Clock::now();
  const ChargeLattice serial = run_serial(cfg);
  const double s_serial = seconds_since(t_serial);
  std::printf("serial:   %8.3f s  (%.2e loops/s)\n", s_serial,
              static_cast<double>(cfg.loops) / s_serial);

  const auto t_par = Clock::now();
  const ChargeLattice parallel = run(cfg);
  const double s_par = seconds_since(t_par);
  std::printf("parallel: %8.3f s  (%.2e loops/s, speedup %.2fx)\n", s_par,
              static_cast<double>(cfg.loops) / s_par, s_serial / s_par);

  if (serial.counts != parallel.counts || serial.max_t != parallel.max_t) {
    std::printf("FAIL: parallel counts differ from serial reference\n");
    return 1;
  }
  std::printf("OK: parallel counts identical to serial reference\n");
  return 0;
}
