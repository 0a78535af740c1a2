#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chessboard/kernel.hpp"
#include "chessboard/montecarlo.hpp"

namespace chessboard {

// Net signed deposits at one slice, split by arrival direction and summed
// over channels.
struct RhoSlice {
  std::int64_t t = 0;
  std::vector<std::int64_t> x;  // all sites with |x| <= t, x == t (mod 2)
  std::vector<std::int64_t> rho_plus;
  std::vector<std::int64_t> rho_minus;
};

RhoSlice rho_from_counts(const ChargeLattice& lattice, std::int64_t t);

// The kernel combination the net charge reproduces:
//   sum_sigma sigma * (G[sigma, start=+] - G[sigma, start=-])
// per site, with the start=- values read off the start=+ table by mirror
// symmetry. Proportional to rho_plus - rho_minus up to one global scale.
struct SlicePrediction {
  std::int64_t t = 0;
  std::vector<std::int64_t> x;
  std::vector<double> value;
};

// plus_table must have start = + and t_max >= t.
SlicePrediction exact_prediction(const KernelTable& plus_table, std::int64_t t);

// Convenience: builds a start=+ table of exactly t slices.
SlicePrediction exact_prediction(double corner_weight, std::int64_t t);

struct SliceComparison {
  struct Entry {
    std::int64_t x = 0;
    double mc = 0.0;     // (rho_plus - rho_minus) / loops
    double exact = 0.0;  // kernel prediction
    double z = 0.0;
  };
  std::int64_t t = 0;
  std::vector<Entry> entries;
  double scale = 1.0;  // least-squares minimizer of sum (scale*mc - exact)^2
  double reduced_chi2 = 0.0;
  double max_abs_z = 0.0;
  std::string warning;  // set when t exceeds the trusted range n/2
};

// Compares Monte Carlo charge density against the exact kernel prediction
// at corner weight p_c / (1 - p_c). Valid for 1 <= t <= n_steps (the
// extension region above n_steps is excluded from kernel comparisons);
// slices above n/2 carry a warning. Per-site standard errors come from
// the exact per-cell crossing probabilities, ignoring cross-cell
// correlations within a loop.
SliceComparison compare_slice(const ChargeLattice& lattice, std::int64_t t);

}  // namespace chessboard
