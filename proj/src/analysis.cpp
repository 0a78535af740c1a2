#include "chessboard/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace chessboard {

RhoSlice rho_from_counts(const ChargeLattice& lattice, std::int64_t t) {
  if (t < 1 || t > lattice.max_t)
    throw std::invalid_argument("rho_from_counts: slice out of range");
  RhoSlice out;
  out.t = t;
  for (std::int64_t x = -t; x <= t; x += 2) {
    out.x.push_back(x);
    out.rho_plus.push_back(lattice.count_at({x, t}, Dir::plus, Channel::A) +
                           lattice.count_at({x, t}, Dir::plus, Channel::B));
    out.rho_minus.push_back(lattice.count_at({x, t}, Dir::minus, Channel::A) +
                            lattice.count_at({x, t}, Dir::minus, Channel::B));
  }
  return out;
}

namespace {

double signed_at(const KernelTable& table, std::int64_t x, std::int64_t t, Dir end) {
  return signed_kernel(table.cell({x, t}, end));
}

}  // namespace

SlicePrediction exact_prediction(const KernelTable& plus_table, std::int64_t t) {
  if (plus_table.start() != Dir::plus)
    throw std::invalid_argument("exact_prediction needs a start=+ table");
  if (t < 1 || t > plus_table.params().t_max)
    throw std::invalid_argument("exact_prediction: slice out of range");
  SlicePrediction out;
  out.t = t;
  for (std::int64_t x = -t; x <= t; x += 2) {
    // G[sigma, start=-](x) = G[-sigma, start=+](-x) by mirror symmetry.
    const double g_pp = signed_at(plus_table, x, t, Dir::plus);
    const double g_mp = signed_at(plus_table, x, t, Dir::minus);
    const double g_pm = signed_at(plus_table, -x, t, Dir::minus);
    const double g_mm = signed_at(plus_table, -x, t, Dir::plus);
    out.x.push_back(x);
    out.value.push_back((g_pp - g_pm) - (g_mp - g_mm));
  }
  return out;
}

SlicePrediction exact_prediction(double corner_weight, std::int64_t t) {
  return exact_prediction(kernel_table({t, corner_weight}, Dir::plus), t);
}

SliceComparison compare_slice(const ChargeLattice& lattice, std::int64_t t) {
  const SimConfig& cfg = lattice.config;
  if (t < 1 || t > cfg.n_steps)
    throw std::invalid_argument("compare_slice: slice out of range (1 <= t <= n_steps)");
  if (lattice.loops_completed < 1)
    throw std::invalid_argument("compare_slice: no completed loops");
  if (cfg.corner_prob >= 1.0)
    throw std::invalid_argument("compare_slice: corner_prob = 1 has no finite corner weight");

  const double a_eff = cfg.corner_prob / (1.0 - cfg.corner_prob);
  const KernelTable table = kernel_table({t, a_eff}, Dir::plus);
  const SlicePrediction pred = exact_prediction(table, t);
  const RhoSlice rho = rho_from_counts(lattice, t);
  const auto loops = static_cast<double>(lattice.loops_completed);
  const double decay = std::pow(1.0 - cfg.corner_prob, static_cast<double>(t - 1));

  SliceComparison cmp;
  cmp.t = t;
  if (2 * t > cfg.n_steps)
    cmp.warning = "slice beyond n_steps/2; twin deposits may carry censoring bias";

  std::vector<double> se(pred.x.size(), 0.0);
  double dot = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < pred.x.size(); ++i) {
    const std::int64_t x = pred.x[i];
    SliceComparison::Entry e;
    e.x = x;
    e.mc = static_cast<double>(rho.rho_plus[i] - rho.rho_minus[i]) / loops;
    e.exact = pred.value[i];
    cmp.entries.push_back(e);
    dot += e.mc * e.exact;
    norm += e.mc * e.mc;

    // Per-cell variance of a {-1,0,+1} deposit: touch - mean^2, with both
    // taken from the kernel model (exact for channel A, mirror for B).
    double var = 0.0;
    for (Dir sigma : {Dir::minus, Dir::plus}) {
      const double mu_a = decay * signed_at(table, x, t, sigma);
      const double q_a = decay * unsigned_sum(table.cell({x, t}, sigma));
      const double mu_b = -decay * signed_at(table, -x, t, flip(sigma));
      const double q_b = decay * unsigned_sum(table.cell({-x, t}, flip(sigma)));
      var += (q_a - mu_a * mu_a) + (q_b - mu_b * mu_b);
    }
    se[i] = std::sqrt(std::max(var, 0.0) / loops);
  }

  cmp.scale = norm > 0.0 ? dot / norm : 1.0;

  double chi2 = 0.0;
  for (std::size_t i = 0; i < cmp.entries.size(); ++i) {
    SliceComparison::Entry& e = cmp.entries[i];
    const double resid = cmp.scale * e.mc - e.exact;
    const double denom = std::abs(cmp.scale) * se[i];
    if (denom > 0.0) {
      e.z = resid / denom;
    } else if (std::abs(resid) <= 1e-12 * std::max(1.0, std::abs(e.exact))) {
      e.z = 0.0;
    } else {
      e.z = resid > 0.0 ? 1e99 : -1e99;
    }
    chi2 += e.z * e.z;
    cmp.max_abs_z = std::max(cmp.max_abs_z, std::abs(e.z));
  }
  const auto dof = static_cast<double>(cmp.entries.size() > 1 ? cmp.entries.size() - 1 : 1);
  cmp.reduced_chi2 = chi2 / dof;
  return cmp;
}

}  // namespace chessboard
