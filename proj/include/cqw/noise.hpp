#pragma once

#include <cstdint>
#include <vector>

#include "cqw/spectrum.hpp"

namespace cqw {

/// Static (quenched) site phases drawn uniformly from [-phi_max, phi_max].
struct NoiseProfile {
  int n_sites = 0;
  double phi_max = 0.0;
  std::vector<double> phases;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
};

/// Phases are a pure function of (seed, realization, N, phi_max). The unit
/// draws depend only on (seed, realization), so one realization evaluated at
/// several noise levels shares its random numbers.
NoiseProfile sample_noise(int n_sites, double phi_max, std::uint64_t seed,
                          std::uint64_t realization);

/// (D (x) 1) S with D = diag(e^{i phase_s}).
StepOperator build_noisy_step(const StepOperator& step, const NoiseProfile& noise);

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Linear-interpolated quantiles (type 7) of an unsorted sample.
BoxStats box_stats(std::vector<double> values);
double median(std::vector<double> values);

struct PrEnsemble {
  double phi_max = 0.0;
  std::vector<double> mean_pr;  // one entry per realization, index order
  BoxStats stats;               // over mean_pr
  std::vector<double> pooled_pr;  // every eigenstate of every realization
  BoxStats pooled_stats;
};

PrEnsemble noisy_pr_ensemble(int n_sites, const CoinParams& coin, double phi_max,
                             int n_realizations, std::uint64_t seed, int threads = 0);

}  // namespace cqw
