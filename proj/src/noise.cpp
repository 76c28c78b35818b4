#include "cqw/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cqw/error.hpp"
#include "cqw/parallel.hpp"

namespace cqw {

NoiseProfile sample_noise(int n_sites, double phi_max, std::uint64_t seed,
                          std::uint64_t realization) {
  // Two-site registers are allowed here so one-qubit walk circuits can be noisy.
  require(n_sites >= 1, ErrorCode::kInvalidArgument, "noise needs at least one site");
  require(std::isfinite(phi_max) && phi_max >= 0.0 && phi_max <= kPi, ErrorCode::kOutOfRange,
          "noise level must lie in [0, pi], got " + std::to_string(phi_max));
  NoiseProfile p;
  p.n_sites = n_sites;
  p.phi_max = phi_max;
  p.seed = seed;
  p.realization = realization;
  p.phases.resize(static_cast<size_t>(n_sites));

  // A fresh engine per (seed, realization) keeps every realization
  // independent of how many others were drawn before it.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(realization),
                    static_cast<std::uint32_t>(realization >> 32)};
  std::mt19937_64 engine(seq);
  for (auto& phase : p.phases) {
    // 53 random bits -> u in [0, 1); formed by hand so the value does not
    // depend on the standard library's distribution implementation.
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    phase = phi_max == 0.0 ? 0.0 : phi_max * (2.0 * u - 1.0);
  }
  return p;
}

StepOperator build_noisy_step(const StepOperator& step, const NoiseProfile& noise) {
  require(noise.n_sites == step.n_sites() &&
              static_cast<int>(noise.phases.size()) == step.n_sites(),
          ErrorCode::kDimensionMismatch, "noise profile does not match the step operator size");
  std::vector<double> phases = noise.phases;
  if (step.noisy()) {
    for (size_t i = 0; i < phases.size(); ++i) phases[i] += step.site_phases()[i];
  }
  return StepOperator(step.n_sites(), step.coin(), std::move(phases));
}

double median(std::vector<double> values) { return box_stats(std::move(values)).median; }

BoxStats box_stats(std::vector<double> values) {
  require(!values.empty(), ErrorCode::kInvalidArgument, "statistics of an empty sample");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

PrEnsemble noisy_pr_ensemble(int n_sites, const CoinParams& coin, double phi_max,
                             int n_realizations, std::uint64_t seed, int threads) {
  require(n_realizations >= 1, ErrorCode::kInvalidArgument, "need at least one realization");
  const StepOperator clean = build_step(n_sites, coin);
  std::vector<std::vector<double>> per_state(static_cast<size_t>(n_realizations));
  std::vector<double> means(static_cast<size_t>(n_realizations));
  parallel_for(static_cast<size_t>(n_realizations), threads, [&](size_t r) {
    try {
      const auto noise = sample_noise(n_sites, phi_max, seed, r);
      const auto report = numerical_spectrum(build_noisy_step(clean, noise));
      per_state[r] = report.participation_ratios();
      means[r] = mean_pr(report);
    } catch (const Error& e) {
      throw Error(e.code(), "realization " + std::to_string(r) + ": " + e.what());
    }
  });
  PrEnsemble out;
  out.phi_max = phi_max;
  out.mean_pr = means;
  out.stats = box_stats(means);
  for (const auto& v : per_state) out.pooled_pr.insert(out.pooled_pr.end(), v.begin(), v.end());
  out.pooled_stats = box_stats(out.pooled_pr);
  return out;
}

}  // namespace cqw
