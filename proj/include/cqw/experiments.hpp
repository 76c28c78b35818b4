#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqw/coin.hpp"
#include "cqw/dynamics.hpp"
#include "cqw/noise.hpp"

namespace cqw {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct NamedCoin {
  std::string name;
  CoinParams params;
};

NamedCoin named_coin(std::string_view preset);

enum class PrMapSlice {
  kGammaVsEqualPhases,  // gamma in [0, pi/2] x theta = phi in [0, 2pi]
  kPhasesAtQuarterPi,   // gamma = pi/4, theta x phi in [0, 2pi]^2
};

struct PrMap {
  PrMapSlice slice;
  int n_sites = 0;
  int resolution = 0;
  int walker_steps = 0;
  std::vector<double> x_axis;  // gamma (slice a) or theta (slice d)
  std::vector<double> y_axis;  // theta = phi (slice a) or phi (slice d)
  std::vector<double> mean_pr;    // row-major [iy * resolution + ix]
  std::vector<double> walker_pr;  // empty when walker_steps == 0
};

/// Eigenstate-averaged PR over a coin grid. When walker_steps > 0 the PR of
/// the walker distribution after that many steps from floor(N/2), |+> is
/// stored alongside.
PrMap coin_pr_map(int n_sites, int resolution, PrMapSlice slice, int walker_steps = 0,
                  int threads = 0);

struct BetaLevel {
  double phi_max = 0.0;
  std::vector<std::optional<FitResult>> fits;  // per realization
  std::vector<std::string> failures;           // "realization <i>: <reason>"
  std::vector<double> betas;                   // successful fits, realization order
  BoxStats beta_stats;
  std::optional<FitResult> ensemble_mean_fit;  // fit of the realization-averaged MSD
};

struct BetaSweep {
  int n_sites = 0;
  std::string coin;
  int m_lo = 0;
  int m_hi = 0;
  FitMethod method = FitMethod::kNonlinear;
  std::vector<BetaLevel> levels;
  std::optional<double> crossover;  // noise level where the median beta crosses 1
};

BetaSweep noise_beta_sweep(int n_sites, const NamedCoin& coin, const std::vector<double>& noise_levels,
                           int n_realizations, std::uint64_t seed,
                           std::optional<std::pair<int, int>> window = std::nullopt,
                           FitMethod method = FitMethod::kNonlinear, int threads = 0);

/// First noise level interval where the median beta goes from >= 1 to < 1,
/// linearly interpolated.
std::optional<double> detect_crossover(const std::vector<double>& levels,
                                       const std::vector<double>& medians);

struct SaturationRow {
  std::string coin;
  int n_sites = 0;
  double phi_max = 0.0;
  int realization = 0;
  bool converged = false;
  std::optional<double> saturation_level;
  std::optional<int> convergence_step;
  double min_cv = 0.0;
  double min_cv_window_mean = 0.0;
};

struct SaturationOptions {
  int steps = 5000;
  int record_every = 10;
  int horizon = 5000;
  double threshold = 0.01;
};

std::vector<SaturationRow> saturation_sweep(const std::vector<int>& sizes, const NamedCoin& coin,
                                            const std::vector<double>& noise_levels,
                                            int n_realizations, std::uint64_t seed,
                                            const SaturationOptions& options = {}, int threads = 0);

struct ReproduceOptions {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = kDefaultSeed;
  int realizations = 50;
  int pr_map_resolution = 64;
  int threads = 0;
  // Figures 7/10 run this many steps and keep the first `report_steps`.
  int long_steps = 50000;
  int report_steps = 10000;
  // Realizations per (N, noise) point for the saturation presets.
  int saturation_realizations = 10;
};

struct ReproduceResult {
  int figure = 0;
  std::vector<std::string> files;
  std::string summary;
};

/// Writes the data behind figure `figure` (1..10) plus manifest.json.
ReproduceResult reproduce_figure(int figure, const ReproduceOptions& options);

std::string pr_map_to_csv(const PrMap& map);
std::string beta_sweep_to_csv(const BetaSweep& sweep);
std::string beta_summary_to_csv(const BetaSweep& sweep);
std::string pr_ensemble_to_csv(const std::vector<PrEnsemble>& ensembles);
std::string pr_ensemble_summary_to_csv(const std::vector<PrEnsemble>& ensembles);
std::string saturation_to_csv(const std::vector<SaturationRow>& rows);
std::string pr_map_to_json(const PrMap& map);
std::string beta_sweep_to_json(const BetaSweep& sweep);
std::string saturation_to_json(const std::vector<SaturationRow>& rows);

/// Figure-9 size presets: Hadamard odd 13-49, both coins even 20-50,
/// symmetric odd 3-49.
std::vector<int> saturation_sizes(std::string_view coin, bool even);

}  // namespace cqw
