#pragma once

#include <optional>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "cqw/hilbert.hpp"
#include "cqw/spectrum.hpp"

namespace cqw {

enum class MsdMode {
  kPerSite,  // sum_s d(s, s0)^2 P(s)
  kLiteral,  // d(x(m), x(0))^2 with x the mean position
};

struct DynamicsTrace {
  int n_sites = 0;
  int initial_site = 0;
  std::vector<int> steps;
  std::vector<SiteDistribution> distributions;  // empty unless requested
  std::vector<double> mean_positions;
  std::vector<double> msd;
  std::vector<double> norms;
  ComplexVector final_amplitudes;
};

struct EvolveOptions {
  int record_every = 1;
  bool keep_distributions = false;
  MsdMode msd_mode = MsdMode::kPerSite;
};

/// Repeatedly applies `step`, recording at steps 0, r, 2r, ... <= n_steps.
DynamicsTrace evolve(const WalkState& initial, const StepOperator& step, int n_steps,
                     int initial_site, const EvolveOptions& options = {});

double msd_at(const SiteDistribution& dist, double s0);
double msd_literal(const SiteDistribution& dist, double x0);

enum class FitMethod {
  kNonlinear,  // least squares on the MSD values themselves
  kLogLog,     // ordinary least squares on (log m, log msd)
};

struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  int m_lo = 0;
  int m_hi = 0;
  int points = 0;
  double residual = 0.0;  // RMS of log(msd) - log(alpha m^beta)
  FitMethod method = FitMethod::kNonlinear;
};

/// Power-law fit msd ~ alpha m^beta over recorded steps in [m_lo, m_hi];
/// m = 0 is skipped. Throws on fewer than 3 points or any zero MSD.
FitResult fit_power_law(const std::vector<int>& steps, const std::vector<double>& msd,
                        int m_lo, int m_hi, FitMethod method = FitMethod::kNonlinear);
FitResult fit_power_law(const DynamicsTrace& trace, int m_lo, int m_hi,
                        FitMethod method = FitMethod::kNonlinear);

/// [1, floor(N/2)]: the walker cannot wrap around the cycle before N/2 steps.
std::pair<int, int> default_fit_window(int n_sites);

struct SpreadTolerances {
  double ballistic = 0.05;
  double diffusive = 0.05;
};

std::string classify_spread(double beta, const SpreadTolerances& tol = {});

enum class SaturationPolicy { kFirstConvergentWindow, kMinCvWindow };

struct ConvergenceReport {
  int window = 0;
  std::vector<double> cv;
  std::vector<int> window_end_steps;
  double min_cv = 0.0;
  int min_cv_step = -1;
  bool converged = false;
  std::optional<int> convergence_step;
  std::optional<double> saturation_level;
  double min_cv_window_mean = 0.0;
  int zero_mean_windows = 0;
};

/// max(10, floor(N/4)).
int cv_window_size(int n_sites);

/// Bias-corrected coefficient of variation (1 + 1/(4n)) s / mean with the
/// n-1 sample standard deviation. Returns nullopt when mean == 0.
std::optional<double> corrected_cv(std::span<const double> window);

/// Slides a window of cv_window_size(N) recorded samples over the MSD series,
/// considering windows whose last sample is at step <= horizon.
ConvergenceReport cv_convergence(const DynamicsTrace& trace, double threshold, int horizon,
                                 SaturationPolicy policy = SaturationPolicy::kFirstConvergentWindow);

std::string trace_to_csv(const DynamicsTrace& trace, bool one_based_sites = true);
std::string trace_to_json(const DynamicsTrace& trace);
std::string distributions_to_csv(const DynamicsTrace& trace);
std::string fit_to_json(const FitResult& fit);
std::string convergence_to_json(const ConvergenceReport& report, bool include_series = false);

}  // namespace cqw
