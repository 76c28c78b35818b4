#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqw/coin.hpp"
#include "cqw/hilbert.hpp"

namespace cqw {

/// One step of the walk, optionally followed by static site phases.
///
/// The action on a state is: coin on every site, then the coin-|0> component
/// hops to s+1 and the coin-|1> component hops to s-1, then site s picks up
/// e^{i phase_s}. apply() is O(N); dense() builds the 2N x 2N matrix.
class StepOperator {
 public:
  StepOperator(int n_sites, const CoinParams& coin);
  StepOperator(int n_sites, const CoinParams& coin, std::vector<double> site_phases);

  int n_sites() const { return n_sites_; }
  int dimension() const { return 2 * n_sites_; }
  const CoinParams& coin() const { return coin_; }
  const CoinMatrix& coin_matrix() const { return coin_matrix_; }
  bool noisy() const { return !site_phases_.empty(); }
  const std::vector<double>& site_phases() const { return site_phases_; }

  /// out = S in. Both vectors have length 2N; out must not alias in.
  void apply(const ComplexVector& in, ComplexVector& out) const;
  ComplexVector apply(const ComplexVector& in) const;

  ComplexMatrix dense() const;

 private:
  int n_sites_;
  CoinParams coin_;
  CoinMatrix coin_matrix_;
  std::vector<double> site_phases_;
  std::vector<Complex> site_factors_;
};

StepOperator build_step(int n_sites, const CoinParams& coin);

struct BandArc {
  double center;
  double half_width;
};

struct Eigenstate {
  Complex eigenvalue;
  double phase;  // arg in (-pi, pi]
  int momentum = -1;  // Fourier index k for analytic states, -1 otherwise
  int branch = -1;    // 0: arcsin branch, 1: supplementary branch
  double mixing_angle = 0.0;  // cos/sin weights of coin |0>, |1> in the Bloch state
  double relative_phase = 0.0;
  SiteDistribution distribution;
  double participation_ratio = 0.0;
};

struct SpectralReport {
  int n_sites = 0;
  double gamma = 0.0;
  double half_sum = 0.0;
  std::vector<Eigenstate> states;
  std::array<BandArc, 2> bands{};
  double gap = 0.0;
  bool degenerate = false;
  std::optional<int> degeneracy_m;
  std::vector<int> cluster_sizes;
  std::string solver;  // "analytic" or "dense"

  std::vector<Complex> eigenvalues() const;
  std::vector<double> phases() const;
  std::vector<double> participation_ratios() const;
};

inline constexpr double kClusterTolerance = 1e-9;

/// Closed-form spectrum of the noiseless walk. For Fourier index k the
/// eigenvalues are e^{-i(a - h)} and -e^{i(a + h)} with h the coin half-sum
/// and a = arcsin(cos(gamma) sin(2 pi k / N + h)). Eigenstates are the Bloch
/// states |lambda_k>(cos t |0> + e^{i p} sin t |1>) and are flat on the sites.
SpectralReport analytic_spectrum(int n_sites, const CoinParams& coin);

/// Dense eigendecomposition of the 2N x 2N matrix (N <= 4096).
SpectralReport numerical_spectrum(const StepOperator& step);

/// Returns m when half_sum = m pi / N for an integer m (mod 2pi, within tol).
std::optional<int> degeneracy_index(int n_sites, double half_sum, double tol = kClusterTolerance);

/// Exact pairing law: true when two distinct Fourier indices share an
/// eigenvalue, i.e. 2 h + 2 pi (j + k) / N = pi (mod 2 pi) for some j != k.
bool has_degenerate_pairs(int n_sites, double half_sum, double tol = kClusterTolerance);

/// Sizes of eigenphase clusters (distance measured on the circle).
std::vector<int> cluster_phases(std::vector<double> phases, double tol = kClusterTolerance);

/// Arc membership of a phase, measured on the circle.
bool phase_in_bands(const SpectralReport& report, double phase, double tol = 1e-9);

double participation_ratio(const SiteDistribution& dist);
double mean_pr(const SpectralReport& report);

/// Participation ratio of the walker's site distribution after `steps`
/// applications of `step` to `initial`.
double walker_pr(const StepOperator& step, const WalkState& initial, int steps);

/// Equal-weight superpositions of the two Bloch eigenstates in every
/// degenerate pair of the noiseless operator (empty if the spectrum has no
/// pairs). Each returned state is an eigenvector of the step operator.
struct DegeneratePairState {
  int k_first;
  int k_second;
  int branch;
  Complex eigenvalue;
  ComplexVector amplitudes;
  double coin_overlap;  // |<u_k|u_j>| of the two coin spinors
};
std::vector<DegeneratePairState> degenerate_pair_states(int n_sites, const CoinParams& coin);

/// Bloch eigenstate of the noiseless operator for Fourier index k and branch.
ComplexVector bloch_eigenstate(int n_sites, const CoinParams& coin, int k, int branch,
                               Complex* eigenvalue = nullptr);

std::string spectrum_to_csv(const SpectralReport& report);
std::string spectrum_to_json(const SpectralReport& report);

}  // namespace cqw
