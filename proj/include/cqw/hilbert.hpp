#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cqw/types.hpp"

namespace cqw {

// Probability of finding the walker at each site, coin traced out.
struct SiteDistribution {
  std::vector<double> probabilities;

  int n_sites() const { return static_cast<int>(probabilities.size()); }
  double operator[](int s) const { return probabilities[static_cast<size_t>(s)]; }
};

/// Pure state on the site (x) coin space of an N-site cycle.
///
/// Amplitudes are stored site-major, coin-minor: index = 2*s + c with 0-based
/// site s. Construction rejects N < 3 and states whose squared norm differs
/// from one by more than `norm_tolerance`.
class WalkState {
 public:
  WalkState(int n_sites, ComplexVector amplitudes, double norm_tolerance = 1e-12);

  int n_sites() const { return n_sites_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int site, int coin) const { return amplitudes_[2 * site + coin]; }
  double squared_norm() const { return amplitudes_.squaredNorm(); }

 private:
  int n_sites_;
  ComplexVector amplitudes_;
};

using CoinAmplitudes = std::pair<Complex, Complex>;

/// The |+> coin state, (1/sqrt2, 1/sqrt2).
CoinAmplitudes plus_coin();

/// |s0>|coin>. Throws on s0 outside [0, N), N < 3, or a non-normalized coin.
WalkState localized_state(int n_sites, int s0, CoinAmplitudes coin = plus_coin());

/// Site index the library starts walks from when none is given: floor(N/2).
int default_initial_site(int n_sites);

SiteDistribution site_distribution(const WalkState& state);
SiteDistribution site_distribution(int n_sites, const ComplexVector& amplitudes);

/// Distance on the ring between two (possibly fractional) positions.
double cyclic_distance(int n_sites, double a, double b);

/// Expectation of the 0-based site number operator.
double mean_position(const WalkState& state);
double mean_position(const SiteDistribution& dist);

void check_sites(int n_sites);

}  // namespace cqw
