#include "cqw/hilbert.hpp"

#include <cmath>
#include <string>

#include "cqw/error.hpp"

namespace cqw {

void check_sites(int n_sites) {
  require(n_sites >= kMinSites, ErrorCode::kInvalidArgument,
          "a cycle needs at least 3 sites, got " + std::to_string(n_sites));
}

WalkState::WalkState(int n_sites, ComplexVector amplitudes, double norm_tolerance)
    : n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {
  check_sites(n_sites);
  require(amplitudes_.size() == 2 * n_sites, ErrorCode::kDimensionMismatch,
          "state needs 2N = " + std::to_string(2 * n_sites) + " amplitudes, got " +
              std::to_string(amplitudes_.size()));
  const double norm = amplitudes_.squaredNorm();
  require(std::abs(norm - 1.0) <= norm_tolerance, ErrorCode::kInvalidArgument,
          "state is not normalized (squared norm " + std::to_string(norm) + ")");
}

CoinAmplitudes plus_coin() {
  const double h = 1.0 / std::sqrt(2.0);
  return {Complex{h, 0.0}, Complex{h, 0.0}};
}

int default_initial_site(int n_sites) { return n_sites / 2; }

WalkState localized_state(int n_sites, int s0, CoinAmplitudes coin) {
  check_sites(n_sites);
  require(s0 >= 0 && s0 < n_sites, ErrorCode::kOutOfRange,
          "initial site " + std::to_string(s0) + " outside [0, " + std::to_string(n_sites) + ")");
  const double coin_norm = std::norm(coin.first) + std::norm(coin.second);
  require(std::abs(coin_norm - 1.0) <= 1e-12, ErrorCode::kInvalidArgument,
          "coin amplitudes are not normalized");
  ComplexVector amps = ComplexVector::Zero(2 * n_sites);
  amps[2 * s0] = coin.first;
  amps[2 * s0 + 1] = coin.second;
  return WalkState(n_sites, std::move(amps));
}

SiteDistribution site_distribution(int n_sites, const ComplexVector& amplitudes) {
  require(amplitudes.size() == 2 * n_sites, ErrorCode::kDimensionMismatch,
          "amplitude vector does not match the number of sites");
  SiteDistribution dist;
  dist.probabilities.resize(static_cast<size_t>(n_sites));
  for (int s = 0; s < n_sites; ++s) {
    dist.probabilities[static_cast<size_t>(s)] =
        std::norm(amplitudes[2 * s]) + std::norm(amplitudes[2 * s + 1]);
  }
  return dist;
}

SiteDistribution site_distribution(const WalkState& state) {
  return site_distribution(state.n_sites(), state.amplitudes());
}

double cyclic_distance(int n_sites, double a, double b) {
  check_sites(n_sites);
  const double n = n_sites;
  double d = std::fmod(std::abs(a - b), n);
  return std::min(d, n - d);
}

double mean_position(const SiteDistribution& dist) {
  double x = 0.0, total = 0.0;
  for (int s = 0; s < dist.n_sites(); ++s) {
    x += s * dist[s];
    total += dist[s];
  }
  return x / total;
}

double mean_position(const WalkState& state) { return mean_position(site_distribution(state)); }

}  // namespace cqw
