#pragma once

#include <array>
#include <string_view>

#include "cqw/types.hpp"

namespace cqw {

/// Three-angle coin parameterization. gamma in [0, pi/2] sets the mixing
/// amplitude; theta and phi in [0, 2pi] are the off-diagonal phases.
class CoinParams {
 public:
  CoinParams(double gamma, double theta, double phi);

  double gamma() const { return gamma_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  /// (theta + phi) / 2: the only phase combination the walk spectrum sees.
  double half_sum() const { return 0.5 * (theta_ + phi_); }

  friend bool operator==(const CoinParams&, const CoinParams&) = default;

 private:
  double gamma_;
  double theta_;
  double phi_;
};

/// "hadamard" -> (pi/4, 0, 0), "symmetric" -> (pi/4, pi/2, pi/2).
CoinParams coin_preset(std::string_view name);

/// Coin with theta = phi = half_sum; spectra depend on the phases only
/// through their half-sum.
CoinParams coin_from_half_sum(double gamma, double half_sum);

using CoinMatrix = Eigen::Matrix2cd;

CoinMatrix build_coin(const CoinParams& params);

struct CoinEigenSystem {
  std::array<Complex, 2> eigenvalues;
  std::array<Eigen::Vector2cd, 2> eigenvectors;
  Complex s_aux;
  std::array<Complex, 2> alpha_tilde;
  std::array<Complex, 2> alpha;
  // Set per eigenvector when the closed-form vector failed the residual check
  // and the numerical one was returned instead.
  std::array<bool, 2> closed_form_rejected{false, false};
};

CoinEigenSystem coin_eigensystem(const CoinParams& params);

}  // namespace cqw
