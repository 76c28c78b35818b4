#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace cqw {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Smallest cycle accepted anywhere in the library.
inline constexpr int kMinSites = 3;

}  // namespace cqw
