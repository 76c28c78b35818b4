#include "cqw/coin.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cqw/error.hpp"

namespace cqw {

namespace {

constexpr double kRangeSlack = 1e-12;

bool in_range(double v, double lo, double hi) {
  return std::isfinite(v) && v >= lo - kRangeSlack && v <= hi + kRangeSlack;
}

constexpr double kEigenResidualTol = 1e-9;

double residual(const CoinMatrix& c, const Eigen::Vector2cd& v, Complex lambda) {
  return (c * v - lambda * v).norm();
}

}  // namespace

CoinParams::CoinParams(double gamma, double theta, double phi)
    : gamma_(gamma), theta_(theta), phi_(phi) {
  require(in_range(gamma, 0.0, kPi / 2), ErrorCode::kOutOfRange,
          "gamma must lie in [0, pi/2], got " + std::to_string(gamma));
  require(in_range(theta, 0.0, kTwoPi), ErrorCode::kOutOfRange,
          "theta must lie in [0, 2pi], got " + std::to_string(theta));
  require(in_range(phi, 0.0, kTwoPi), ErrorCode::kOutOfRange,
          "phi must lie in [0, 2pi], got " + std::to_string(phi));
}

CoinParams coin_preset(std::string_view name) {
  if (name == "hadamard") return {kPi / 4, 0.0, 0.0};
  if (name == "symmetric") return {kPi / 4, kPi / 2, kPi / 2};
  fail(ErrorCode::kInvalidArgument, "unknown coin preset '" + std::string(name) + "'");
}

CoinParams coin_from_half_sum(double gamma, double half_sum) {
  return {gamma, half_sum, half_sum};
}

CoinMatrix build_coin(const CoinParams& p) {
  const double c = std::cos(p.gamma());
  const double s = std::sin(p.gamma());
  CoinMatrix m;
  m(0, 0) = c;
  m(0, 1) = std::polar(s, p.theta());
  m(1, 0) = std::polar(s, p.phi());
  m(1, 1) = -std::polar(c, p.theta() + p.phi());
  return m;
}

CoinEigenSystem coin_eigensystem(const CoinParams& p) {
  const CoinMatrix coin = build_coin(p);
  const Complex e = std::polar(1.0, p.theta() + p.phi());
  const double cg = std::cos(p.gamma());
  const double sg = std::sin(p.gamma());

  CoinEigenSystem out;
  out.s_aux = (1.0 - e) * cg / 2.0;
  const Complex root = std::sqrt(e + out.s_aux * out.s_aux);
  out.eigenvalues = {out.s_aux + root, out.s_aux - root};

  // gamma = 0 and gamma = pi/2 make csc/tan singular in the closed form;
  // the coin is then diagonal or anti-diagonal.
  const bool diagonal = sg < 1e-15;
  const bool antidiagonal = cg < 1e-15;
  if (diagonal) {
    out.eigenvalues = {Complex{1.0, 0.0}, -e};
    out.eigenvectors = {Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0)};
    out.alpha = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    return out;
  }
  if (antidiagonal) {
    // [[0, e^{it}], [e^{ip}, 0]]: eigenvalues +-e^{i(t+p)/2}.
    const Complex half = std::polar(1.0, 0.5 * (p.theta() + p.phi()));
    const Complex a = std::polar(1.0, 0.5 * (p.theta() - p.phi()));
    const double h = 1.0 / std::sqrt(2.0);
    out.eigenvalues = {half, -half};
    out.eigenvectors = {Eigen::Vector2cd(h * a, h), Eigen::Vector2cd(-h * a, h)};
    out.alpha = {h * a, -h * a};
    return out;
  }

  // alpha~_j = 2 (e^{-i phi} c_j + e^{i theta} cos g) csc^{1-j} g, normalized
  // by sqrt(4 + |alpha~_{(1 + (-1)^j) mod 2}|^2).
  for (int j = 0; j < 2; ++j) {
    out.alpha_tilde[j] = 2.0 * (std::polar(1.0, -p.phi()) * out.eigenvalues[j] +
                                std::polar(cg, p.theta())) *
                         std::pow(1.0 / sg, 1 - j);
  }
  for (int j = 0; j < 2; ++j) {
    const int partner = (1 + (j == 0 ? 1 : -1)) % 2;
    out.alpha[j] = out.alpha_tilde[j] / std::sqrt(4.0 + std::norm(out.alpha_tilde[partner]));
  }

  Eigen::ComplexEigenSolver<CoinMatrix> solver(coin);
  for (int j = 0; j < 2; ++j) {
    const double a2 = std::norm(out.alpha[j]);
    Eigen::Vector2cd closed(out.alpha[j], std::sqrt(std::max(0.0, 1.0 - a2)));
    if (a2 <= 1.0 + 1e-12 && residual(coin, closed, out.eigenvalues[j]) <= kEigenResidualTol) {
      out.eigenvectors[j] = closed;
      continue;
    }
    out.closed_form_rejected[j] = true;
    // Numerical eigenvector matched to this eigenvalue.
    int best = 0;
    for (int i = 1; i < 2; ++i) {
      if (std::abs(solver.eigenvalues()[i] - out.eigenvalues[j]) <
          std::abs(solver.eigenvalues()[best] - out.eigenvalues[j]))
        best = i;
    }
    out.eigenvectors[j] = solver.eigenvectors().col(best).normalized();
  }
  return out;
}

}  // namespace cqw
