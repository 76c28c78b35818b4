#include "cqw/graph.hpp"

#include <cmath>

#include "cqw/hilbert.hpp"

namespace cqw {

ComplexMatrix shift_cw(int n_sites) {
  check_sites(n_sites);
  ComplexMatrix m = ComplexMatrix::Zero(n_sites, n_sites);
  for (int s = 0; s < n_sites; ++s) m((s + 1) % n_sites, s) = 1.0;
  return m;
}

ComplexMatrix shift_ccw(int n_sites) {
  check_sites(n_sites);
  ComplexMatrix m = ComplexMatrix::Zero(n_sites, n_sites);
  for (int s = 0; s < n_sites; ++s) m((s + n_sites - 1) % n_sites, s) = 1.0;
  return m;
}

ComplexMatrix fourier_matrix(int dim) {
  ComplexMatrix m(dim, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int s = 0; s < dim; ++s) {
    for (int t = 0; t < dim; ++t) {
      // Reduce s*t mod dim first so the angle stays small and exact.
      const long long r = (static_cast<long long>(s) * t) % dim;
      m(s, t) = std::polar(scale, kTwoPi * static_cast<double>(r) / dim);
    }
  }
  return m;
}

ComplexMatrix clock_matrix(int dim) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) m(s, s) = std::polar(1.0, -kTwoPi * s / dim);
  return m;
}

ComplexMatrix qft(int n_sites) {
  check_sites(n_sites);
  return fourier_matrix(n_sites);
}

ComplexMatrix clock(int n_sites) {
  check_sites(n_sites);
  return clock_matrix(n_sites);
}

double unitarity_error(const ComplexMatrix& u) {
  const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

}  // namespace cqw
