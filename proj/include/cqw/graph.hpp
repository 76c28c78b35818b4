#pragma once

#include "cqw/types.hpp"

namespace cqw {

// Dense N x N operators on the cycle. All of them reject N < 3.

/// Permutation |s> -> |s+1 mod N>.
ComplexMatrix shift_cw(int n_sites);
/// Permutation |s> -> |s-1 mod N>; the adjoint of shift_cw.
ComplexMatrix shift_ccw(int n_sites);
/// Entries e^{2 pi i s t / N} / sqrt(N).
ComplexMatrix qft(int n_sites);
/// diag(e^{-2 pi i s / N}).
ComplexMatrix clock(int n_sites);

/// Same as qft() but without the N >= 3 restriction; used for register
/// sizes 1 and 2 in circuit verification.
ComplexMatrix fourier_matrix(int dim);
ComplexMatrix clock_matrix(int dim);

double unitarity_error(const ComplexMatrix& u);

}  // namespace cqw
