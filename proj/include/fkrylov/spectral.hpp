#pragma once

#include <vector>

#include "fkrylov/types.hpp"

namespace fkrylov {

// Eigenvalues of a dense complex matrix (LAPACK zgeev, eigenvalues only).
std::vector<cx> dense_eigenvalues(const Matrix& m);

// Eigenvalues of an upper Hessenberg matrix (LAPACK zhseqr; skips the
// reduction step, which matters at d ~ 1000 across many realizations).
std::vector<cx> hessenberg_eigenvalues(const Matrix& h);

// Sorted eigenphases in [0, 2pi) of a unitary given its eigenvalues.
std::vector<double> sorted_phases(const std::vector<cx>& eigenvalues);

} // namespace fkrylov
