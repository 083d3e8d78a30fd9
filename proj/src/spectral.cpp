#include "fkrylov/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

namespace fkrylov {

namespace {
lapack_complex_double* lp(cx* p) { return reinterpret_cast<lapack_complex_double*>(p); }
} // namespace

std::vector<cx> dense_eigenvalues(const Matrix& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Matrix work = m; // column-major, matches LAPACK
    std::vector<cx> w(n);
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(work.data()), n, lp(w.data()),
                                    nullptr, 1, nullptr, 1);
    if (info != 0) throw NumericalError("zgeev failed, info = " + std::to_string(info));
    return w;
}

std::vector<cx> hessenberg_eigenvalues(const Matrix& h) {
    const lapack_int n = static_cast<lapack_int>(h.rows());
    Matrix work = h;
    std::vector<cx> w(n);
    lapack_int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, lp(work.data()), n,
                                     lp(w.data()), nullptr, 1);
    if (info != 0) throw NumericalError("zhseqr failed, info = " + std::to_string(info));
    return w;
}

std::vector<double> sorted_phases(const std::vector<cx>& eigenvalues) {
    std::vector<double> phases;
    phases.reserve(eigenvalues.size());
    for (cx z : eigenvalues) {
        double p = std::arg(z);
        if (p < 0.0) p += 2.0 * M_PI;
        phases.push_back(p);
    }
    std::sort(phases.begin(), phases.end());
    return phases;
}

} // namespace fkrylov
