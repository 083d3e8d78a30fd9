#pragma once

#include <optional>
#include <vector>

#include "fkrylov/types.hpp"
#include "fkrylov/verblunsky.hpp"

namespace fkrylov {

struct KrylovOptions {
    // rho (or b, scaled) at or below this terminates the recursion.
    // 0 means the default max(1e-12*sqrt(d), 1e-6); see the breakdown notes
    // in szego() -- the inner-product rounding floor for rho is ~sqrt(d*eps).
    double breakdown_tol = 0.0;

    // Two-pass classical Gram-Schmidt against all prior basis vectors.
    // Unresolved (default) means on for d <= 4096, off above.
    std::optional<bool> reorthogonalize;

    // Stop after at most this many coefficients (0 = run to termination).
    // A truncated sequence is not terminated: |alpha_last| < 1.
    int max_steps = 0;

    // Spot-check that the operator is unitary (Hermitian for lanczos) on a
    // random probe before starting.
    bool check_operator = false;

    // |alpha| above 1 + this aborts with a NumericalError diagnostic.
    double alpha_overflow_tol = 1e-6;

    // If reorthogonalization removes more than (1 - collapse_tol) of a new
    // vector's norm, the Krylov subspace is exhausted. Exact arithmetic
    // keeps 100% of it, so any value << 1 is safe.
    double collapse_tol = 1e-2;

    bool effective_reorthogonalize(Index d) const {
        return reorthogonalize.value_or(d <= 4096);
    }
    double effective_breakdown_tol(Index d) const {
        if (breakdown_tol > 0.0) return breakdown_tol;
        double spec = 1e-12 * std::sqrt(static_cast<double>(d));
        return std::max(spec, 1e-6);
    }
};

struct LanczosCoefficients {
    std::vector<double> a; // diagonal, size D
    std::vector<double> b; // off-diagonal, size D, b[0] = 0

    int krylov_dim() const { return static_cast<int>(a.size()); }
};

struct KrylovBasis {
    enum class Kind { Lanczos, Szego, Cmv };

    Kind kind = Kind::Lanczos;
    Matrix vectors;    // d x D, orthonormal columns
    Matrix companions; // d x D Phi-tilde sequence (Szego only), else empty

    int dim() const { return static_cast<int>(vectors.cols()); }
};

// Five-diagonal factorized form of U in the CMV basis:
//   <P_m|U|P_n> = (even_factor * odd_factor)_{mn},
// even_factor = Theta_0 + Theta_2 + ...,  odd_factor = 1 + Theta_1 + ...,
// Theta_n = [[conj(a_n), rho_n], [rho_n, -a_n]] on coordinates (n, n+1), and
// the index D-1 not covered by a block in a factor carries the scalar
// conj(alpha_{D-1}). Fixed against the directly computed matrix elements;
// note the paper's printed product order is the transpose-like variant that
// contradicts its own initial conditions.
struct CMVForm {
    VerblunskySequence coeffs;
    std::vector<int> decoupled_bonds; // interior |alpha_n| = 1 (chain splits here)

    int dim() const { return coeffs.krylov_dim(); }

    Eigen::Matrix2cd theta(int n) const {
        Eigen::Matrix2cd t;
        cx a = coeffs.alphas[n];
        double r = coeffs.rhos[n];
        t << std::conj(a), r, r, -a;
        return t;
    }

    Matrix even_factor() const;
    Matrix odd_factor() const;
    Matrix dense() const;

    // In-place w = C v and w = C^dag v, O(D) per application.
    void apply_in_place(Vector& v) const;
    void apply_adjoint_in_place(Vector& v) const;
};

struct LanczosResult {
    LanczosCoefficients coeffs;
    KrylovBasis basis;
};

struct SzegoResult {
    VerblunskySequence alphas;
    KrylovBasis basis;
};

// Lanczos three-term recursion for a Hermitian generator:
//   b_{n+1} |Psi_{n+1}> = H|Psi_n> - a_n|Psi_n> - b_n|Psi_{n-1}>,
// a_n = <Psi_n|H|Psi_n>, starting from psi/||psi||, until b hits the
// breakdown tolerance or the space is exhausted.
LanczosResult lanczos(const HermitianOperator& h, const Vector& psi, const KrylovOptions& opts = {});

// Weighted-inner-product variant: orthonormality and coefficients taken in
// <u|W|v> with W Hermitian positive definite (used by the real-alpha route).
LanczosResult lanczos_weighted(const HermitianOperator& h, const Matrix& weight, const Vector& psi,
                               const KrylovOptions& opts = {});

// Szego two-sequence recursion for a unitary generator:
//   conj(alpha_n) = <Phit_n|U|Phi_n>,
//   |Phi_{n+1}>  = (U|Phi_n> - conj(alpha_n)|Phit_n>) / rho_n,
//   |Phit_{n+1}> = (-alpha_n U|Phi_n> + |Phit_n>) / rho_n,
// from Phi_0 = Phit_0 = psi/||psi||, until rho_{D-1} = 0. The companion
// sequence is stabilized against span{U Phi_k} when reorthogonalization is
// on (those overlaps vanish identically, so removing them is pure noise
// control; without it rho_n << 1 costs ~log10(1/rho) digits per step).
SzegoResult szego(const UnitaryOperator& u, const Vector& psi, const KrylovOptions& opts = {});

// CMV basis recursion (same alphas as szego, basis with bandwidth-2 matrix
// elements). Requires U^dag. Initial conditions conj(alpha_0) = <P_0|U|P_0>,
// alpha_{-1} = -1.
SzegoResult cmv_build(const UnitaryOperator& u, const Vector& psi, const KrylovOptions& opts = {});

// Dense D x D upper Hessenberg matrix <Phi_m|U|Phi_n> built from the
// coefficients alone:
//   -conj(a_n) a_{m-1} prod_{k=m}^{n-1} rho_k   (m <= n)
//   rho_n                                       (m = n+1)
// with a_{-1} = -1. Unitary when |alpha_{D-1}| = 1.
Matrix hessenberg_matrix(const VerblunskySequence& seq);

// Factorizes a terminated sequence (|alpha_{D-1}| = 1 within tol) into the
// two block-diagonal factors. Interior unimodular coefficients are legal and
// reported in decoupled_bonds (the chain splits there).
CMVForm cmv_factorization(const VerblunskySequence& seq, double unimodular_tol = 1e-6);

// Two-pass classical Gram-Schmidt of v against the (orthonormal) basis
// columns. Returns the projected vector; does not normalize.
Vector reorthogonalize(const Matrix& basis_columns, Vector v, Index ncols = -1);

} // namespace fkrylov
