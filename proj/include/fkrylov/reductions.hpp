#pragma once

#include <vector>

#include "fkrylov/krylov.hpp"
#include "fkrylov/types.hpp"
#include "fkrylov/verblunsky.hpp"

namespace fkrylov {

// Moments of the evolution seen by a seed: c_n = <psi|U^n|psi> for
// n in [-order, order] (c_{-n} = conj(c_n)) or mu_n = <psi|H^n|psi> for
// n in [0, 2*order]. Computed by iterated application, no matrix powers.
struct MomentData {
    std::vector<cx> c;     // c[order + n] holds c_n
    std::vector<double> mu;
    int order = 0;

    cx moment(int n) const { return c.at(order + n); }
};

MomentData unitary_moments(const UnitaryOperator& u, const Vector& psi, int order);
MomentData hermitian_moments(const HermitianOperator& h, const Vector& psi, int order);

// Toeplitz determinant D_n = det[c_{j-i}], size (n+1) x (n+1).
cx toeplitz_determinant(const MomentData& m, int n);
// Hankel determinant det[mu_{i+j}], size (n+1) x (n+1).
double hankel_determinant(const MomentData& m, int n);

// n-th Szego basis element from the determinant形 with the operator-valued
// last row expanded by cofactors; normalized by sqrt(Delta_n Delta_{n-1}).
// An oracle for szego(), independent of the recursion path.
Vector toeplitz_determinant_basis(const UnitaryOperator& u, const Vector& psi, int n);
// Hankel analogue: the Lanczos basis element.
Vector hankel_determinant_basis(const HermitianOperator& h, const Vector& psi, int n);

// High-frequency (T -> 0) reduction report: the Verblunsky coefficients of
// exp(-i T H) against the Lanczos-coefficient expansion
//   alpha_n(T) ~ (-1)^n [1 + i T A_n - T^2/2 (b_{n+1}^2 + A_n^2)],
// A_n = a_0 + ... + a_n. (The T^2 cross term carries a plus sign; the
// printed minus-sign variant leaves an O(T^2) residual, cf. n = 0 where
// alpha_0 = conj <psi|e^{-iTH}|psi> fixes it directly.)
struct SmallTReport {
    struct PerLevel {
        int n = 0;
        std::vector<double> residuals;   // per T, same order as t_values
        double measured_order = 0.0;     // log2(r(2T)/r(T)) averaged over halvings
        double rho_over_t_ratio = 0.0;   // rho_n(T)/T / |b_{n+1}| at the smallest T
        double basis_phase_dev = 0.0;    // ||P_n - (-i)^n Psi_n|| at the smallest T
    };
    std::vector<double> t_values;
    std::vector<PerLevel> levels;
    std::vector<double> toeplitz_hankel_ratio; // Delta_n / (T^{n^2+n} D_n) at smallest T, n <= 3
};

SmallTReport small_t_check(const HermitianOperator& h, const Vector& psi,
                           const std::vector<double>& t_values, int max_level);

// <u|(1 - Hcal/2)|v>.
cx modified_inner_product(const Matrix& hcal, const Vector& u, const Vector& v);

// Smallest eigenvalue of 1 - Hcal/2; must be positive for the weighted
// Lanczos run to make sense.
double modified_weight_min_eigenvalue(const Matrix& hcal);

// Real-coefficient route: Hcal = i(U^{1/2} - U^{-1/2}) with the principal
// square root (eigenphases in (-pi, pi]); Lanczos in the inner product
// <.|(1 - Hcal/2)|.>; alpha_n = (-1)^n (a_0 + ... + a_n) + (-1)^n.
// Exact whenever the direct CMV coefficients of (U, seed) are real.
struct RealAlphaRoute {
    VerblunskySequence alphas;
    LanczosCoefficients lanczos; // a_n, b_n of the weighted run
};

RealAlphaRoute real_alpha_lanczos_route(const Matrix& u, const Vector& seed,
                                        double branch_tol = 1e-9);

// Inhomogeneous XY circuit angles: alpha_k = e^{i chi_k} cos theta_k.
struct XYCircuit {
    std::vector<double> chis;   // in [-pi, pi)
    std::vector<double> thetas; // in [0, pi/2]
    int sites = 0;              // even
    bool padded = false;        // odd input padded with a decoupled site

    cx alpha(int k) const { return std::polar(std::cos(thetas[k]), chis[k]); }
};

XYCircuit xy_circuit_build(const VerblunskySequence& seq);

// Builds the full 2^d many-body XY circuit, conjugates every Jordan-Wigner
// annihilation operator, projects back onto the one-particle span and
// compares the transfer matrix with the CMV matrix of the same alphas.
struct XYEquivalenceResult {
    double max_deviation = 0.0;      // transfer vs CMV matrix, entrywise
    double max_span_residual = 0.0;  // operator content outside span{c_k}
    Matrix transfer;
};

XYEquivalenceResult xy_equivalence_check(const VerblunskySequence& seq);

} // namespace fkrylov
