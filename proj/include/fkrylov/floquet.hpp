#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fkrylov/rng.hpp"
#include "fkrylov/types.hpp"

namespace fkrylov {

using Vec3 = std::array<double, 3>;

struct AngularMomentum {
    Matrix jx, jy, jz;
};

// Spin-J matrices in the Jz eigenbasis ordered m = J, J-1, ..., -J
// (index 0 is the highest-weight state). 2J must be an integer.
AngularMomentum angular_momentum_ops(double j);

struct KickedTopParams {
    double j = 50.0;      // spin, d = 2J+1
    double kappa_x = 10.0;
    double kappa_z = 0.0;
    Vec3 b{1.7, 0.0, 0.0};

    int dim() const { return static_cast<int>(std::lround(2.0 * j)) + 1; }
};

// U = exp(-i kx/2J Jx^2) exp(-i kz/2J Jz^2) exp(-i b.J), dense; each factor
// exponentiated exactly through the eigendecomposition of its generator.
UnitaryOperator kicked_top(const KickedTopParams& p);

// SU(2) coherent state: rotation of the highest-weight Jz state to polar
// angle theta, azimuth phi.
Vector coherent_state(double j, double theta, double phi);

struct SymmetrySector {
    enum class Kind { Parity, Momentum };

    Kind kind = Kind::Parity;
    Matrix isometry; // d x dim, orthonormal columns spanning the sector
    int dim = 0;
    std::string label;

    Vector project(const Vector& full) const { return isometry.adjoint() * full; }
    Vector embed(const Vector& sector) const { return isometry * sector; }
};

// Projects onto the even (or odd) eigenspace of R = exp(i pi J_axis);
// rejects U unless ||[U, R]||_max is below tol. axis is 'x', 'y' or 'z'.
// For integer J "even" means R-eigenvalue +1.
std::pair<UnitaryOperator, SymmetrySector> parity_sector(const UnitaryOperator& u, char axis,
                                                         bool even = true, double tol = 1e-10);

struct KickedIsingParams {
    int length = 8;   // sites, periodic
    double j = 0.7;   // ZZ exchange
    Vec3 b{1.13, 0.0, 0.0};
};

// U = exp(-i J sum_k Z_k Z_{k+1}) exp(-i sum_k b.sigma_k) on 2^L, periodic
// closure included; matrix-free (diagonal phase layer + independent
// single-site rotations).
UnitaryOperator kicked_ising(const KickedIsingParams& p);

// Isometry onto the momentum-k eigenspace of the cyclic shift on L qubits.
SymmetrySector momentum_sector(int length, int k);

// Dense restriction V^dag U V; checks the result is unitary within tol
// (i.e. that the sector is actually invariant).
UnitaryOperator project_unitary(const UnitaryOperator& u, const SymmetrySector& sector,
                                double tol = 1e-10);

// Random complex combination of m computational basis states, projected into
// the sector and normalized; resamples if the projection annihilates it.
// Returned in sector coordinates.
Vector random_low_entanglement_seed(const SymmetrySector& sector, int m, Rng& rng);

struct VectorizedEvolution {
    UnitaryOperator evolution; // superoperator O -> U^dag O U on d^2 vectors
    Vector state;              // |O> with <A|B> = tr(A^dag B)/d built in
};

// Operator dynamics as state dynamics: |O> = vec(O)/sqrt(d). Matrix-free
// conjugation when dense = false; the explicit d^2 x d^2 unitary otherwise.
VectorizedEvolution vectorize_superoperator(const UnitaryOperator& u, const Matrix& op,
                                            bool dense = false);

// vec(U^dag O U) = (U^T (x) U^dag) vec(O), column-major.
Matrix dense_superoperator(const Matrix& u);

// Single-site Pauli operator sigma^axis on `site` of an L-qubit chain.
Matrix pauli_site(int length, int site, char axis);

// Kicked-Ising parameters at an ergodic dual-unitary point. The field layer
// exp(-i b.sigma) with b = |b|(s, 0, c) equals Rz Rx(beta) Rz with
// sin(beta) = s sin|b|; dual-unitarity needs beta = pi/4 and J = pi/4, so
// |b| = asin(1/(s sqrt 2)). s = 1/sqrt(2) degenerates to a Clifford point
// (exact revivals); s in (1/sqrt2, 1) carries a generic longitudinal field.
KickedIsingParams self_dual_kicked_ising(double s = 0.9);

struct DualUnitaryResult {
    std::vector<cx> alphas;       // possibly truncated (not terminated)
    int first_above_threshold = -1; // smallest n with |alpha_n| > threshold
};

// Verblunsky coefficients of a local Pauli seed under superoperator
// evolution of the kicked Ising chain; max_steps truncates the recursion.
DualUnitaryResult dual_unitary_experiment(const KickedIsingParams& p, int site, char axis,
                                          int max_steps, double threshold = 1e-8);

// Dimension of span{state, U state, ..., U^m state} by SVD rank. An
// independent oracle for the effective (symmetry-restricted) orbit size.
int krylov_orbit_rank(const UnitaryOperator& u, const Vector& state, int iterations,
                      double rel_tol = 1e-8);

} // namespace fkrylov
