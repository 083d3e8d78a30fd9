#pragma once

#include <vector>

#include "fkrylov/krylov.hpp"
#include "fkrylov/types.hpp"
#include "fkrylov/verblunsky.hpp"

namespace fkrylov {

// Krylov-chain wave function amplitudes at consecutive stroboscopic times;
// series[t] is phi(t), t = 0..steps.
using WaveFunctionSeries = std::vector<Vector>;

struct ObservableSeries {
    std::vector<int> times;
    std::vector<double> K;    // mean chain position, sum n |phi_n|^2
    std::vector<double> S;    // Shannon entropy of |phi_n|^2, nats
    std::vector<double> expS; // localization length e^S
};

// Repeated banded application of the factorized unitary, O(D) per step.
// Returns phi(t) for t = 0..steps.
WaveFunctionSeries propagate_cmv(const CMVForm& form, const Vector& phi0, int steps);

// Initially localized wave packet delta_{n, site}.
WaveFunctionSeries propagate_cmv_delta(const CMVForm& form, int site, int steps);

// Second-order-in-time five-point recurrence for phi_n(t) with discrete
// index derivatives and the alpha_{-1} = -1 boundary convention; a
// diagnostic, validated against propagate_cmv (it reproduces it to rounding
// on every chain tested, but its printed coefficient conventions are flagged
// as an open question). Starts from phi(0) = delta_0 and the exact
// phi(T) = conj(alpha_0) delta_0 + rho_0 delta_1.
WaveFunctionSeries propagate_tight_binding(const VerblunskySequence& seq, int steps);

// Continuous-time Krylov chain for a Hermitian generator:
//   d/dt phi_n = i a_n phi_n - b_{n+1} phi_{n+1} + b_n phi_{n-1},
// integrated exactly per step by eigendecomposition of the D x D generator.
// phi(0) = delta_0.
WaveFunctionSeries propagate_lanczos(const LanczosCoefficients& coeffs, double dt, int steps);

// K(t), S(t), e^{S(t)} per time step; 0 log 0 = 0.
ObservableSeries observables(const WaveFunctionSeries& series);

double k_complexity(const Vector& phi);
double k_entropy(const Vector& phi);

// Mean of x over the second half of the series (the saturation window).
double second_half_mean(const std::vector<double>& x);

// Cumulative product prod_{k<n} <rho_k^2> of ensemble-averaged hoppings,
// the eigenvector envelope estimate |phi_n|^2/|phi_0|^2. The closed form
// uses the Beta(1, gamma_k + 1) moment <rho^2> = (gamma_k+1)/(gamma_k+2).
std::vector<double> localization_profile(const std::vector<double>& mean_rho_sq);

} // namespace fkrylov
