#pragma once

#include <cmath>
#include <vector>

#include "fkrylov/types.hpp"

namespace fkrylov {

// Verblunsky coefficients alpha_0..alpha_{D-1} of a Krylov construction on
// the unit circle, with the derived hoppings rho_n = sqrt(1 - |alpha_n|^2).
// The sequence terminates (spans a D-dimensional invariant subspace) when
// |alpha_{D-1}| = 1; the convention alpha_{-1} = -1 is implicit.
struct VerblunskySequence {
    std::vector<cx> alphas;
    std::vector<double> rhos;

    VerblunskySequence() = default;

    static VerblunskySequence from_alphas(std::vector<cx> a) {
        VerblunskySequence s;
        s.alphas = std::move(a);
        s.rhos.resize(s.alphas.size());
        for (std::size_t n = 0; n < s.alphas.size(); ++n) s.rhos[n] = rho_of(s.alphas[n]);
        return s;
    }

    static double rho_of(cx alpha) {
        double r2 = 1.0 - std::norm(alpha);
        return r2 > 0.0 ? std::sqrt(r2) : 0.0;
    }

    int krylov_dim() const { return static_cast<int>(alphas.size()); }

    cx alpha(int n) const { return n == -1 ? cx(-1.0, 0.0) : alphas.at(n); }
    double rho(int n) const { return n == -1 ? 0.0 : rhos.at(n); }

    bool terminated(double tol = 1e-6) const {
        return !alphas.empty() && rhos.back() <= tol;
    }

    // Throws if any |alpha_n| exceeds 1 + tol (corrupt or mis-scaled input).
    void validate(double tol = 1e-9) const {
        for (std::size_t n = 0; n < alphas.size(); ++n) {
            if (std::abs(alphas[n]) > 1.0 + tol)
                throw std::invalid_argument("VerblunskySequence: |alpha_" + std::to_string(n) +
                                            "| = " + std::to_string(std::abs(alphas[n])) + " > 1");
        }
    }

    // Indices 0 <= n < D-1 with |alpha_n| unimodular within tol; the chain
    // decouples across such a bond.
    std::vector<int> interior_unimodular(double tol = 1e-12) const {
        std::vector<int> out;
        for (int n = 0; n + 1 < krylov_dim(); ++n)
            if (rhos[n] <= tol) out.push_back(n);
        return out;
    }
};

} // namespace fkrylov
