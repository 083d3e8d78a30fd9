#include "fkrylov/chain.hpp"

#include <cmath>

namespace fkrylov {

WaveFunctionSeries propagate_cmv(const CMVForm& form, const Vector& phi0, int steps) {
    if (phi0.size() != form.dim()) throw std::invalid_argument("propagate_cmv: shape mismatch");
    WaveFunctionSeries out;
    out.reserve(steps + 1);
    out.push_back(phi0);
    Vector phi = phi0;
    for (int t = 1; t <= steps; ++t) {
        form.apply_in_place(phi);
        out.push_back(phi);
    }
    return out;
}

WaveFunctionSeries propagate_cmv_delta(const CMVForm& form, int site, int steps) {
    Vector phi0 = Vector::Zero(form.dim());
    phi0(site) = 1.0;
    return propagate_cmv(form, phi0, steps);
}

WaveFunctionSeries propagate_tight_binding(const VerblunskySequence& seq, int steps) {
    const int D = seq.krylov_dim();
    // Off-chain indices: alpha_{-1} = -1 (rho_{-1} = 0); beyond the cap the
    // chain is closed, treat alpha_{n >= D} as unimodular so the stray
    // couplings carry rho = 0.
    auto al = [&](int n) -> cx {
        if (n == -1) return cx(-1.0, 0.0);
        if (n < 0 || n >= D) return cx(1.0, 0.0);
        return seq.alphas[n];
    };
    auto rh = [&](int n) -> double {
        if (n < 0 || n >= D) return 0.0;
        return seq.rhos[n];
    };
    auto dal = [&](int n) -> cx { return 0.5 * (al(n + 1) - al(n - 1)); }; // discrete d/dn
    auto lam = [&](int n) -> double { return (1 - ((n % 2 == 0) ? 1 : -1)) / 2.0; };

    WaveFunctionSeries out;
    out.reserve(steps + 1);
    Vector prev = Vector::Zero(D);
    prev(0) = 1.0;
    out.push_back(prev);
    if (steps == 0) return out;

    Vector cur = Vector::Zero(D);
    cur(0) = std::conj(seq.alphas[0]);
    if (D > 1) cur(1) = seq.rhos[0];
    out.push_back(cur);

    auto at = [&](const Vector& v, int n) -> cx { return (n >= 0 && n < D) ? v(n) : cx(0.0); };

    for (int t = 2; t <= steps; ++t) {
        Vector next(D);
        for (int n = 0; n < D; ++n) {
            cx diag = -al(n) * std::conj(al(n - 1)) - std::conj(al(n)) * al(n - 1) - 2.0;
            cx hop_down = 2.0 * (lam(n + 1) * std::conj(dal(n - 1)) + lam(n) * dal(n - 1)) * rh(n - 1);
            cx hop_up = 2.0 * (lam(n + 1) * std::conj(dal(n)) + lam(n) * dal(n)) * rh(n);
            cx rhs = diag * cur(n) + hop_down * at(cur, n - 1) + hop_up * at(cur, n + 1) +
                     rh(n - 1) * rh(n - 2) * at(cur, n - 2) + rh(n) * rh(n + 1) * at(cur, n + 2);
            next(n) = rhs + 2.0 * cur(n) - prev(n);
        }
        out.push_back(next);
        prev.swap(cur);
        cur = next;
    }
    return out;
}

WaveFunctionSeries propagate_lanczos(const LanczosCoefficients& coeffs, double dt, int steps) {
    const int D = coeffs.krylov_dim();
    // Generator G = iA with A Hermitian tridiagonal:
    //   A_nn = a_n, A_{n,n+1} = i b_{n+1}, A_{n+1,n} = -i b_{n+1},
    // so that d/dt phi = (i a_n) phi_n - b_{n+1} phi_{n+1} + b_n phi_{n-1}.
    Matrix a = Matrix::Zero(D, D);
    for (int n = 0; n < D; ++n) a(n, n) = coeffs.a[n];
    for (int n = 0; n + 1 < D; ++n) {
        a(n, n + 1) = cx(0.0, coeffs.b[n + 1]);
        a(n + 1, n) = cx(0.0, -coeffs.b[n + 1]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    Vector phases = (cx(0.0, dt) * es.eigenvalues().cast<cx>()).array().exp();
    Matrix step = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

    WaveFunctionSeries out;
    out.reserve(steps + 1);
    Vector phi = Vector::Zero(D);
    phi(0) = 1.0;
    out.push_back(phi);
    for (int t = 1; t <= steps; ++t) {
        phi = step * phi;
        out.push_back(phi);
    }
    return out;
}

double k_complexity(const Vector& phi) {
    double k = 0.0;
    for (Index n = 0; n < phi.size(); ++n) k += static_cast<double>(n) * std::norm(phi(n));
    return k;
}

double k_entropy(const Vector& phi) {
    double s = 0.0;
    for (Index n = 0; n < phi.size(); ++n) {
        double p = std::norm(phi(n));
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

ObservableSeries observables(const WaveFunctionSeries& series) {
    ObservableSeries out;
    out.times.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        out.times.push_back(static_cast<int>(t));
        out.K.push_back(k_complexity(series[t]));
        double s = k_entropy(series[t]);
        out.S.push_back(s);
        out.expS.push_back(std::exp(s));
    }
    return out;
}

double second_half_mean(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    std::size_t start = x.size() / 2;
    double acc = 0.0;
    for (std::size_t i = start; i < x.size(); ++i) acc += x[i];
    return acc / static_cast<double>(x.size() - start);
}

std::vector<double> localization_profile(const std::vector<double>& mean_rho_sq) {
    std::vector<double> out(mean_rho_sq.size() + 1);
    out[0] = 1.0;
    for (std::size_t k = 0; k < mean_rho_sq.size(); ++k) out[k + 1] = out[k] * mean_rho_sq[k];
    return out;
}

} // namespace fkrylov
