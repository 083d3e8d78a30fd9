#include "fkrylov/krylov.hpp"

#include <cmath>
#include <string>

namespace fkrylov {

namespace {

void require_nonzero_seed(const Vector& psi) {
    if (psi.size() == 0 || psi.norm() == 0.0) throw std::invalid_argument("zero seeding state");
}

// Probe vector that is deterministic but not aligned with any sparse structure.
Vector probe_vector(Index d) {
    Vector v(d);
    for (Index i = 0; i < d; ++i)
        v(i) = cx(std::cos(0.7 * static_cast<double>(i) + 0.3), std::sin(1.3 * static_cast<double>(i) - 0.1));
    return v / v.norm();
}

} // namespace

Vector reorthogonalize(const Matrix& basis_columns, Vector v, Index ncols) {
    if (ncols < 0) ncols = basis_columns.cols();
    auto block = basis_columns.leftCols(ncols);
    for (int pass = 0; pass < 2; ++pass) v -= block * (block.adjoint() * v).eval();
    return v;
}

LanczosResult lanczos_weighted(const HermitianOperator& h, const Matrix& weight, const Vector& psi,
                               const KrylovOptions& opts) {
    require_nonzero_seed(psi);
    const Index d = h.dim();
    if (psi.size() != d) throw std::invalid_argument("lanczos: seed dimension mismatch");
    const bool weighted = weight.size() > 0;
    const bool reorth = opts.effective_reorthogonalize(d);

    auto ip = [&](const Vector& u, const Vector& v) -> cx {
        return weighted ? cx(u.dot(weight * v)) : u.dot(v);
    };
    auto wnorm = [&](const Vector& v) -> double {
        if (!weighted) return v.norm();
        double n2 = std::real(ip(v, v));
        return n2 > 0.0 ? std::sqrt(n2) : 0.0;
    };
    auto project_out = [&](Vector& v, const Matrix& basis, Index ncols) {
        for (int pass = 0; pass < 2; ++pass)
            for (Index j = 0; j < ncols; ++j) v -= basis.col(j) * ip(basis.col(j), v);
    };

    if (opts.check_operator) {
        Vector u = probe_vector(d), w = probe_vector(d).reverse();
        double defect = h.hermiticity_defect(u, w);
        if (defect > 1e-8)
            throw std::invalid_argument("lanczos: applicator fails Hermitian spot-check, defect = " +
                                        std::to_string(defect));
    }

    const Index cap = opts.max_steps > 0 ? std::min<Index>(d, opts.max_steps) : d;
    Matrix basis(d, cap);
    basis.col(0) = psi / wnorm(psi);

    LanczosCoefficients c;
    c.b.push_back(0.0);
    // b-scale for the breakdown threshold: b has the dimensions of H.
    double scale = wnorm(h.apply(basis.col(0)));
    if (scale == 0.0) scale = 1.0;
    const double btol = opts.effective_breakdown_tol(d) * scale;

    Index n = 0;
    while (true) {
        Vector w = h.apply(basis.col(n));
        double an = std::real(ip(basis.col(n), w));
        c.a.push_back(an);
        if (static_cast<Index>(c.a.size()) >= cap) break;

        w -= an * basis.col(n);
        if (n > 0) w -= c.b[n] * basis.col(n - 1);
        double pre = wnorm(w);
        if (reorth) {
            project_out(w, basis, n + 1);
            double post = wnorm(w);
            if (pre <= btol || post < opts.collapse_tol * pre) break; // subspace exhausted
            w /= post;
            c.b.push_back(post);
        } else {
            if (pre <= btol) break;
            w /= pre;
            c.b.push_back(pre);
        }
        ++n;
        basis.col(n) = w;
    }

    LanczosResult out;
    out.coeffs = std::move(c);
    out.basis.kind = KrylovBasis::Kind::Lanczos;
    out.basis.vectors = basis.leftCols(static_cast<Index>(out.coeffs.a.size()));
    return out;
}

LanczosResult lanczos(const HermitianOperator& h, const Vector& psi, const KrylovOptions& opts) {
    return lanczos_weighted(h, Matrix(), psi, opts);
}

namespace {

void check_unitary(const UnitaryOperator& u) {
    Vector v = probe_vector(u.dim());
    double defect = u.unitarity_defect(v);
    if (defect > 1e-8)
        throw std::invalid_argument("applicator fails unitarity spot-check, defect = " + std::to_string(defect));
}

void check_alpha_magnitude(cx alpha, int n, double tol) {
    if (std::abs(alpha) > 1.0 + tol)
        throw NumericalError("|alpha_" + std::to_string(n) + "| = " + std::to_string(std::abs(alpha)) +
                             " > 1: orthonormality lost, aborting");
}

} // namespace

SzegoResult szego(const UnitaryOperator& u, const Vector& psi, const KrylovOptions& opts) {
    require_nonzero_seed(psi);
    const Index d = u.dim();
    if (psi.size() != d) throw std::invalid_argument("szego: seed dimension mismatch");
    if (opts.check_operator) check_unitary(u);
    const bool reorth = opts.effective_reorthogonalize(d);
    const double rtol = opts.effective_breakdown_tol(d);
    const Index cap = opts.max_steps > 0 ? std::min<Index>(d, opts.max_steps) : d;

    Matrix basis(d, cap), companions(d, cap);
    Matrix shifted(d, reorth ? cap : 0); // U Phi_k history, orthonormal
    basis.col(0) = psi / psi.norm();
    companions.col(0) = basis.col(0);

    std::vector<cx> alphas;
    Index n = 0;
    while (true) {
        Vector uphi = u.apply(basis.col(n));
        cx abar = inner(companions.col(n), uphi);
        cx alpha = std::conj(abar);
        check_alpha_magnitude(alpha, static_cast<int>(n), opts.alpha_overflow_tol);
        alphas.push_back(alpha);
        double rho = VerblunskySequence::rho_of(alpha);
        if (rho <= rtol || static_cast<Index>(alphas.size()) >= cap) break;

        Vector phi_next = (uphi - abar * companions.col(n)) / rho;
        double pre = phi_next.norm(); // identically 1 in exact arithmetic
        if (pre < 0.5) break;         // rho is rounding noise: terminated
        if (reorth) {
            phi_next = reorthogonalize(basis, std::move(phi_next), n + 1);
            double post = phi_next.norm();
            if (post < opts.collapse_tol * pre) break;
            phi_next /= post;
        } else {
            phi_next /= pre;
        }

        Vector phit_next = (-alpha * uphi + companions.col(n)) / rho;
        if (reorth) {
            shifted.col(n) = uphi;
            // <Phit_{n+1}|U|Phi_k> = 0 for k <= n identically; removing those
            // components controls the cancellation noise of the division by rho.
            phit_next = reorthogonalize(shifted, std::move(phit_next), n + 1);
            double tnorm = phit_next.norm();
            if (tnorm < 0.5) break;
            phit_next /= tnorm;
        }

        ++n;
        basis.col(n) = phi_next;
        companions.col(n) = phit_next;
    }

    SzegoResult out;
    out.alphas = VerblunskySequence::from_alphas(std::move(alphas));
    out.basis.kind = KrylovBasis::Kind::Szego;
    Index dim = out.alphas.krylov_dim();
    out.basis.vectors = basis.leftCols(dim);
    out.basis.companions = companions.leftCols(dim);
    return out;
}

SzegoResult cmv_build(const UnitaryOperator& u, const Vector& psi, const KrylovOptions& opts) {
    require_nonzero_seed(psi);
    const Index d = u.dim();
    if (psi.size() != d) throw std::invalid_argument("cmv_build: seed dimension mismatch");
    if (opts.check_operator) check_unitary(u);
    const bool reorth = opts.effective_reorthogonalize(d);
    const double rtol = opts.effective_breakdown_tol(d);
    const Index cap = opts.max_steps > 0 ? std::min<Index>(d, opts.max_steps) : d;

    Matrix basis(d, cap);
    basis.col(0) = psi / psi.norm();
    std::vector<cx> al;
    al.push_back(std::conj(inner(basis.col(0), u.apply(basis.col(0)))));
    check_alpha_magnitude(al[0], 0, opts.alpha_overflow_tol);

    auto rho = [&](int k) { return k < 0 ? 0.0 : VerblunskySequence::rho_of(al[k]); };
    // Appends v (expected unit norm in exact arithmetic) as the next basis
    // column after reorthogonalization. Returns false on subspace exhaustion.
    auto push_vector = [&](Vector v, Index have) -> bool {
        double pre = v.norm();
        if (pre < 0.5) return false;
        if (reorth) {
            v = reorthogonalize(basis, std::move(v), have);
            double post = v.norm();
            if (post < opts.collapse_tol * pre) return false;
            v /= post;
        } else {
            v /= pre;
        }
        basis.col(have) = v;
        return true;
    };

    Index have = 1; // basis vectors built so far
    while (true) {
        const int k = static_cast<int>(have) - 1; // index of the newest vector
        if (static_cast<Index>(al.size()) >= cap || have >= d) break;
        double r_prev = rho(k);
        if (r_prev <= rtol) break; // guarded division below

        Vector v;
        if (k % 2 == 0) {
            // odd step: P_{k+1} from U P_{k-1}, U P_k, P_k with alpha_{-1} = -1
            Vector upk = u.apply(basis.col(k));
            if (k >= 1) {
                v = (rho(k - 1) / r_prev) * u.apply(basis.col(k - 1)) -
                    (std::conj(al[k - 1]) / r_prev) * upk - (std::conj(al[k]) / r_prev) * basis.col(k);
            } else {
                v = (1.0 / r_prev) * upk - (std::conj(al[0]) / r_prev) * basis.col(0);
            }
            if (!push_vector(std::move(v), have)) break;
            // two exact identities for alpha_{k+1}; divide by whichever of
            // rho_k, alpha_k is larger (max of the two is >= 1/sqrt(2), so
            // consecutive near-breakdowns cannot amplify rounding noise)
            cx abar;
            if (r_prev >= std::abs(al[k])) {
                abar = inner(basis.col(k), u.apply(basis.col(k + 1))) / r_prev;
            } else {
                // diagonal element <P_{k+1}|U|P_{k+1}> = -conj(a_{k+1}) a_k
                abar = -inner(basis.col(k + 1), u.apply(basis.col(k + 1))) / al[k];
            }
            al.push_back(std::conj(abar));
        } else {
            // even step: P_{k+1} from U^dag P_{k-1}, U^dag P_k, P_k
            Vector udk = u.apply_adjoint(basis.col(k));
            v = (rho(k - 1) / r_prev) * u.apply_adjoint(basis.col(k - 1)) -
                (al[k - 1] / r_prev) * udk - (al[k] / r_prev) * basis.col(k);
            if (!push_vector(std::move(v), have)) break;
            cx abar;
            if (r_prev >= std::abs(al[k])) {
                abar = inner(basis.col(k + 1), u.apply(basis.col(k))) / r_prev;
            } else {
                abar = -inner(basis.col(k + 1), u.apply(basis.col(k + 1))) / al[k];
            }
            al.push_back(std::conj(abar));
        }
        check_alpha_magnitude(al.back(), static_cast<int>(al.size()) - 1, opts.alpha_overflow_tol);
        ++have;
    }

    SzegoResult out;
    out.alphas = VerblunskySequence::from_alphas(std::move(al));
    out.basis.kind = KrylovBasis::Kind::Cmv;
    out.basis.vectors = basis.leftCols(have);
    return out;
}

Matrix hessenberg_matrix(const VerblunskySequence& seq) {
    const int D = seq.krylov_dim();
    if (D == 0) throw std::invalid_argument("hessenberg_matrix: empty sequence");
    Matrix h = Matrix::Zero(D, D);
    for (int nn = 0; nn < D; ++nn) {
        double prod = 1.0;
        for (int m = nn; m >= 0; --m) {
            // prod = rho_m ... rho_{n-1}
            h(m, nn) = -std::conj(seq.alpha(nn)) * seq.alpha(m - 1) * prod;
            prod *= seq.rho(m > 0 ? m - 1 : 0); // next iteration needs rho_{m-1}
        }
        if (nn + 1 < D) h(nn + 1, nn) = seq.rho(nn);
    }
    return h;
}

CMVForm cmv_factorization(const VerblunskySequence& seq, double unimodular_tol) {
    const int D = seq.krylov_dim();
    if (D < 1) throw std::invalid_argument("cmv_factorization: empty sequence");
    seq.validate();
    if (seq.rhos.back() > unimodular_tol)
        throw std::invalid_argument("cmv_factorization: |alpha_{D-1}| = " +
                                    std::to_string(std::abs(seq.alphas.back())) +
                                    " is not unimodular: sequence not terminated");
    CMVForm form;
    form.coeffs = seq;
    form.decoupled_bonds = seq.interior_unimodular();
    return form;
}

namespace {

// One block-diagonal factor applied in place: 2x2 blocks Theta_n on
// coordinates (n, n+1) for n = start, start+2, ..., plus the scalar
// conj(alpha_{D-1}) when index D-1 is uncovered in this factor.
void apply_factor(const VerblunskySequence& c, Vector& v, int start, bool adjoint) {
    const int D = c.krylov_dim();
    for (int n = start; n + 1 < D; n += 2) {
        cx a = c.alphas[n];
        double r = c.rhos[n];
        cx x = v(n), y = v(n + 1);
        if (!adjoint) {
            v(n) = std::conj(a) * x + r * y;
            v(n + 1) = r * x - a * y;
        } else {
            v(n) = a * x + r * y;
            v(n + 1) = r * x - std::conj(a) * y;
        }
    }
    // Scalar cap at index D-1 sits in the factor whose block parity matches.
    if ((D - 1) % 2 == start % 2) {
        cx s = std::conj(c.alphas[D - 1]);
        v(D - 1) *= adjoint ? std::conj(s) : s;
    }
}

} // namespace

void CMVForm::apply_in_place(Vector& v) const {
    apply_factor(coeffs, v, 1, false); // odd factor first
    apply_factor(coeffs, v, 0, false);
}

void CMVForm::apply_adjoint_in_place(Vector& v) const {
    apply_factor(coeffs, v, 0, true);
    apply_factor(coeffs, v, 1, true);
}

Matrix CMVForm::even_factor() const {
    const int D = dim();
    Matrix m = Matrix::Identity(D, D);
    for (int n = 0; n + 1 < D; n += 2) m.block<2, 2>(n, n) = theta(n);
    if ((D - 1) % 2 == 0) m(D - 1, D - 1) = std::conj(coeffs.alphas[D - 1]);
    return m;
}

Matrix CMVForm::odd_factor() const {
    const int D = dim();
    Matrix m = Matrix::Identity(D, D);
    for (int n = 1; n + 1 < D; n += 2) m.block<2, 2>(n, n) = theta(n);
    if (D > 1 && (D - 1) % 2 == 1) m(D - 1, D - 1) = std::conj(coeffs.alphas[D - 1]);
    return m;
}

Matrix CMVForm::dense() const { return even_factor() * odd_factor(); }

} // namespace fkrylov
