#include "fkrylov/reductions.hpp"

#include <cmath>

namespace fkrylov {

namespace {
constexpr cx kI{0.0, 1.0};
}

MomentData unitary_moments(const UnitaryOperator& u, const Vector& psi, int order) {
    MomentData m;
    m.order = order;
    m.c.resize(2 * order + 1);
    Vector ref = psi / psi.norm();
    Vector fwd = ref;
    m.c[order] = 1.0;
    for (int n = 1; n <= order; ++n) {
        fwd = u.apply(fwd);
        m.c[order + n] = inner(ref, fwd);
        m.c[order - n] = std::conj(m.c[order + n]);
    }
    return m;
}

MomentData hermitian_moments(const HermitianOperator& h, const Vector& psi, int order) {
    MomentData m;
    m.order = order;
    m.mu.resize(2 * order + 1);
    Vector ref = psi / psi.norm();
    Vector it = ref;
    m.mu[0] = 1.0;
    for (int n = 1; n <= 2 * order; ++n) {
        it = h.apply(it);
        m.mu[n] = std::real(inner(ref, it));
    }
    return m;
}

cx toeplitz_determinant(const MomentData& m, int n) {
    if (n < 0) return 1.0; // Delta_{-1} = 1 convention
    Matrix t(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) t(i, j) = m.moment(j - i);
    return t.determinant();
}

double hankel_determinant(const MomentData& m, int n) {
    if (n < 0) return 1.0;
    Matrix t(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) t(i, j) = m.mu.at(i + j);
    return std::real(t.determinant());
}

namespace {

// det of the moment matrix with row `last` of the (n+1)-square matrix
// replaced by unit row e_j removed -- i.e. the cofactor expansion minors.
Matrix minor_without_column(const Matrix& top, int skip) {
    Matrix out(top.rows(), top.cols() - 1);
    int c = 0;
    for (int j = 0; j < top.cols(); ++j) {
        if (j == skip) continue;
        out.col(c++) = top.col(j);
    }
    return out;
}

} // namespace

Vector toeplitz_determinant_basis(const UnitaryOperator& u, const Vector& psi, int n) {
    MomentData m = unitary_moments(u, psi, n);
    cx dn = toeplitz_determinant(m, n);
    cx dn1 = toeplitz_determinant(m, n - 1);
    cx norm2 = dn * dn1;
    if (std::abs(norm2) < 1e-300)
        throw NumericalError("toeplitz_determinant_basis: singular Toeplitz determinant (Krylov "
                             "breakdown at or before n)");
    // rows i = 0..n-1: [c_{-i} ... c_{n-i}]; last row is psi, U psi, ...
    Matrix top(n, n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) top(i, j) = m.moment(j - i);
    Vector ref = psi / psi.norm();
    std::vector<Vector> powers{ref};
    for (int j = 1; j <= n; ++j) powers.push_back(u.apply(powers.back()));
    Vector out = Vector::Zero(psi.size());
    for (int j = 0; j <= n; ++j) {
        cx cof = (n == 0) ? cx(1.0) : minor_without_column(top, j).determinant();
        double sign = ((n + j) % 2 == 0) ? 1.0 : -1.0;
        out += sign * cof * powers[j];
    }
    return out / std::sqrt(norm2);
}

Vector hankel_determinant_basis(const HermitianOperator& h, const Vector& psi, int n) {
    MomentData m = hermitian_moments(h, psi, n);
    double dn = hankel_determinant(m, n);
    double dn1 = hankel_determinant(m, n - 1);
    if (std::abs(dn * dn1) < 1e-300)
        throw NumericalError("hankel_determinant_basis: singular Hankel determinant");
    Matrix top(n, n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) top(i, j) = m.mu.at(i + j);
    Vector ref = psi / psi.norm();
    std::vector<Vector> powers{ref};
    for (int j = 1; j <= n; ++j) powers.push_back(h.apply(powers.back()));
    Vector out = Vector::Zero(psi.size());
    for (int j = 0; j <= n; ++j) {
        cx cof = (n == 0) ? cx(1.0) : minor_without_column(top, j).determinant();
        double sign = ((n + j) % 2 == 0) ? 1.0 : -1.0;
        out += sign * cof * powers[j];
    }
    return out / std::sqrt(dn * dn1);
}

SmallTReport small_t_check(const HermitianOperator& h, const Vector& psi,
                           const std::vector<double>& t_values, int max_level) {
    SmallTReport report;
    report.t_values = t_values;
    auto lres = lanczos(h, psi);
    const auto& a = lres.coeffs.a;
    const auto& b = lres.coeffs.b;

    Eigen::SelfAdjointEigenSolver<Matrix> es(h.dense());
    auto evolution = [&](double t) {
        Vector ph = (-kI * t * es.eigenvalues().cast<cx>()).array().exp();
        return UnitaryOperator(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };

    std::vector<SzegoResult> runs;
    for (double t : t_values) runs.push_back(szego(evolution(t), psi, {}));

    double smallest = t_values.back();
    for (int n = 0; n <= max_level; ++n) {
        SmallTReport::PerLevel lvl;
        lvl.n = n;
        double an_sum = 0.0;
        for (int k = 0; k <= n; ++k) an_sum += a.at(k);
        double bnext = (n + 1 < static_cast<int>(b.size())) ? b[n + 1] : 0.0;
        for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
            double t = t_values[ti];
            double sign = (n % 2 == 0) ? 1.0 : -1.0;
            cx expansion = sign * (1.0 + kI * t * an_sum -
                                   t * t / 2.0 * (bnext * bnext + an_sum * an_sum));
            cx measured = runs[ti].alphas.alphas.at(n);
            lvl.residuals.push_back(std::abs(measured - expansion));
        }
        double order_acc = 0.0;
        int order_cnt = 0;
        for (std::size_t ti = 0; ti + 1 < t_values.size(); ++ti) {
            double ratio = t_values[ti] / t_values[ti + 1];
            if (lvl.residuals[ti + 1] > 0.0) {
                order_acc += std::log(lvl.residuals[ti] / lvl.residuals[ti + 1]) / std::log(ratio);
                ++order_cnt;
            }
        }
        lvl.measured_order = order_cnt ? order_acc / order_cnt : 0.0;

        const auto& small_run = runs.back();
        if (bnext > 0.0) lvl.rho_over_t_ratio = small_run.alphas.rhos.at(n) / smallest / bnext;
        // |P_n> ~ |Phi_n> ~ (-i)^n |Psi_n>
        Vector expect = std::pow(-kI, n) * lres.basis.vectors.col(n);
        lvl.basis_phase_dev = (small_run.basis.vectors.col(n) - expect).norm();
        report.levels.push_back(std::move(lvl));
    }

    // Delta_n ~ T^{n^2+n} D_n as T -> 0
    auto um = unitary_moments(evolution(smallest), psi, 4);
    auto hm = hermitian_moments(h, psi, 4);
    for (int n = 0; n <= 3; ++n) {
        cx dn = toeplitz_determinant(um, n);
        double hk = hankel_determinant(hm, n);
        double scale = std::pow(smallest, n * n + n);
        report.toeplitz_hankel_ratio.push_back(std::abs(dn) / (scale * std::abs(hk)));
    }
    return report;
}

cx modified_inner_product(const Matrix& hcal, const Vector& u, const Vector& v) {
    return u.dot(v) - 0.5 * u.dot(hcal * v);
}

double modified_weight_min_eigenvalue(const Matrix& hcal) {
    Matrix w = Matrix::Identity(hcal.rows(), hcal.cols()) - 0.5 * hcal;
    Eigen::SelfAdjointEigenSolver<Matrix> es((w + w.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

RealAlphaRoute real_alpha_lanczos_route(const Matrix& u, const Vector& seed, double branch_tol) {
    Eigen::ComplexEigenSolver<Matrix> es(u);
    const Index d = u.rows();
    Vector sqrt_eig(d);
    for (Index i = 0; i < d; ++i) {
        double phase = std::arg(es.eigenvalues()(i));
        if (M_PI - std::abs(phase) < branch_tol)
            throw NumericalError("real_alpha_lanczos_route: eigenphase at the -pi branch cut; "
                                 "perturb or use doubled time U^2");
        sqrt_eig(i) = std::exp(kI * phase / 2.0);
    }
    Matrix inv_vectors = es.eigenvectors().inverse();
    Matrix usqrt = es.eigenvectors() * sqrt_eig.asDiagonal() * inv_vectors;
    Matrix hcal = kI * (usqrt - usqrt.inverse());
    hcal = ((hcal + hcal.adjoint()) / 2.0).eval();

    double wmin = modified_weight_min_eigenvalue(hcal);
    if (wmin <= 0.0)
        throw NumericalError("real_alpha_lanczos_route: modified weight 1 - H/2 is not positive "
                             "definite (min eigenvalue " + std::to_string(wmin) + ")");
    Matrix weight = Matrix::Identity(d, d) - 0.5 * hcal;

    auto lres = lanczos_weighted(HermitianOperator(hcal), weight, seed, {});
    RealAlphaRoute route;
    route.lanczos = lres.coeffs;
    std::vector<cx> alphas(lres.coeffs.a.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < alphas.size(); ++n) {
        acc += lres.coeffs.a[n];
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        alphas[n] = sign * (acc + 1.0);
    }
    route.alphas = VerblunskySequence::from_alphas(std::move(alphas));
    return route;
}

XYCircuit xy_circuit_build(const VerblunskySequence& seq) {
    seq.validate();
    XYCircuit circ;
    std::vector<cx> alphas = seq.alphas;
    if (alphas.size() % 2 == 1) {
        alphas.push_back(1.0); // decoupled unimodular pad site
        circ.padded = true;
    }
    circ.sites = static_cast<int>(alphas.size());
    for (cx a : alphas) {
        double mag = std::min(1.0, std::abs(a));
        circ.chis.push_back(mag == 0.0 ? 0.0 : std::arg(a));
        circ.thetas.push_back(std::acos(mag));
    }
    return circ;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix site_op(const Matrix& op, int k, int sites) {
    Matrix out = Matrix::Identity(1, 1);
    Matrix id = Matrix::Identity(2, 2);
    for (int j = 0; j < sites; ++j) out = kron(out, j == k ? op : id).eval();
    return out;
}

Matrix pauli(char axis) {
    Matrix m(2, 2);
    switch (axis) {
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, -kI, kI, 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

Matrix expm_hermitian(const Matrix& h, cx c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector ph = (c * es.eigenvalues().cast<cx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Two-site gate whose one-particle transfer is exactly the symmetric CMV
// block Theta(alpha_k): the printed XX+YY core sandwiched by the chi/4
// z-phases (opposite sign) and by exp(i pi Z_{k+1}/4) on the second site.
Matrix xy_bond_gate(double chi, double theta, int k, int sites) {
    Matrix zz = site_op(pauli('z'), k, sites) - site_op(pauli('z'), k + 1, sites);
    Matrix xxyy = site_op(pauli('x'), k, sites) * site_op(pauli('x'), k + 1, sites) +
                  site_op(pauli('y'), k, sites) * site_op(pauli('y'), k + 1, sites);
    Matrix zp = expm_hermitian(site_op(pauli('z'), k + 1, sites), kI * M_PI / 4.0);
    Matrix half = expm_hermitian(zz, -kI * chi / 4.0);
    return zp * half * expm_hermitian(xxyy, kI * theta / 2.0) * half * zp;
}

Matrix jw_annihilation(int k, int sites) {
    Matrix sm(2, 2);
    sm << 0, 0, 1, 0; // (sigma^x - i sigma^y)/2
    Matrix out = Matrix::Identity(1, 1);
    Matrix id = Matrix::Identity(2, 2);
    for (int j = 0; j < sites; ++j) {
        Matrix factor = (j < k) ? pauli('z') : (j == k ? sm : id);
        out = kron(out, factor).eval();
    }
    return out;
}

} // namespace

XYEquivalenceResult xy_equivalence_check(const VerblunskySequence& seq) {
    const int sites = seq.krylov_dim();
    if (sites % 2 != 0) throw std::invalid_argument("xy_equivalence_check: site count must be even");
    if (sites > 12) throw std::invalid_argument("xy_equivalence_check: d <= 12 (2^d many-body build)");
    XYCircuit circ = xy_circuit_build(seq);

    const Index dim = Index(1) << sites;
    Matrix even = Matrix::Identity(dim, dim);
    for (int k = 0; k + 1 < sites; k += 2)
        even = (xy_bond_gate(circ.chis[k], circ.thetas[k], k, sites) * even).eval();
    Matrix odd = Matrix::Identity(dim, dim);
    for (int k = 1; k + 1 < sites; k += 2)
        odd = (xy_bond_gate(circ.chis[k], circ.thetas[k], k, sites) * odd).eval();
    Matrix cap = expm_hermitian(site_op(pauli('z'), sites - 1, sites), -kI * circ.chis[sites - 1] / 2.0);
    Matrix uxy = odd * cap * even;

    std::vector<Matrix> cs;
    for (int k = 0; k < sites; ++k) cs.push_back(jw_annihilation(k, sites));

    XYEquivalenceResult result;
    result.transfer.resize(sites, sites);
    const double hs_norm = std::pow(2.0, sites - 1); // tr(c_k^dag c_k)
    for (int j = 0; j < sites; ++j) {
        Matrix x = uxy.adjoint() * cs[j] * uxy;
        Matrix reconstructed = Matrix::Zero(dim, dim);
        for (int k = 0; k < sites; ++k) {
            cx coeff = (cs[k].adjoint() * x).trace() / hs_norm;
            result.transfer(k, j) = coeff;
            reconstructed += coeff * cs[k];
        }
        result.max_span_residual = std::max(result.max_span_residual, (x - reconstructed).norm());
    }
    Matrix cmv = cmv_factorization(seq).dense();
    result.max_deviation = (result.transfer - cmv).cwiseAbs().maxCoeff();
    return result;
}

} // namespace fkrylov
