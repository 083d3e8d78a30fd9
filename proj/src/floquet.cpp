#include "fkrylov/floquet.hpp"

#include <cmath>
#include <memory>

#include "fkrylov/krylov.hpp"

namespace fkrylov {

namespace {

// exp(c * H) for Hermitian H via exact eigendecomposition.
Matrix expm_hermitian(const Matrix& h, cx c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases = (c * es.eigenvalues().cast<cx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

constexpr cx kI{0.0, 1.0};

} // namespace

AngularMomentum angular_momentum_ops(double j) {
    double two_j = 2.0 * j;
    if (std::abs(two_j - std::lround(two_j)) > 1e-12 || j <= 0.0)
        throw std::invalid_argument("angular_momentum_ops: 2J must be a positive integer");
    const int d = static_cast<int>(std::lround(two_j)) + 1;
    AngularMomentum ops;
    ops.jz = Matrix::Zero(d, d);
    Matrix jplus = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        double m = j - i;
        ops.jz(i, i) = m;
        if (i > 0) jplus(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1)); // raises m
    }
    ops.jx = (jplus + jplus.adjoint()) / 2.0;
    ops.jy = (jplus - jplus.adjoint()) / (2.0 * kI);
    return ops;
}

UnitaryOperator kicked_top(const KickedTopParams& p) {
    auto ops = angular_momentum_ops(p.j);
    Matrix field = p.b[0] * ops.jx + p.b[1] * ops.jy + p.b[2] * ops.jz;
    Matrix u = expm_hermitian(ops.jx * ops.jx, -kI * p.kappa_x / (2.0 * p.j)) *
               expm_hermitian(ops.jz * ops.jz, -kI * p.kappa_z / (2.0 * p.j)) *
               expm_hermitian(field, -kI);
    return UnitaryOperator(std::move(u), "kicked_top");
}

Vector coherent_state(double j, double theta, double phi) {
    auto ops = angular_momentum_ops(j);
    const int d = ops.jz.rows();
    Vector highest = Vector::Zero(d);
    highest(0) = 1.0;
    // rotate the top of the sphere to (theta, phi): angle theta about the
    // axis (-sin phi, cos phi, 0)
    Matrix axis = std::cos(phi) * ops.jy - std::sin(phi) * ops.jx;
    return expm_hermitian(axis, -kI * theta) * highest;
}

std::pair<UnitaryOperator, SymmetrySector> parity_sector(const UnitaryOperator& u, char axis,
                                                         bool even, double tol) {
    const int d = static_cast<int>(u.dim());
    double j = (d - 1) / 2.0;
    auto ops = angular_momentum_ops(j);
    const Matrix* gen = nullptr;
    switch (axis) {
        case 'x': gen = &ops.jx; break;
        case 'y': gen = &ops.jy; break;
        case 'z': gen = &ops.jz; break;
        default: throw std::invalid_argument("parity_sector: axis must be x, y or z");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(*gen);
    Matrix reflection = es.eigenvectors() *
                        (kI * M_PI * es.eigenvalues().cast<cx>()).array().exp().matrix().asDiagonal() *
                        es.eigenvectors().adjoint();
    const Matrix& dense = u.dense();
    double comm = (dense * reflection - reflection * dense).cwiseAbs().maxCoeff();
    if (comm > tol)
        throw std::invalid_argument(std::string("parity_sector: U does not commute with exp(i pi J") +
                                    axis + "), ||[U,R]|| = " + std::to_string(comm));

    // Eigenvalues of R are exp(i pi m): for integer J the classes are +1
    // ("even" m) and -1; for half-integer J they are +i and -i.
    bool integer_j = (d % 2 == 1);
    cx target = integer_j ? cx(even ? 1.0 : -1.0, 0.0) : cx(0.0, even ? 1.0 : -1.0);
    std::vector<int> members;
    for (int i = 0; i < d; ++i) {
        double m = es.eigenvalues()(i);
        cx r = std::exp(kI * M_PI * m);
        if (std::abs(r - target) < 0.5) members.push_back(i);
    }
    SymmetrySector sector;
    sector.kind = SymmetrySector::Kind::Parity;
    sector.dim = static_cast<int>(members.size());
    sector.isometry.resize(d, sector.dim);
    for (int c = 0; c < sector.dim; ++c) sector.isometry.col(c) = es.eigenvectors().col(members[c]);
    sector.label = std::string("parity_") + axis + (even ? "_even" : "_odd");

    return {project_unitary(u, sector, tol), sector};
}

UnitaryOperator kicked_ising(const KickedIsingParams& p) {
    const int length = p.length;
    if (length < 2 || length > 26) throw std::invalid_argument("kicked_ising: 2 <= L <= 26");
    const std::size_t dim = std::size_t(1) << length;

    // single-site rotation exp(-i b.sigma)
    Eigen::Matrix2cd bs;
    bs << p.b[2], cx(p.b[0], -p.b[1]), cx(p.b[0], p.b[1]), -p.b[2];
    double bmag = std::sqrt(p.b[0] * p.b[0] + p.b[1] * p.b[1] + p.b[2] * p.b[2]);
    Eigen::Matrix2cd g;
    if (bmag > 0.0)
        g = std::cos(bmag) * Eigen::Matrix2cd::Identity() - kI * std::sin(bmag) / bmag * bs;
    else
        g = Eigen::Matrix2cd::Identity();

    // ZZ phase layer, periodic
    auto phases = std::make_shared<Vector>(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        int e = 0;
        for (int k = 0; k < length; ++k) {
            int zk = ((s >> k) & 1) ? -1 : 1;
            int zk1 = ((s >> ((k + 1) % length)) & 1) ? -1 : 1;
            e += zk * zk1;
        }
        (*phases)(s) = std::exp(-kI * p.j * static_cast<double>(e));
    }

    auto apply_field = [length, dim](const Eigen::Matrix2cd& gate, const Vector& v) {
        Vector out = v;
        for (int k = 0; k < length; ++k) {
            const std::size_t bit = std::size_t(1) << k;
            for (std::size_t s = 0; s < dim; ++s) {
                if (s & bit) continue;
                cx a = out(s), b = out(s | bit);
                out(s) = gate(0, 0) * a + gate(0, 1) * b;
                out(s | bit) = gate(1, 0) * a + gate(1, 1) * b;
            }
        }
        return out;
    };

    Eigen::Matrix2cd gd = g.adjoint();
    auto fwd = [phases, apply_field, g](const Vector& v) -> Vector {
        Vector out = apply_field(g, v);
        out.array() *= phases->array();
        return out;
    };
    auto bwd = [phases, apply_field, gd](const Vector& v) -> Vector {
        Vector out = v;
        out.array() *= phases->array().conjugate();
        return apply_field(gd, out);
    };
    return UnitaryOperator(static_cast<Index>(dim), fwd, bwd, "kicked_ising");
}

SymmetrySector momentum_sector(int length, int k) {
    if (k < 0 || k >= length) throw std::invalid_argument("momentum_sector: 0 <= k < L");
    const std::size_t dim = std::size_t(1) << length;
    auto shift = [length](std::size_t s) {
        // cyclic shift of site labels: bit k of the result is bit k-1 of s
        std::size_t top = std::size_t(1) << (length - 1);
        return ((s << 1) & ((std::size_t(1) << length) - 1)) | ((s & top) ? 1 : 0);
    };

    std::vector<std::pair<std::size_t, int>> orbits; // representative, period
    std::vector<bool> seen(dim, false);
    for (std::size_t s = 0; s < dim; ++s) {
        if (seen[s]) continue;
        std::size_t t = s;
        int period = 0;
        do {
            seen[t] = true;
            t = shift(t);
            ++period;
        } while (t != s);
        if ((std::int64_t(k) * period) % length == 0) orbits.emplace_back(s, period);
    }

    SymmetrySector sector;
    sector.kind = SymmetrySector::Kind::Momentum;
    sector.dim = static_cast<int>(orbits.size());
    sector.isometry = Matrix::Zero(dim, sector.dim);
    for (int c = 0; c < sector.dim; ++c) {
        auto [rep, period] = orbits[c];
        std::size_t t = rep;
        double norm = 1.0 / std::sqrt(static_cast<double>(period));
        for (int m = 0; m < period; ++m) {
            sector.isometry(t, c) = norm * std::exp(2.0 * M_PI * kI * double(k) * double(m) / double(length));
            t = shift(t);
        }
    }
    sector.label = "momentum_" + std::to_string(k);
    return sector;
}

UnitaryOperator project_unitary(const UnitaryOperator& u, const SymmetrySector& sector, double tol) {
    Matrix image(u.dim(), sector.dim);
    for (int c = 0; c < sector.dim; ++c) image.col(c) = u.apply(sector.isometry.col(c));
    Matrix restricted = sector.isometry.adjoint() * image;
    double defect =
        (restricted.adjoint() * restricted - Matrix::Identity(sector.dim, sector.dim)).cwiseAbs().maxCoeff();
    if (defect > tol)
        throw std::invalid_argument("project_unitary: sector is not invariant, defect = " +
                                    std::to_string(defect));
    return UnitaryOperator(std::move(restricted), u.name() + "[" + sector.label + "]");
}

Vector random_low_entanglement_seed(const SymmetrySector& sector, int m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("random_low_entanglement_seed: m >= 1");
    const Index dim = sector.isometry.rows();
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vector full = Vector::Zero(dim);
        for (int i = 0; i < m; ++i) {
            auto idx = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(dim));
            full(idx) += rng.normal_cx();
        }
        Vector proj = sector.project(full);
        double n = proj.norm();
        if (n > 1e-8) return proj / n;
    }
    throw NumericalError("random_low_entanglement_seed: projection keeps annihilating the seed");
}

Matrix dense_superoperator(const Matrix& u) {
    const Index d = u.rows();
    Matrix out(d * d, d * d);
    Matrix ut = u.transpose();
    Matrix ud = u.adjoint();
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i)
            out.block(i * d, j * d, d, d) = ut(i, j) * ud;
    return out;
}

VectorizedEvolution vectorize_superoperator(const UnitaryOperator& u, const Matrix& op, bool dense) {
    const Index d = u.dim();
    if (op.rows() != d || op.cols() != d) throw std::invalid_argument("vectorize_superoperator: shape");
    if (op.norm() == 0.0) throw std::invalid_argument("vectorize_superoperator: zero operator");
    double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Vector state = Eigen::Map<const Vector>(op.data(), d * d) * scale;

    VectorizedEvolution out;
    out.state = std::move(state);
    if (dense) {
        out.evolution = UnitaryOperator(dense_superoperator(u.dense()), "superoperator");
        return out;
    }
    auto udense = std::make_shared<Matrix>(u.materialize());
    auto fwd = [udense, d](const Vector& v) -> Vector {
        Eigen::Map<const Matrix> m(v.data(), d, d);
        Matrix r = udense->adjoint() * m * (*udense);
        return Eigen::Map<Vector>(r.data(), d * d);
    };
    auto bwd = [udense, d](const Vector& v) -> Vector {
        Eigen::Map<const Matrix> m(v.data(), d, d);
        Matrix r = (*udense) * m * udense->adjoint();
        return Eigen::Map<Vector>(r.data(), d * d);
    };
    out.evolution = UnitaryOperator(d * d, fwd, bwd, "superoperator[" + u.name() + "]");
    return out;
}

Matrix pauli_site(int length, int site, char axis) {
    const std::size_t dim = std::size_t(1) << length;
    Matrix out = Matrix::Zero(dim, dim);
    const std::size_t bit = std::size_t(1) << site;
    for (std::size_t s = 0; s < dim; ++s) {
        switch (axis) {
            case 'x': out(s ^ bit, s) = 1.0; break;
            case 'y': out(s ^ bit, s) = (s & bit) ? -kI : kI; break;
            case 'z': out(s, s) = (s & bit) ? -1.0 : 1.0; break;
            default: throw std::invalid_argument("pauli_site: axis must be x, y or z");
        }
    }
    return out;
}

KickedIsingParams self_dual_kicked_ising(double s) {
    if (s < 1.0 / std::sqrt(2.0) || s > 1.0)
        throw std::invalid_argument("self_dual_kicked_ising: need 1/sqrt(2) <= s <= 1");
    KickedIsingParams p;
    p.j = M_PI / 4.0;
    double bmag = std::asin(1.0 / (s * std::sqrt(2.0)));
    p.b = {bmag * s, 0.0, bmag * std::sqrt(std::max(0.0, 1.0 - s * s))};
    return p;
}

int krylov_orbit_rank(const UnitaryOperator& u, const Vector& state, int iterations, double rel_tol) {
    Matrix iters(state.size(), iterations + 1);
    Vector v = state / state.norm();
    for (int t = 0; t <= iterations; ++t) {
        iters.col(t) = v;
        if (t < iterations) v = u.apply(v);
    }
    Eigen::BDCSVD<Matrix> svd(iters);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0)) ++rank;
    return rank;
}

DualUnitaryResult dual_unitary_experiment(const KickedIsingParams& p, int site, char axis,
                                          int max_steps, double threshold) {
    UnitaryOperator u = kicked_ising(p);
    Matrix seed = pauli_site(p.length, site, axis);
    auto vec = vectorize_superoperator(u, seed);
    KrylovOptions opts;
    opts.max_steps = max_steps;
    auto res = cmv_build(vec.evolution, vec.state, opts);
    DualUnitaryResult out;
    out.alphas = res.alphas.alphas;
    for (std::size_t n = 0; n < out.alphas.size(); ++n) {
        if (std::abs(out.alphas[n]) > threshold) {
            out.first_above_threshold = static_cast<int>(n);
            break;
        }
    }
    return out;
}

} // namespace fkrylov
