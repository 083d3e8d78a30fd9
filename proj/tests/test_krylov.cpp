#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fkrylov/ensembles.hpp>
#include <fkrylov/krylov.hpp>
#include <fkrylov/rng.hpp>

using namespace fkrylov;

namespace {

// Independent oracle: orthonormalize {psi, U psi, U^2 psi, ...} by plain
// Gram-Schmidt. With the natural phase (positive coefficient on the newest
// power) this is exactly the Szego Phi sequence.
Matrix gram_schmidt_powers(const Matrix& u, const Vector& psi, double tol = 1e-9) {
    const Index d = u.rows();
    Matrix basis(d, d);
    Vector v = psi / psi.norm();
    Index cols = 0;
    while (cols < d) {
        for (int pass = 0; pass < 2; ++pass)
            for (Index j = 0; j < cols; ++j) v -= basis.col(j) * basis.col(j).dot(v);
        double n = v.norm();
        if (n < tol) break;
        basis.col(cols++) = v / n;
        v = u * basis.col(cols - 1);
    }
    return basis.leftCols(cols);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double orthonormality_defect(const Matrix& basis) {
    Matrix g = basis.adjoint() * basis;
    return max_abs(g - Matrix::Identity(g.rows(), g.cols()));
}

Vector uniform_state(Index d) { return Vector::Constant(d, cx(1.0, 0.0)) / std::sqrt(double(d)); }

Matrix random_hermitian(Index d, Rng& rng) {
    Matrix a(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) a(i, j) = rng.normal_cx();
    return (a + a.adjoint()) / 2.0;
}

} // namespace

TEST_CASE("lanczos: eigenvector seed terminates at D = 1") {
    HermitianOperator h(Matrix::Identity(5, 5));
    Rng rng(1);
    Vector psi = rng.normal_vector(5);
    auto res = lanczos(h, psi);
    CHECK(res.coeffs.krylov_dim() == 1);
    CHECK(res.coeffs.a[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lanczos: 2x2 hand-computed case") {
    Matrix h(2, 2);
    h << 1.0, 0.0, 0.0, -1.0;
    Vector psi(2);
    psi << 1.0, 1.0;
    auto res = lanczos(HermitianOperator(h), psi);
    REQUIRE(res.coeffs.krylov_dim() == 2);
    CHECK(std::abs(res.coeffs.a[0]) < 1e-14);
    CHECK(res.coeffs.b[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(res.coeffs.a[1]) < 1e-14);
}

TEST_CASE("lanczos: tridiagonal reconstruction matches basis matrix elements") {
    Rng rng(7);
    Matrix h = random_hermitian(16, rng);
    Vector psi = rng.normal_vector(16);
    auto res = lanczos(HermitianOperator(h), psi);
    const int D = res.coeffs.krylov_dim();
    REQUIRE(D == 16);
    Matrix t = res.basis.vectors.adjoint() * h * res.basis.vectors;
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            cx expected = 0.0;
            if (m == n) expected = res.coeffs.a[n];
            else if (m == n + 1) expected = res.coeffs.b[m];
            else if (m == n - 1) expected = res.coeffs.b[n];
            CHECK(std::abs(t(m, n) - expected) < 1e-10);
        }
    CHECK(orthonormality_defect(res.basis.vectors) < 1e-12);
}

TEST_CASE("lanczos: zero seed and non-Hermitian applicator rejected") {
    HermitianOperator h(Matrix::Identity(4, 4));
    CHECK_THROWS_AS(lanczos(h, Vector::Zero(4)), std::invalid_argument);

    Matrix bad(3, 3);
    bad << 0, 1, 0, 0, 0, 1, 0, 0, 0;
    KrylovOptions opts;
    opts.check_operator = true;
    Vector psi = Vector::Ones(3);
    CHECK_THROWS_AS(lanczos(HermitianOperator(bad), psi, opts), std::invalid_argument);
}

TEST_CASE("szego: identity gives alpha_0 = 1, D = 1") {
    Rng rng(3);
    Vector psi = rng.normal_vector(6);
    auto res = szego(UnitaryOperator(Matrix::Identity(6, 6)), psi);
    REQUIRE(res.alphas.krylov_dim() == 1);
    CHECK(std::abs(res.alphas.alphas[0] - cx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("szego: 2x2 brute-force case alpha = (0, 1)") {
    Matrix u(2, 2);
    u << 1.0, 0.0, 0.0, -1.0;
    Vector psi(2);
    psi << 1.0, 1.0;
    auto res = szego(UnitaryOperator(u), psi);
    REQUIRE(res.alphas.krylov_dim() == 2);
    CHECK(std::abs(res.alphas.alphas[0]) < 1e-14);
    CHECK(res.alphas.rhos[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(res.alphas.alphas[1] - cx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("szego: clock measure, uniform seed over diag(1, i, -1, -i)") {
    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = cx(0.0, 1.0);
    u(2, 2) = -1.0;
    u(3, 3) = cx(0.0, -1.0);
    auto res = szego(UnitaryOperator(u), uniform_state(4));
    REQUIRE(res.alphas.krylov_dim() == 4);
    for (int n = 0; n < 3; ++n) CHECK(std::abs(res.alphas.alphas[n]) < 1e-12);
    CHECK(std::abs(res.alphas.alphas[3]) == doctest::Approx(1.0).epsilon(1e-12));
    // basis matches plain Gram-Schmidt on powers
    Matrix oracle = gram_schmidt_powers(u, uniform_state(4));
    REQUIRE(oracle.cols() == 4);
    CHECK(max_abs(res.basis.vectors - oracle) < 1e-10);
}

TEST_CASE("szego: early termination inside a larger space") {
    // Seed supported on a 4-dimensional clock subspace of d = 12: the
    // recursion must stop at D = 4 even though rho's rounding floor is
    // far above the spec's 1e-12 sqrt(d) threshold.
    Rng rng(11);
    Matrix u = Matrix::Zero(12, 12);
    for (Index k = 0; k < 12; ++k) {
        double phase = (k < 4) ? M_PI_2 * static_cast<double>(k) : 2.0 * M_PI * rng.uniform();
        u(k, k) = cx(std::cos(phase), std::sin(phase));
    }
    Vector psi = Vector::Zero(12);
    psi.head(4).setConstant(0.5);
    auto res = szego(UnitaryOperator(u), psi);
    CHECK(res.alphas.krylov_dim() == 4);
    CHECK(res.alphas.terminated());
}

TEST_CASE("szego: corrupt operator aborts with diagnostic") {
    Rng rng(5);
    Matrix u = 1.5 * Matrix::Identity(8, 8); // |alpha_0| = 1.5 escapes the disk
    Vector psi = rng.normal_vector(8);
    CHECK_THROWS_AS(szego(UnitaryOperator(u), psi), NumericalError);

    KrylovOptions opts;
    opts.check_operator = true; // spot-check rejects it before any step
    Matrix u2 = 1.5 * haar_unitary(8, rng);
    CHECK_THROWS_AS(szego(UnitaryOperator(u2), psi, opts), std::invalid_argument);
}

TEST_CASE("cmv_build: identity and 2x2 cases") {
    Rng rng(9);
    Vector psi = rng.normal_vector(5);
    auto res = cmv_build(UnitaryOperator(Matrix::Identity(5, 5)), psi);
    REQUIRE(res.alphas.krylov_dim() == 1);
    CHECK(std::abs(res.alphas.alphas[0] - cx(1.0, 0.0)) < 1e-12);
    CHECK(max_abs(res.basis.vectors - psi / psi.norm()) < 1e-12);

    Matrix u(2, 2);
    u << 1.0, 0.0, 0.0, -1.0;
    Vector seed(2);
    seed << 1.0, 1.0;
    auto res2 = cmv_build(UnitaryOperator(u), seed);
    REQUIRE(res2.alphas.krylov_dim() == 2);
    CHECK(std::abs(res2.alphas.alphas[0]) < 1e-14);
    CHECK(std::abs(res2.alphas.alphas[1] - cx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("cmv_build agrees with szego on Haar-random unitaries") {
    Rng rng(17);
    for (int rep = 0; rep < 3; ++rep) {
        Index d = 32;
        UnitaryOperator u(haar_unitary(d, rng));
        Vector psi = rng.normal_vector(d);
        auto s = szego(u, psi);
        auto c = cmv_build(u, psi);
        REQUIRE(s.alphas.krylov_dim() == c.alphas.krylov_dim());
        for (int n = 0; n < s.alphas.krylov_dim(); ++n)
            CHECK(std::abs(s.alphas.alphas[n] - c.alphas.alphas[n]) < 1e-8);
        CHECK(orthonormality_defect(s.basis.vectors) < 1e-8);
        CHECK(orthonormality_defect(c.basis.vectors) < 1e-8);
    }
}

TEST_CASE("szego companions: footnote orthogonality properties") {
    Rng rng(23);
    Index d = 16;
    Matrix u = haar_unitary(d, rng);
    Vector psi = rng.normal_vector(d);
    auto res = szego(UnitaryOperator(u), psi);
    const int D = res.alphas.krylov_dim();
    Matrix phi = res.basis.vectors;
    Matrix phit = res.basis.companions;
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < m; ++n) {
            CHECK(std::abs(phi.col(m).dot(phit.col(n))) < 1e-8);        // <Phi_m|Phit_n>, m > n
            CHECK(std::abs(phit.col(m).dot(u * phi.col(n))) < 1e-8);    // <Phit_m|U|Phi_n>, m > n
        }
    for (int n = 0; n < D; ++n) CHECK(phit.col(n).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hessenberg_matrix: D = 1 and alpha = (0, 1) structure") {
    cx a0 = std::polar(1.0, 0.83);
    auto seq = VerblunskySequence::from_alphas({a0});
    Matrix h = hessenberg_matrix(seq);
    REQUIRE(h.rows() == 1);
    CHECK(std::abs(h(0, 0) - std::conj(a0)) < 1e-15);

    auto seq2 = VerblunskySequence::from_alphas({cx(0.0), cx(1.0)});
    Matrix h2 = hessenberg_matrix(seq2);
    Matrix want(2, 2);
    want << 0.0, 1.0, 1.0, 0.0;
    CHECK(max_abs(h2 - want) < 1e-15);
    CHECK(max_abs(h2.adjoint() * h2 - Matrix::Identity(2, 2)) < 1e-15);

    CHECK_THROWS_AS(hessenberg_matrix(VerblunskySequence{}), std::invalid_argument);
}

TEST_CASE("hessenberg_matrix equals basis matrix elements on random unitary") {
    Rng rng(29);
    Index d = 24;
    Matrix u = haar_unitary(d, rng);
    Vector psi = rng.normal_vector(d);
    auto res = szego(UnitaryOperator(u), psi);
    Matrix direct = res.basis.vectors.adjoint() * u * res.basis.vectors;
    Matrix fromseq = hessenberg_matrix(res.alphas);
    CHECK(max_abs(direct - fromseq) < 1e-8);
    // unitary when terminated
    CHECK(res.alphas.terminated());
    CHECK(max_abs(fromseq.adjoint() * fromseq - Matrix::Identity(d, d)) < 1e-7);
}

TEST_CASE("cmv_factorization: free chain is a banded permutation-like unitary") {
    const int D = 12;
    std::vector<cx> al(D, cx(0.0));
    al[D - 1] = std::polar(1.0, 0.37);
    auto form = cmv_factorization(VerblunskySequence::from_alphas(al));
    Matrix c = form.dense();
    CHECK(max_abs(c.adjoint() * c - Matrix::Identity(D, D)) < 1e-14);
    for (Index i = 0; i < D; ++i)
        for (Index j = 0; j < D; ++j)
            if (std::abs(i - j) > 2) CHECK(std::abs(c(i, j)) < 1e-15);
    // ballistic transport: U^t delta_0 sits on a single site, moving two
    // sites per step (odd sites 1, 3, 5, ... in this convention; see the
    // Hessenberg/CMV convention notes)
    Vector v = Vector::Zero(D);
    v(0) = 1.0;
    for (int t = 1; 2 * t - 1 < D - 1; ++t) {
        form.apply_in_place(v);
        for (Index n = 0; n < D; ++n) {
            double expect = (n == 2 * t - 1) ? 1.0 : 0.0;
            CHECK(std::abs(std::abs(v(n)) - expect) < 1e-14);
        }
    }
}

TEST_CASE("cmv_factorization: D = 2 equals hessenberg matrix") {
    auto seq = VerblunskySequence::from_alphas({cx(0.0), cx(1.0)});
    auto form = cmv_factorization(seq);
    CHECK(max_abs(form.dense() - hessenberg_matrix(seq)) < 1e-15);
}

TEST_CASE("cmv_factorization matches basis matrix elements, bandwidth 2") {
    Rng rng(31);
    Index d = 32;
    Matrix u = haar_unitary(d, rng);
    Vector psi = rng.normal_vector(d);
    auto res = cmv_build(UnitaryOperator(u), psi);
    REQUIRE(res.alphas.terminated());
    auto form = cmv_factorization(res.alphas);
    Matrix direct = res.basis.vectors.adjoint() * u * res.basis.vectors;
    Matrix product = form.dense();
    CHECK(max_abs(direct - product) < 1e-8);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            if (std::abs(i - j) > 2) CHECK(std::abs(product(i, j)) < 1e-8);
    // banded application agrees with the dense product
    Vector v = rng.normal_vector(d);
    Vector via_apply = v;
    form.apply_in_place(via_apply);
    CHECK((via_apply - product * v).norm() < 1e-12);
    Vector adj = v;
    form.apply_adjoint_in_place(adj);
    CHECK((adj - product.adjoint() * v).norm() < 1e-12);
}

TEST_CASE("cmv_factorization: interior unimodular coefficient splits the chain") {
    std::vector<cx> al = {cx(0.3, 0.1), std::polar(1.0, 1.2), cx(-0.2, 0.4), std::polar(1.0, -0.5)};
    auto form = cmv_factorization(VerblunskySequence::from_alphas(al));
    REQUIRE(form.decoupled_bonds.size() == 1);
    CHECK(form.decoupled_bonds[0] == 1);
    Matrix c = form.dense();
    CHECK(max_abs(c.adjoint() * c - Matrix::Identity(4, 4)) < 1e-14);
    // no amplitude crosses the decoupled bond
    for (Index i = 2; i < 4; ++i)
        for (Index j = 0; j < 2; ++j) {
            CHECK(std::abs(c(i, j)) < 1e-15);
            CHECK(std::abs(c(j, i)) < 1e-15);
        }

    // not-terminated sequence rejected
    CHECK_THROWS_AS(cmv_factorization(VerblunskySequence::from_alphas({cx(0.5), cx(0.5)})),
                    std::invalid_argument);
}

TEST_CASE("reorthogonalize: trivial and random cases") {
    Rng rng(37);
    Index d = 64;
    Matrix q = haar_unitary(d, rng).leftCols(10);

    Vector ortho = rng.normal_vector(d);
    ortho = reorthogonalize(q, ortho);
    Vector again = reorthogonalize(q, ortho);
    CHECK((again - ortho).norm() < 1e-14 * ortho.norm());

    Vector member = q.col(3);
    CHECK(reorthogonalize(q, member).norm() < 1e-10);

    Vector random = rng.normal_vector(d);
    Vector projected = reorthogonalize(q, random);
    for (Index j = 0; j < q.cols(); ++j) CHECK(std::abs(q.col(j).dot(projected)) < 1e-12);
}

TEST_CASE("termination: eigenvector seed and D <= d") {
    Rng rng(41);
    Index d = 10;
    Matrix u = haar_unitary(d, rng);
    Eigen::ComplexEigenSolver<Matrix> es(u);
    auto res = szego(UnitaryOperator(u), es.eigenvectors().col(2));
    CHECK(res.alphas.krylov_dim() == 1);

    Vector psi = rng.normal_vector(d);
    auto res2 = szego(UnitaryOperator(u), psi);
    CHECK(res2.alphas.krylov_dim() <= d);
}

TEST_CASE("max_steps truncates without termination") {
    Rng rng(43);
    Index d = 24;
    UnitaryOperator u(haar_unitary(d, rng));
    Vector psi = rng.normal_vector(d);
    KrylovOptions opts;
    opts.max_steps = 5;
    auto res = cmv_build(u, psi, opts);
    CHECK(res.alphas.krylov_dim() == 5);
    CHECK(!res.alphas.terminated());
}
