#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "nhpt/operators.hpp"
#include "support/oracles.hpp"

using namespace nhpt;
using Catch::Matchers::ContainsSubstring;

namespace {

Matrix random_matrix(oracle::SplitMix& rng, int n, double scale) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = Complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
        }
    }
    return m;
}

HermitianOperator random_hermitian(oracle::SplitMix& rng, int n, double scale) {
    Matrix m = random_matrix(rng, n, scale);
    return HermitianOperator(0.5 * (m + m.adjoint()).eval());
}

Matrix ep2_h0() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix ep3_h0() {
    Matrix m(3, 3);
    m << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    return m;
}

} // namespace

TEST_CASE("eigendecompose: two-level crossing Hamiltonian", "[operators]") {
    const auto es = eigendecompose(HermitianOperator(ep2_h0()));
    REQUIRE(es.omegas(0) == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(es.omegas(1) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(es.spread() == Catch::Approx(2.0).margin(1e-12));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(es.vectors(0, 0) - Complex(r, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 0) - Complex(-r, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(0, 1) - Complex(r, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 1) - Complex(r, 0)) < 1e-12);
}

TEST_CASE("eigendecompose: already diagonal", "[operators]") {
    Matrix m(2, 2);
    m << 0, 0, 0, 1;
    const auto es = eigendecompose(HermitianOperator(m));
    REQUIRE(es.omegas(0) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(es.omegas(1) == Catch::Approx(1.0).margin(1e-14));
    CHECK(std::abs(es.vectors(0, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 1) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("eigendecompose: three-level chain", "[operators]") {
    const auto es = eigendecompose(HermitianOperator(ep3_h0()));
    const double s2 = std::sqrt(2.0);
    REQUIRE(es.omegas(0) == Catch::Approx(-s2).margin(1e-12));
    REQUIRE(es.omegas(1) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(es.omegas(2) == Catch::Approx(s2).margin(1e-12));
    const double r = 1.0 / s2;
    // middle eigenvector (1, 0, -1)/sqrt(2)
    CHECK(std::abs(es.vectors(0, 1) - Complex(r, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 1)) < 1e-12);
    CHECK(std::abs(es.vectors(2, 1) - Complex(-r, 0)) < 1e-12);
    // outer eigenvectors have |components| (1/2, 1/sqrt(2), 1/2)
    for (int col : {0, 2}) {
        CHECK(std::abs(std::abs(es.vectors(0, col)) - 0.5) < 1e-12);
        CHECK(std::abs(std::abs(es.vectors(1, col)) - r) < 1e-12);
        CHECK(std::abs(std::abs(es.vectors(2, col)) - 0.5) < 1e-12);
        // phase convention pins the largest-magnitude (middle) component
        CHECK(es.vectors(1, col).real() > 0.0);
        CHECK(std::abs(es.vectors(1, col).imag()) < 1e-12);
    }
}

TEST_CASE("eigendecompose: reconstruction and orthonormality", "[operators][property]") {
    oracle::SplitMix rng(0xA11CE5EEDULL);
    for (int n : {2, 3, 4, 6, 8}) {
        const auto h0 = random_hermitian(rng, n, 2.0);
        const auto es = eigendecompose(h0);
        for (int i = 1; i < n; ++i) REQUIRE(es.omegas(i) >= es.omegas(i - 1));
        const Matrix gram = es.vectors.adjoint() * es.vectors;
        CHECK((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
        const Matrix rebuilt =
            es.vectors * es.omegas.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        CHECK((rebuilt - h0.entries).cwiseAbs().maxCoeff() < 1e-10);
        const Matrix resid = h0.entries * es.vectors -
                             es.vectors * es.omegas.cast<Complex>().asDiagonal();
        CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("eigendecompose: basis permutation leaves sorted omegas unchanged", "[operators]") {
    oracle::SplitMix rng(7u);
    const auto h0 = random_hermitian(rng, 5, 1.5);
    const auto es = eigendecompose(h0);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
    perm.setIdentity();
    std::swap(perm.indices()(0), perm.indices()(3));
    std::swap(perm.indices()(1), perm.indices()(4));
    const Matrix permuted = perm * h0.entries * perm.transpose();
    const auto es2 = eigendecompose(HermitianOperator(permuted));
    CHECK((es.omegas - es2.omegas).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eigendecompose: degenerate block stays orthonormal", "[operators]") {
    Matrix m = Matrix::Identity(3, 3);   // fully degenerate
    const auto es = eigendecompose(HermitianOperator(m));
    const Matrix gram = es.vectors.adjoint() * es.vectors;
    CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("HermitianOperator rejects asymmetric input naming the defect", "[operators][errors]") {
    Matrix m(2, 2);
    m << 0, 1.0, 1.5, 0;
    try {
        HermitianOperator h(m);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK_THAT(e.what(), ContainsSubstring("not Hermitian"));
        CHECK_THAT(e.what(), ContainsSubstring("0.5"));
    }
    CHECK_THROWS_AS(GeneralOperator(Matrix::Zero(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(GeneralOperator(Matrix::Zero(1, 1)), std::invalid_argument);
}

TEST_CASE("matrix_elements: two-level raising operator", "[operators]") {
    const auto basis = eigendecompose(HermitianOperator(ep2_h0()));
    Matrix h1(2, 2);
    h1 << 0, 0, 1, 0;   // |II><I|
    const auto el = matrix_elements(GeneralOperator(h1), basis);
    CHECK(std::abs(el.entries(0, 0) - Complex(-0.5, 0)) < 1e-12);
    CHECK(std::abs(el.entries(0, 1) - Complex(-0.5, 0)) < 1e-12);
    CHECK(std::abs(el.entries(1, 0) - Complex(0.5, 0)) < 1e-12);
    CHECK(std::abs(el.entries(1, 1) - Complex(0.5, 0)) < 1e-12);
    // non-Hermitian but |el_12| = |el_21| for this operator
    CHECK(std::abs(std::abs(el.entries(0, 1)) - std::abs(el.entries(1, 0))) < 1e-12);
    CHECK((el.entries - el.entries.adjoint()).cwiseAbs().maxCoeff() > 0.5);
}

TEST_CASE("matrix_elements: identity maps to identity", "[operators]") {
    oracle::SplitMix rng(42u);
    const auto basis = eigendecompose(random_hermitian(rng, 4, 1.0));
    const auto el = matrix_elements(GeneralOperator(Matrix::Identity(4, 4)), basis);
    CHECK((el.entries - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix_elements: three-level ladder coefficient pattern", "[operators]") {
    const auto basis = eigendecompose(HermitianOperator(ep3_h0()));
    Matrix h1 = Matrix::Zero(3, 3);
    h1(1, 0) = 1;   // |II><I|
    h1(2, 1) = 1;   // |III><II|
    const auto el = matrix_elements(GeneralOperator(h1), basis);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(el.entries(0, 0)) - r) < 1e-12);
    CHECK(std::abs(std::abs(el.entries(0, 1)) - 0.5) < 1e-12);
    CHECK(std::abs(el.entries(0, 2)) < 1e-12);
    CHECK(std::abs(el.entries(2, 0)) < 1e-12);
    CHECK(std::abs(std::abs(el.entries(1, 1))) < 1e-12);
    CHECK(std::abs(std::abs(el.entries(2, 2)) - r) < 1e-12);
}

TEST_CASE("matrix_elements: Hermitian input stays Hermitian", "[operators][property]") {
    oracle::SplitMix rng(99u);
    const auto basis = eigendecompose(random_hermitian(rng, 5, 1.0));
    const auto h1 = random_hermitian(rng, 5, 1.0);
    const auto el = matrix_elements(h1.as_general(), basis);
    CHECK((el.entries - el.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Matrix bad = Matrix::Zero(3, 3);
    CHECK_THROWS_AS(matrix_elements(GeneralOperator(bad), basis), std::invalid_argument);
}

TEST_CASE("bare_to_eigen and back", "[operators]") {
    const auto basis = eigendecompose(HermitianOperator(ep2_h0()));
    const double r = 1.0 / std::sqrt(2.0);

    Vector psi(2);
    psi << 1, 0;   // |I>
    const Vector c = bare_to_eigen(psi, basis, 0.0);
    CHECK(std::abs(c(0) - Complex(r, 0)) < 1e-12);
    CHECK(std::abs(c(1) - Complex(r, 0)) < 1e-12);

    Vector c10(2);
    c10 << 1, 0;
    const Vector back = eigen_to_bare(c10, basis, 0.0);
    CHECK(std::abs(back(0) - Complex(r, 0)) < 1e-12);
    CHECK(std::abs(back(1) - Complex(-r, 0)) < 1e-12);

    oracle::SplitMix rng(5u);
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(2);
        v << Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double t = rng.uniform(-30.0, 30.0);
        const Vector round = eigen_to_bare(bare_to_eigen(v, basis, t), basis, t);
        CHECK((round - v).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(bare_to_eigen(v, basis, t).norm() == Catch::Approx(v.norm()).margin(1e-12));
    }

    Vector wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(bare_to_eigen(wrong, basis, 0.0), std::invalid_argument);
}
