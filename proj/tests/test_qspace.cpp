#include <catch2/catch_amalgamated.hpp>

#include "mtcav/dynamics.hpp"
#include "mtcav/qspace.hpp"

using namespace mtcav;

TEST_CASE("fock ladder acts as annihilator/creator with hard truncation") {
    FockSpace space(4);
    auto [a, ad] = fock_ladder(space);

    Vector vac = Vector::Zero(space.dim());
    vac(0) = 1.0;
    REQUIRE((a.matrix() * vac).norm() == 0.0); // a|0> = 0

    Vector one = ad.matrix() * vac;
    REQUIRE(std::abs(one(1) - Complex(1.0, 0.0)) < 1e-15); // a†|0> = |1>
    REQUIRE(one.norm() == Catch::Approx(1.0));

    // a†|n_max> = 0, a|n_max> maps down
    Vector top = Vector::Zero(space.dim());
    top(space.n_max) = 1.0;
    REQUIRE((ad.matrix() * top).norm() == 0.0);
    REQUIRE(std::abs((a.matrix() * top)(space.n_max - 1)) == Catch::Approx(std::sqrt(4.0)));

    // [a, a†] = I - (n_max+1)|n_max><n_max| entrywise
    Matrix comm = a.matrix() * ad.matrix() - ad.matrix() * a.matrix();
    Matrix expected = Matrix::Identity(space.dim(), space.dim());
    expected(space.n_max, space.n_max) = -double(space.n_max);
    REQUIRE((comm - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fock space rejects n_max = 0") {
    REQUIRE_THROWS_AS(FockSpace(0), ConfigError);
}

TEST_CASE("collective spin matrices satisfy su(2) in the maximal sector") {
    SECTION("N=1 gives spin-1/2") {
        auto ops = collective_spin(DickeSpace(1));
        REQUIRE(ops.sz.matrix()(0, 0).real() == Catch::Approx(-0.5));
        REQUIRE(ops.sz.matrix()(1, 1).real() == Catch::Approx(0.5));
    }
    SECTION("N=2 ladder coefficient") {
        auto ops = collective_spin(DickeSpace(2));
        // S+|S=1, m=-1> = sqrt(2) |S=1, m=0>
        REQUIRE(ops.s_plus.matrix()(1, 0).real() == Catch::Approx(std::sqrt(2.0)));
    }
    SECTION("commutator [S+, S-] = 2 Sz") {
        for (int n : {1, 2, 5, 8}) {
            auto ops = collective_spin(DickeSpace(n));
            Matrix lhs = ops.s_plus.matrix() * ops.s_minus.matrix() -
                         ops.s_minus.matrix() * ops.s_plus.matrix();
            REQUIRE((lhs - 2.0 * ops.sz.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    REQUIRE_THROWS_AS(DickeSpace(0), ConfigError);
}

TEST_CASE("composite space and excitation operator") {
    auto [space, c] = tensor_and_excitation(DickeSpace(2), FockSpace(3));
    REQUIRE(space.dim() == 12);

    SECTION("C commutes with any Tavis-Cummings Hamiltonian") {
        auto [sp5, c5] = tensor_and_excitation(DickeSpace(3), FockSpace(5));
        TavisCummingsParams p(1.3, 0.9, 0.27, 3, 5);
        Operator h = build_tc_hamiltonian(p, sp5);
        REQUIRE(commutator(h, c5).max_abs() < 1e-12);
    }

    SECTION("C eigenvalue on |S=1/2, m=-1/2> ⊗ |1>") {
        auto [sp, cc] = tensor_and_excitation(DickeSpace(1), FockSpace(2));
        Vector v = Vector::Zero(sp.dim());
        v(sp.index(0, 1)) = 1.0; // m = -1/2 is index 0
        Vector cv = cc.matrix() * v;
        REQUIRE(std::abs(cv(sp.index(0, 1)) - Complex(0.5, 0.0)) < 1e-14);
    }
}

TEST_CASE("hermitian flag is verified at construction") {
    FockSpace space(2);
    Matrix bad = Matrix::Zero(3, 3);
    bad(0, 1) = Complex(1.0, 0.0); // not hermitian
    REQUIRE_THROWS_AS(Operator(space.shape(), bad, true), StateError);
    REQUIRE_NOTHROW(Operator(space.shape(), bad, false));
}

TEST_CASE("density matrix invariants are enforced") {
    FockSpace space(2);
    SECTION("valid pure state passes") {
        Vector v(3);
        v << 1.0, Complex(0.0, 1.0), 0.5;
        DensityMatrix rho = DensityMatrix::pure(space.shape(), v);
        auto h = rho.hygiene();
        REQUIRE(h.trace_error < 1e-12);
        REQUIRE(h.min_eigenvalue > -1e-14);
    }
    SECTION("trace must be one") {
        Matrix m = 0.5 * Matrix::Identity(3, 3);
        REQUIRE_THROWS_AS(DensityMatrix(space.shape(), m), StateError);
    }
    SECTION("negative eigenvalues rejected") {
        Matrix m = Matrix::Zero(3, 3);
        m(0, 0) = 1.5;
        m(1, 1) = -0.5;
        REQUIRE_THROWS_AS(DensityMatrix(space.shape(), m), StateError);
    }
    SECTION("non-hermitian rejected") {
        Matrix m = Matrix::Identity(3, 3) / 3.0;
        m(0, 2) = Complex(0.2, 0.0);
        REQUIRE_THROWS_AS(DensityMatrix(space.shape(), m), StateError);
    }
}

TEST_CASE("operator shape mismatches are reported") {
    auto a2 = fock_ladder(FockSpace(2)).a;
    auto a3 = fock_ladder(FockSpace(3)).a;
    REQUIRE_THROWS_AS(a2 + a3, ConfigError);
}
