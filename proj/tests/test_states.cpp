#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "qpol/rng.hpp"
#include "qpol/states.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace qpol;

TEST_CASE("make_state: Bell matrix has 1/2 on the HV/VH block") {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    REQUIRE(bell.dim() == 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const bool in_block = (r == 1 || r == 2) && (c == 1 || c == 2);
            CHECK(std::abs(bell(r, c) - (in_block ? cd(0.5, 0.0) : cd(0.0, 0.0))) < 1e-15);
        }
}

TEST_CASE("make_state: maximally mixed and superposition") {
    const DensityMatrix m2 = make_state(StateKind::maximally_mixed(2));
    CHECK(max_abs_diff(m2.matrix(), ComplexMatrix::identity(2) * cd(0.5, 0.0)) < 1e-15);
    const DensityMatrix m4 = make_state(StateKind::maximally_mixed(4));
    CHECK(max_abs_diff(m4.matrix(), ComplexMatrix::identity(4) * cd(0.25, 0.0)) < 1e-15);

    const DensityMatrix plus = make_state(StateKind::superposition_hv());
    const ComplexMatrix expect(2, 2, {cd(0.5, 0), cd(0.5, 0), cd(0.5, 0), cd(0.5, 0)});
    CHECK(max_abs_diff(plus.matrix(), expect) < 1e-15);
}

TEST_CASE("make_state: custom passes the payload through") {
    Rng rng(5);
    const DensityMatrix rho = random_density(4, rng);
    const DensityMatrix out = make_state(StateKind::custom(rho));
    CHECK(max_abs_diff(out.matrix(), rho.matrix()) == 0.0);
}

TEST_CASE("maximally_mixed rejects degenerate dimensions") {
    CHECK_THROWS_AS(StateKind::maximally_mixed(1), std::invalid_argument);
    CHECK_THROWS_AS(StateKind::maximally_mixed(0), std::invalid_argument);
}

TEST_CASE("partial_trace: Bell marginals are maximally mixed") {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    const ComplexMatrix half = ComplexMatrix::identity(2) * cd(0.5, 0.0);
    CHECK(max_abs_diff(partial_trace(bell, Arm::Reference).matrix(), half) < 1e-12);
    CHECK(max_abs_diff(partial_trace(bell, Arm::Sample).matrix(), half) < 1e-12);
}

TEST_CASE("partial_trace: product states factor") {
    const DensityMatrix hh = DensityMatrix::from_pure(PureState({1.0, 0.0, 0.0, 0.0}));
    const ComplexMatrix h_proj(2, 2, {cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 0)});
    CHECK(max_abs_diff(partial_trace(hh, Arm::Sample).matrix(), h_proj) < 1e-12);
    CHECK(max_abs_diff(partial_trace(hh, Arm::Reference).matrix(), h_proj) < 1e-12);

    Rng rng(17);
    const DensityMatrix a = random_density(2, rng);
    const DensityMatrix b = random_density(2, rng);
    const DensityMatrix ab(kron(a.matrix(), b.matrix()));
    CHECK(max_abs_diff(partial_trace(ab, Arm::Reference).matrix(), a.matrix()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(ab, Arm::Sample).matrix(), b.matrix()) < 1e-12);
}

TEST_CASE("pauli dictionary matches the polarization-basis differences") {
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<cd> d = {s, s};
    const std::vector<cd> a = {s, -s};
    const std::vector<cd> r = {s, cd(0, -1) * s};
    const std::vector<cd> l = {s, cd(0, 1) * s};
    const std::vector<cd> h = {1.0, 0.0};
    const std::vector<cd> v = {0.0, 1.0};

    CHECK(max_abs_diff(pauli(0), ComplexMatrix::identity(2)) < 1e-15);
    CHECK(max_abs_diff(pauli(1), outer(d, d) - outer(a, a)) < 1e-15);
    CHECK(max_abs_diff(pauli(2), outer(r, r) - outer(l, l)) < 1e-15);
    CHECK(max_abs_diff(pauli(3), outer(h, h) - outer(v, v)) < 1e-15);
}

TEST_CASE("stokes_operator: examples and convention factor") {
    CHECK(max_abs_diff(stokes_operator(StokesIndex{{0}}, StokesConvention::Pauli),
                       ComplexMatrix::identity(2)) < 1e-15);

    const ComplexMatrix half3 = stokes_operator(StokesIndex{{3}}, StokesConvention::Half);
    const ComplexMatrix expect_half3(2, 2, {cd(0.5, 0), cd(0, 0), cd(0, 0), cd(-0.5, 0)});
    CHECK(max_abs_diff(half3, expect_half3) < 1e-15);

    const ComplexMatrix zz = stokes_operator(StokesIndex{{3, 3}}, StokesConvention::Pauli);
    ComplexMatrix expect_zz = ComplexMatrix::zero(4, 4);
    expect_zz(0, 0) = 1;
    expect_zz(1, 1) = -1;
    expect_zz(2, 2) = -1;
    expect_zz(3, 3) = 1;
    CHECK(max_abs_diff(zz, expect_zz) < 1e-15);

    // Half convention carries 1/2 per photon.
    const ComplexMatrix half_zz = stokes_operator(StokesIndex{{3, 3}}, StokesConvention::Half);
    CHECK(max_abs_diff(half_zz * cd(4.0, 0.0), expect_zz) < 1e-15);
}

TEST_CASE("stokes_operator rejects bad indices") {
    CHECK_THROWS_AS(stokes_operator(StokesIndex{{4}}, StokesConvention::Pauli),
                    std::invalid_argument);
    CHECK_THROWS_AS(stokes_operator(StokesIndex{{-1, 0}}, StokesConvention::Pauli),
                    std::invalid_argument);
    CHECK_THROWS_AS(stokes_operator(StokesIndex{{}}, StokesConvention::Pauli),
                    std::invalid_argument);
}

TEST_CASE("stokes operators are trace-orthogonal: Tr(Sa Sb) = 2^N delta_ab") {
    for (int a = 0; a < 16; ++a) {
        const StokesIndex ia{{a / 4, a % 4}};
        const ComplexMatrix sa = stokes_operator(ia, StokesConvention::Pauli);
        for (int b = 0; b < 16; ++b) {
            const StokesIndex ib{{b / 4, b % 4}};
            const ComplexMatrix sb = stokes_operator(ib, StokesConvention::Pauli);
            const cd tr = (sa * sb).trace();
            const double expect = a == b ? 4.0 : 0.0;
            CHECK(std::abs(tr - expect) < 1e-13);
        }
    }
}

TEST_CASE("stokes_expand: identity and Bell tables") {
    const std::vector<double> id4 = stokes_expand(make_state(StateKind::maximally_mixed(4)));
    REQUIRE(id4.size() == 16);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(id4[i] - (i == 0 ? 1.0 : 0.0)) < 1e-13);

    // independent oracle: direct trace against explicitly built operators
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    const std::vector<double> table = stokes_expand(bell);
    REQUIRE(table.size() == 16);
    for (int i1 = 0; i1 < 4; ++i1)
        for (int i2 = 0; i2 < 4; ++i2) {
            const ComplexMatrix op = kron(pauli(i1), pauli(i2));
            const double direct = (op * bell.matrix()).trace().real();
            CHECK(std::abs(table[i1 * 4 + i2] - direct) < 1e-13);
        }
    CHECK(table[0 * 4 + 0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(table[1 * 4 + 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(table[2 * 4 + 2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(table[3 * 4 + 3] == doctest::Approx(-1.0).epsilon(1e-12));
    for (int i1 = 0; i1 < 4; ++i1)
        for (int i2 = 0; i2 < 4; ++i2)
            if (i1 != i2) CHECK(std::abs(table[i1 * 4 + i2]) < 1e-13);
}

TEST_CASE("stokes round trip on random states") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int qubits = trial % 2 == 0 ? 1 : 2;
        const DensityMatrix rho = random_density(qubits == 1 ? 2 : 4, rng);
        const ComplexMatrix back = stokes_reconstruct(stokes_expand(rho), qubits);
        CHECK(max_abs_diff(back, rho.matrix()) < 1e-12);
    }
}

TEST_CASE("stokes_reconstruct validates table length") {
    CHECK_THROWS_AS(stokes_reconstruct(std::vector<double>(15, 0.0), 2), std::invalid_argument);
    CHECK_THROWS_AS(stokes_reconstruct(std::vector<double>(4, 0.0), 2), std::invalid_argument);
}
