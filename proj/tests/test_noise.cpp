#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "qpol/channels.hpp"
#include "qpol/errors.hpp"
#include "qpol/noise.hpp"
#include "qpol/rng.hpp"
#include "qpol/tomography.hpp"

#include <cmath>
#include <stdexcept>

using namespace qpol;
using qt::deg;

TEST_CASE("validate_noise_config rejects out-of-range settings") {
    NoiseConfig ok;
    CHECK_NOTHROW(validate_noise_config(ok));

    NoiseConfig bad = ok;
    bad.q1 = -0.1;
    CHECK_THROWS_AS(validate_noise_config(bad), ConfigError);
    bad = ok;
    bad.q2 = 1.1;
    CHECK_THROWS_AS(validate_noise_config(bad), ConfigError);
    bad = ok;
    bad.sigma = -1e-3;
    CHECK_THROWS_AS(validate_noise_config(bad), ConfigError);
    bad = ok;
    bad.n_mean = 0.0;
    CHECK_THROWS_AS(validate_noise_config(bad), ConfigError);
    bad = ok;
    bad.k_random = 0;
    CHECK_THROWS_AS(validate_noise_config(bad), ConfigError);
}

TEST_CASE("defaults match the standard operating point") {
    NoiseConfig cfg;
    CHECK(cfg.q1 == 1.0);
    CHECK(cfg.q2 == 1.0);
    CHECK(cfg.sigma == doctest::Approx(qt::kPi / 720.0).epsilon(1e-15));
    CHECK(cfg.n_mean == 5000.0);
    CHECK(cfg.k_random == 20);
    CHECK(cfg.rotation_draw == RotationDraw::PerProjector);
    CHECK(cfg.count_stat == CountStat::Poisson);
    CHECK(cfg.round_counts);
}

TEST_CASE("apply_prep_noise: q1=1 is the identity, q1=0 is still physical") {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    Rng rng(10);
    const DensityMatrix same = apply_prep_noise(bell, 1.0, 20, rng);
    CHECK(max_abs_diff(same.matrix(), bell.matrix()) < 1e-14);

    Rng rng2(11);
    const DensityMatrix junk = apply_prep_noise(bell, 0.0, 20, rng2);
    CHECK(check_physical(junk.matrix(), 1e-10).pass);
    CHECK(junk.dim() == 4);
}

TEST_CASE("apply_prep_noise: convex mixing is linear in q1 for a fixed stream") {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    Rng a(42), b(42);
    const DensityMatrix background = apply_prep_noise(bell, 0.0, 20, a);
    const DensityMatrix mixed = apply_prep_noise(bell, 0.5, 20, b);
    ComplexMatrix expect = bell.matrix() * cd(0.5, 0) + background.matrix() * cd(0.5, 0);
    CHECK(max_abs_diff(mixed.matrix(), expect) < 1e-12);
}

TEST_CASE("apply_dark_counts: exact white-noise arithmetic") {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    const DensityMatrix noisy = apply_dark_counts(bell, 0.8);
    // diagonal HV/VH entries: 0.8*0.5 + 0.2*0.25 = 0.45; off-diagonal scaled by 0.8
    CHECK(std::abs(noisy.matrix()(1, 1) - cd(0.45, 0)) < 1e-14);
    CHECK(std::abs(noisy.matrix()(2, 2) - cd(0.45, 0)) < 1e-14);
    CHECK(std::abs(noisy.matrix()(1, 2) - cd(0.40, 0)) < 1e-14);
    CHECK(std::abs(noisy.matrix()(0, 0) - cd(0.05, 0)) < 1e-14);
    const DensityMatrix same = apply_dark_counts(bell, 1.0);
    CHECK(max_abs_diff(same.matrix(), bell.matrix()) < 1e-15);
}

TEST_CASE("random_basis_rotation: sigma=0 gives the identity, draws are unitary") {
    Rng rng(7);
    const ComplexMatrix eye = random_basis_rotation(0.0, rng);
    CHECK(max_abs_diff(eye, ComplexMatrix::identity(2)) < 1e-14);

    for (int i = 0; i < 25; ++i) {
        const ComplexMatrix u = random_basis_rotation(0.05, rng);
        CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(2)) < 1e-12);
    }
}

TEST_CASE("random_basis_rotation: mean deviation grows with sigma") {
    const int draws = 1000;
    double prev = 0.0;
    bool first = true;
    for (double sigma : {qt::kPi / 720.0, qt::kPi / 72.0, qt::kPi / 7.2}) {
        Rng rng(2026);
        double acc = 0.0;
        for (int i = 0; i < draws; ++i) {
            const ComplexMatrix u = random_basis_rotation(sigma, rng);
            acc += max_abs_diff(u, ComplexMatrix::identity(2));
        }
        acc /= draws;
        if (!first) CHECK(acc > prev);
        prev = acc;
        first = false;
    }
}

TEST_CASE("rotate_projector: identity rotation is a no-op, structure is preserved") {
    const Projector hv = make_projector("HV");
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    const Projector same = rotate_projector(hv, eye, Configuration::Nonlocal);
    CHECK(max_abs_diff(same.matrix, hv.matrix) < 1e-14);

    Rng rng(5);
    const ComplexMatrix u = random_basis_rotation(0.1, rng);
    const Projector rot = rotate_projector(hv, u, Configuration::Nonlocal);
    CHECK(max_abs_diff(rot.matrix * rot.matrix, rot.matrix) < 1e-12);
    CHECK(std::abs(rot.matrix.trace() - cd(1, 0)) < 1e-12);
    // only the sample slot rotates: kron(|H><H|, U |V><V| U+)
    const ComplexMatrix expect =
        kron(outer(pol_ket(Pol::H), pol_ket(Pol::H)),
             u * outer(pol_ket(Pol::V), pol_ket(Pol::V)) * u.adjoint());
    CHECK(max_abs_diff(rot.matrix, expect) < 1e-13);

    const Projector h = make_projector("H");
    const Projector hrot = rotate_projector(h, u, Configuration::Local);
    const ComplexMatrix expect1 =
        u * outer(pol_ket(Pol::H), pol_ket(Pol::H)) * u.adjoint();
    CHECK(max_abs_diff(hrot.matrix, expect1) < 1e-13);
}

TEST_CASE("noisy_counts: the zero-noise limit reproduces exact expected counts") {
    const Scenario sc = qt::scenario(Element::LP, Configuration::Nonlocal, deg(37.0));
    const PovmSet povm = povm_set(PovmMode::TwoFull36);
    NoiseConfig cfg;
    cfg.sigma = 0.0;
    cfg.count_stat = CountStat::Mean;
    cfg.round_counts = false;
    Rng rng(3);
    const CountRecord rec = noisy_counts(sc, povm, cfg, rng);

    const DensityMatrix ideal = scenario_output(sc);
    const std::vector<double> p = born_probabilities(ideal, povm);
    REQUIRE(rec.counts.size() == p.size());
    for (size_t i = 0; i < p.size(); ++i)
        CHECK(rec.counts[i].second == doctest::Approx(cfg.n_mean * p[i]).epsilon(1e-12));
    CHECK(rec.total_per_basis == cfg.n_mean);
    CHECK(rec.source == CountSource::Simulated);
}

TEST_CASE("noisy_counts: fixed seed gives bit-identical records") {
    const Scenario sc = qt::scenario(Element::QWP, Configuration::Nonlocal, deg(30.0));
    const PovmSet povm = povm_set(PovmMode::TwoMinimal16);
    NoiseConfig cfg;
    cfg.q1 = 0.9;
    cfg.q2 = 0.85;
    Rng a(101), b(101);
    const CountRecord ra = noisy_counts(sc, povm, cfg, a);
    const CountRecord rb = noisy_counts(sc, povm, cfg, b);
    REQUIRE(ra.counts.size() == rb.counts.size());
    for (size_t i = 0; i < ra.counts.size(); ++i) {
        CHECK(ra.counts[i].first == rb.counts[i].first);
        CHECK(ra.counts[i].second == rb.counts[i].second);
    }
}

TEST_CASE("noisy_counts: rounding toggle") {
    const Scenario sc = qt::scenario(Element::LP, Configuration::Local, deg(20.0));
    const PovmSet povm = povm_set(PovmMode::Single6);
    NoiseConfig cfg;
    cfg.count_stat = CountStat::Mean;

    cfg.round_counts = true;
    Rng a(9);
    const CountRecord rounded = noisy_counts(sc, povm, cfg, a);
    for (const auto& [label, n] : rounded.counts) CHECK(n == std::floor(n));

    cfg.round_counts = false;
    Rng b(9);
    const CountRecord raw = noisy_counts(sc, povm, cfg, b);
    bool any_fractional = false;
    for (const auto& [label, n] : raw.counts)
        if (n != std::floor(n)) any_fractional = true;
    CHECK(any_fractional);
}

TEST_CASE("noisy_counts: poisson totals fluctuate around the mean") {
    const Scenario sc = qt::scenario(Element::LP, Configuration::Local, deg(37.0));
    const PovmSet povm = povm_set(PovmMode::Single6);
    NoiseConfig cfg;
    cfg.sigma = 0.0;
    Rng rng(2025);
    const int runs = 400;
    double acc = 0.0;
    bool any_off_mean = false;
    for (int i = 0; i < runs; ++i) {
        const CountRecord rec = noisy_counts(sc, povm, cfg, rng);
        double total = 0.0;
        for (const auto& [label, n] : rec.counts) total += n;
        const double per_basis = total / 3.0;  // three complete bases in single6
        acc += per_basis;
        if (std::abs(per_basis - cfg.n_mean) > 0.5) any_off_mean = true;
    }
    acc /= runs;
    CHECK(any_off_mean);
    CHECK(std::abs(acc - cfg.n_mean) < 5.0 * std::sqrt(cfg.n_mean / runs));
}

TEST_CASE("noisy_counts: povm dimension must match the scenario") {
    const Scenario sc = qt::scenario(Element::LP, Configuration::Nonlocal, deg(30.0));
    const PovmSet povm = povm_set(PovmMode::Single6);
    NoiseConfig cfg;
    Rng rng(1);
    CHECK_THROWS_AS(noisy_counts(sc, povm, cfg, rng), std::invalid_argument);
}
