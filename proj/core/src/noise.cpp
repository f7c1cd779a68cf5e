#include "qpol/noise.hpp"

#include "qpol/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace qpol {

void validate_noise_config(const NoiseConfig& cfg) {
    if (cfg.q1 < 0.0 || cfg.q1 > 1.0) throw ConfigError("noise q1 must be in [0,1]");
    if (cfg.q2 < 0.0 || cfg.q2 > 1.0) throw ConfigError("noise q2 must be in [0,1]");
    if (cfg.sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
    if (cfg.n_mean < 1.0) throw ConfigError("noise n_mean must be >= 1");
    if (cfg.k_random < 1) throw ConfigError("noise k_random must be >= 1");
}

DensityMatrix apply_prep_noise(const DensityMatrix& rho, double q1, int k_random, Rng& rng) {
    if (q1 < 0.0 || q1 > 1.0) throw std::invalid_argument("apply_prep_noise: q1 must be in [0,1]");
    if (k_random < 1) throw std::invalid_argument("apply_prep_noise: k_random must be >= 1");
    const int d = rho.dim();
    ComplexMatrix avg(d, d);
    for (int k = 0; k < k_random; ++k) avg = avg + random_density(d, rng).matrix();
    avg = avg * cd{1.0 / k_random, 0.0};
    return DensityMatrix(rho.matrix() * cd{q1, 0.0} + avg * cd{1.0 - q1, 0.0});
}

DensityMatrix apply_dark_counts(const DensityMatrix& rho, double q2) {
    if (q2 < 0.0 || q2 > 1.0) throw std::invalid_argument("apply_dark_counts: q2 must be in [0,1]");
    const int d = rho.dim();
    return DensityMatrix(rho.matrix() * cd{q2, 0.0} +
                         ComplexMatrix::identity(d) * cd{(1.0 - q2) / d, 0.0});
}

ComplexMatrix random_basis_rotation(double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("random_basis_rotation: sigma must be >= 0");
    const double w1 = sigma * rng.normal();
    const double w2 = sigma * rng.normal();
    const double w3 = sigma * rng.normal();
    const cd im{0.0, 1.0};
    const double c = std::cos(w3);
    const double s = std::sin(w3);
    return ComplexMatrix(2, 2,
                         {std::exp(im * (w1 / 2.0)) * c, -im * std::exp(im * (w2 / 2.0)) * s,
                          -im * std::exp(-im * (w2 / 2.0)) * s, std::exp(-im * (w1 / 2.0)) * c});
}

Projector rotate_projector(const Projector& p, const ComplexMatrix& u, Configuration configuration) {
    if (u.rows() != 2 || u.cols() != 2)
        throw std::invalid_argument("rotate_projector: rotation must be 2x2");
    const int want = configuration == Configuration::Local ? 2 : 4;
    if (static_cast<int>(p.ket.size()) != want)
        throw std::invalid_argument("rotate_projector: projector dimension does not match configuration");
    const ComplexMatrix big =
        configuration == Configuration::Local ? u : kron(ComplexMatrix::identity(2), u);
    std::vector<cd> ket = big.apply(p.ket);
    ComplexMatrix m = outer(ket, ket);
    return Projector{p.label, std::move(ket), std::move(m)};
}

CountRecord noisy_counts(const Scenario& sc, const PovmSet& povm, const NoiseConfig& cfg, Rng& rng) {
    validate_noise_config(cfg);
    const int out_dim = sc.channel.configuration == Configuration::Local ? 2 : 4;
    if (povm.dim() != out_dim)
        throw std::invalid_argument("noisy_counts: POVM dimension does not match configuration");

    const DensityMatrix rho_in = apply_prep_noise(make_state(sc.probe), cfg.q1, cfg.k_random, rng);
    const DensityMatrix rho_out = apply_channel(sc.channel, rho_in);
    const DensityMatrix rho_meas = apply_dark_counts(rho_out, cfg.q2);

    ComplexMatrix shared_u = ComplexMatrix::identity(2);
    if (cfg.rotation_draw == RotationDraw::PerRecord)
        shared_u = random_basis_rotation(cfg.sigma, rng);

    CountRecord rec;
    rec.total_per_basis = cfg.n_mean;
    rec.source = CountSource::Simulated;
    rec.seed = cfg.seed;
    for (const Projector& p : povm.projectors) {
        const ComplexMatrix u = cfg.rotation_draw == RotationDraw::PerProjector
                                    ? random_basis_rotation(cfg.sigma, rng)
                                    : shared_u;
        const Projector rotated = rotate_projector(p, u, sc.channel.configuration);
        const std::vector<cd> v = rho_meas.matrix().apply(rotated.ket);
        const double prob = std::max(0.0, inner(rotated.ket, v).real());
        const double total = cfg.count_stat == CountStat::Poisson
                                 ? static_cast<double>(rng.poisson(cfg.n_mean))
                                 : cfg.n_mean;
        double n = total * prob;
        if (cfg.round_counts) n = static_cast<double>(std::llround(n));
        rec.counts.emplace_back(p.label, n);
    }
    return rec;
}

}  // namespace qpol
