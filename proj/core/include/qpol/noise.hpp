#pragma once

#include "qpol/channels.hpp"
#include "qpol/rng.hpp"
#include "qpol/tomography.hpp"

#include <cstdint>

namespace qpol {

// How often a fresh misalignment rotation is drawn.
enum class RotationDraw { PerProjector, PerRecord };

// Whether each projector's total is Poisson-distributed or fixed at the mean.
enum class CountStat { Poisson, Mean };

struct NoiseConfig {
    double q1 = 1.0;             // preparation fidelity weight, 1 = clean
    double q2 = 1.0;             // dark-count weight, 1 = clean
    double sigma = 3.141592653589793 / 720.0;  // rotation angle spread, radians
    double n_mean = 5000.0;      // mean counts per projector
    int k_random = 20;           // matrices averaged into the preparation noise term
    std::uint64_t seed = 0;
    RotationDraw rotation_draw = RotationDraw::PerProjector;
    CountStat count_stat = CountStat::Poisson;
    bool round_counts = true;
};

void validate_noise_config(const NoiseConfig& cfg);

// rho_in = q1 rho + (1-q1) rho_r, rho_r = average of k_random Ginibre states
// drawn once per call (preparation noise is a property of the source, fixed
// over one tomography campaign).
DensityMatrix apply_prep_noise(const DensityMatrix& rho, double q1, int k_random, Rng& rng);

// rho' = q2 rho + (1-q2) I/d.
DensityMatrix apply_dark_counts(const DensityMatrix& rho, double q2);

// U(w1,w2,w3) with w_i ~ Normal(0, sigma):
//   [ e^{i w1/2} cos w3        -i e^{i w2/2} sin w3 ]
//   [ -i e^{-i w2/2} sin w3     e^{-i w1/2} cos w3  ]
ComplexMatrix random_basis_rotation(double sigma, Rng& rng);

// Local: U Pi U^dag. Nonlocal: (I (x) U) Pi (...)^dag, i.e. the rotation sits
// in the sample slot of the fixed (reference, sample) ordering.
Projector rotate_projector(const Projector& p, const ComplexMatrix& u, Configuration configuration);

// Full pipeline: prep noise -> channel -> dark counts -> rotated projectors
// -> n_i = N_i * Tr(Pi' rho') with N_i ~ Pois(n_mean) (or fixed at the mean),
// optionally rounded to integers.
CountRecord noisy_counts(const Scenario& sc, const PovmSet& povm, const NoiseConfig& cfg, Rng& rng);

}  // namespace qpol
