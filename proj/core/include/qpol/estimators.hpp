#pragma once

#include "qpol/channels.hpp"
#include "qpol/noise.hpp"
#include "qpol/qfi.hpp"
#include "qpol/tomography.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qpol {

enum class EstimatorKind { Alpha1, Alpha2 };

std::string estimator_name(EstimatorKind kind);

struct AlphaEstimate {
    double alpha = 0.0;  // radians, in [0, pi/2]
    bool flagged = false;
    std::string note;  // set when flagged: degenerate input, limit value, ...
};

// Closed-form element-ratio estimator. Defined for nonlocal LP, local LP and
// nonlocal QWP; the local QWP output carries no angle information and is
// rejected. Above 45 degrees the QWP variant folds onto 90 - alpha.
AlphaEstimate alpha_hat_1(const DensityMatrix& rho, const Scenario& sc);

// Fidelity-maximization estimator: argmax over alpha in [0, pi/2] of the
// fidelity between rho_exp and the ideal channel output (Bell probe when
// nonlocal, maximally mixed when local). Coarse 0.05-degree grid, then
// golden-section refinement to 1e-5 rad; ties break toward smaller alpha.
// A flat landscape returns 0 flagged as carrying no information.
AlphaEstimate alpha_hat_2(const DensityMatrix& rho_exp, const Scenario& sc);

struct EstimationReport {
    std::vector<double> estimates;  // radians
    double true_alpha = 0.0;
    double mean = 0.0;
    double bias = 0.0;      // mean - true
    double variance = 0.0;  // unbiased sample variance, radians^2
    double mean_deg = 0.0;
    double bias_deg = 0.0;
    double variance_deg2 = 0.0;
    double qcrb_reference = 0.0;  // NaN when not supplied
};

EstimationReport bias_variance(const std::vector<double>& estimates, double true_alpha,
                               std::optional<double> qcrb_reference = std::nullopt);

// One noisy experiment: counts through the noise pipeline, then MLE. The MLE
// restart stream is derived from the trial seed with a fixed tag so its draws
// never interleave with the noise stream.
struct TrialResult {
    CountRecord counts;
    MleResult mle;
};

TrialResult run_noisy_trial(const Scenario& sc, const PovmSet& povm, const NoiseConfig& cfg,
                            std::uint64_t trial_seed, const MleOptions& mle_options = {});

struct SweepRow {
    double q = 0.0;  // user-facing knob: 0 = noiseless, enters as q1 = q2 = 1 - q
    int trial_count = 0;
    double mean_abs_bias_deg = 0.0;
    double median_abs_bias_deg = 0.0;
    double var_deg2 = 0.0;
    std::string estimator;
    std::string scenario;
    std::vector<double> estimates;  // radians, one per trial
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double spearman = 0.0;  // rank correlation of mean |bias| against q
};

SweepResult bias_sweep(const Scenario& sc, EstimatorKind kind, const std::vector<double>& q_grid,
                       const NoiseConfig& base, int trials, std::uint64_t master_seed,
                       int jobs = 1, std::optional<PovmMode> povm_mode = std::nullopt,
                       const MleOptions& mle_options = {});

// Spearman rank correlation with average ranks on ties.
double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y);

PovmMode default_povm_mode(Configuration configuration);

}  // namespace qpol
