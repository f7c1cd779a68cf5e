#include "qpol/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace qpol {

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double rad) { return rad * 180.0 / kPi; }

StateKind ideal_probe(Configuration configuration) {
    return configuration == Configuration::Nonlocal ? StateKind::bell_psi_plus()
                                                    : StateKind::maximally_mixed(2);
}

DensityMatrix ideal_output(const Scenario& sc, double alpha) {
    Scenario ideal{Channel{sc.channel.element, alpha, sc.channel.configuration},
                   ideal_probe(sc.channel.configuration)};
    return closed_form_output(ideal);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string estimator_name(EstimatorKind kind) {
    return kind == EstimatorKind::Alpha1 ? "alpha1" : "alpha2";
}

PovmMode default_povm_mode(Configuration configuration) {
    return configuration == Configuration::Local ? PovmMode::Single6 : PovmMode::TwoFull36;
}

AlphaEstimate alpha_hat_1(const DensityMatrix& rho, const Scenario& sc) {
    const bool nonlocal = sc.channel.configuration == Configuration::Nonlocal;
    const bool lp = sc.channel.element == Element::LP;
    if (!nonlocal && !lp)
        throw std::invalid_argument(
            "alpha_hat_1: local QWP output carries no angle information");
    if (lp) {
        if (rho.dim() != (nonlocal ? 4 : 2))
            throw std::invalid_argument("alpha_hat_1: state dimension does not match scenario");
        const double r11 = std::max(0.0, rho(0, 0).real());
        const double r22 = rho(1, 1).real();
        if (r22 < 1e-12)
            return AlphaEstimate{kPi / 2.0, true, "vanishing reference element, returning limit"};
        return AlphaEstimate{std::atan(std::sqrt(r11 / r22)), false, ""};
    }
    if (rho.dim() != 4)
        throw std::invalid_argument("alpha_hat_1: state dimension does not match scenario");
    const double raw = 2.0 * (rho(2, 2).real() - rho(3, 3).real());
    const double arg = std::clamp(raw, 0.0, 1.0);
    return AlphaEstimate{0.5 * std::acos(std::sqrt(arg)), false, ""};
}

AlphaEstimate alpha_hat_2(const DensityMatrix& rho_exp, const Scenario& sc) {
    const int want = sc.channel.configuration == Configuration::Nonlocal ? 4 : 2;
    if (rho_exp.dim() != want)
        throw std::invalid_argument("alpha_hat_2: state dimension does not match scenario");
    const ComplexMatrix sqrt_exp = sqrt_psd(rho_exp.matrix());
    auto score = [&](double alpha) {
        return fidelity_given_sqrt(sqrt_exp, ideal_output(sc, alpha).matrix());
    };

    constexpr int kGridPoints = 1801;  // 0.05 degree spacing over [0, 90]
    const double step = (kPi / 2.0) / (kGridPoints - 1);
    double best = -1.0, worst = 2.0;
    int best_i = 0;
    std::vector<double> grid(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) {
        grid[static_cast<size_t>(i)] = score(i * step);
        if (grid[static_cast<size_t>(i)] > best) {
            best = grid[static_cast<size_t>(i)];
            best_i = i;
        }
        worst = std::min(worst, grid[static_cast<size_t>(i)]);
    }
    if (best - worst <= 1e-12)
        return AlphaEstimate{0.0, true, "fidelity landscape is flat, no angle information"};

    double lo = std::max(0.0, (best_i - 1) * step);
    double hi = std::min(kPi / 2.0, (best_i + 1) * step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = score(x1), f2 = score(x2);
    while (hi - lo > 1e-5) {
        if (f1 > f2 || (f1 == f2 && x1 < x2)) {  // prefer the smaller angle on ties
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = score(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = score(x2);
        }
    }
    double alpha = 0.5 * (lo + hi);
    // never return a point below the best coarse-grid value
    if (score(alpha) < best) alpha = best_i * step;
    return AlphaEstimate{alpha, false, ""};
}

EstimationReport bias_variance(const std::vector<double>& estimates, double true_alpha,
                               std::optional<double> qcrb_reference) {
    if (estimates.size() < 2)
        throw std::invalid_argument("bias_variance: need at least 2 estimates");
    EstimationReport rep;
    rep.estimates = estimates;
    rep.true_alpha = true_alpha;
    double sum = 0.0;
    for (double e : estimates) sum += e;
    rep.mean = sum / static_cast<double>(estimates.size());
    rep.bias = rep.mean - true_alpha;
    double ss = 0.0;
    for (double e : estimates) ss += (e - rep.mean) * (e - rep.mean);
    rep.variance = ss / static_cast<double>(estimates.size() - 1);
    rep.mean_deg = deg(rep.mean);
    rep.bias_deg = deg(rep.bias);
    rep.variance_deg2 = deg(deg(rep.variance));  // rad^2 -> deg^2 scales twice
    rep.qcrb_reference =
        qcrb_reference ? *qcrb_reference : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

TrialResult run_noisy_trial(const Scenario& sc, const PovmSet& povm, const NoiseConfig& cfg,
                            std::uint64_t trial_seed, const MleOptions& mle_options) {
    Rng noise_rng(trial_seed);
    NoiseConfig stamped = cfg;
    stamped.seed = trial_seed;
    CountRecord counts = noisy_counts(sc, povm, stamped, noise_rng);
    // separate restart stream so MLE cannot perturb the noise draws
    Rng mle_rng(derive_seed(trial_seed, 0x4d4c45));
    MleResult mle = mle_reconstruct(counts, povm, cfg.n_mean, mle_options, mle_rng);
    return TrialResult{std::move(counts), std::move(mle)};
}

double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman: need two sequences of equal length >= 2");
    auto ranks = [](const std::vector<double>& v) {
        const size_t n = v.size();
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

SweepResult bias_sweep(const Scenario& sc, EstimatorKind kind, const std::vector<double>& q_grid,
                       const NoiseConfig& base, int trials, std::uint64_t master_seed, int jobs,
                       std::optional<PovmMode> povm_mode, const MleOptions& mle_options) {
    if (trials < 1) throw std::invalid_argument("bias_sweep: trials must be >= 1");
    for (double q : q_grid)
        if (q < 0.0 || q > 1.0) throw std::invalid_argument("bias_sweep: q values must be in [0,1]");
    const PovmMode mode = povm_mode.value_or(default_povm_mode(sc.channel.configuration));
    const PovmSet povm = povm_set(mode);
    const double true_alpha = sc.channel.alpha;

    const size_t nq = q_grid.size();
    std::vector<std::vector<double>> estimates(nq, std::vector<double>(static_cast<size_t>(trials), 0.0));

    // (q, trial) pairs are independent; estimates land in preassigned slots so
    // the result is identical for any job count
    const long total_jobs = static_cast<long>(nq) * trials;
    auto worker = [&](long begin, long stride) {
        for (long w = begin; w < total_jobs; w += stride) {
            const size_t qi = static_cast<size_t>(w) / static_cast<size_t>(trials);
            const int ti = static_cast<int>(w % trials);
            NoiseConfig cfg = base;
            cfg.q1 = 1.0 - q_grid[qi];
            cfg.q2 = 1.0 - q_grid[qi];
            const std::uint64_t trial_seed = derive_seed(master_seed, static_cast<std::uint64_t>(w));
            const TrialResult trial = run_noisy_trial(sc, povm, cfg, trial_seed, mle_options);
            const AlphaEstimate est = kind == EstimatorKind::Alpha1
                                          ? alpha_hat_1(trial.mle.rho, sc)
                                          : alpha_hat_2(trial.mle.rho, sc);
            estimates[qi][static_cast<size_t>(ti)] = est.alpha;
        }
    };
    const int nthreads = std::max(1, jobs);
    if (nthreads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
        for (std::thread& t : pool) t.join();
    }

    SweepResult result;
    std::vector<double> qs, biases;
    for (size_t qi = 0; qi < nq; ++qi) {
        const std::vector<double>& es = estimates[qi];
        double mean = 0.0;
        for (double e : es) mean += e;
        mean /= static_cast<double>(es.size());
        double var = 0.0;
        for (double e : es) var += (e - mean) * (e - mean);
        var = es.size() > 1 ? var / static_cast<double>(es.size() - 1) : 0.0;
        std::vector<double> abs_err;
        abs_err.reserve(es.size());
        for (double e : es) abs_err.push_back(std::abs(deg(e) - deg(true_alpha)));
        SweepRow row;
        row.q = q_grid[qi];
        row.trial_count = trials;
        row.mean_abs_bias_deg = std::abs(deg(mean) - deg(true_alpha));
        row.median_abs_bias_deg = median_of(abs_err);
        row.var_deg2 = deg(deg(var));
        row.estimator = estimator_name(kind);
        row.scenario = scenario_name(sc);
        row.estimates = es;
        result.rows.push_back(std::move(row));
        qs.push_back(q_grid[qi]);
        biases.push_back(result.rows.back().mean_abs_bias_deg);
    }
    result.spearman = qs.size() >= 2 ? spearman_rank_correlation(qs, biases) : 0.0;
    return result;
}

}  // namespace qpol
