// End-to-end gate: each criterion prints exactly one PASS/FAIL line and the
// process exit code reflects it. Run as:  qpol_acceptance --criterion N --cli PATH
#include "qpol/channels.hpp"
#include "qpol/count_io.hpp"
#include "qpol/estimators.hpp"
#include "qpol/noise.hpp"
#include "qpol/qfi.hpp"
#include "qpol/qmath.hpp"
#include "qpol/rng.hpp"
#include "qpol/states.hpp"
#include "qpol/tomography.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace qpol;

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg(double d) { return d * kPi / 180.0; }

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Scenario reference_scenario(Element e, Configuration conf, double alpha) {
    const StateKind probe = conf == Configuration::Nonlocal ? StateKind::bell_psi_plus()
                                                            : StateKind::maximally_mixed(2);
    return Scenario{make_channel(e, alpha, conf), probe};
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- criterion 1: information values for the four reference scenarios ------

Outcome criterion_information_table() {
    const double angles[] = {0.0, 15.0, 37.0, 60.0, 89.0};
    struct Row {
        Element e;
        Configuration conf;
        double expected;
    };
    const Row rows[] = {{Element::LP, Configuration::Local, 4.0},
                        {Element::LP, Configuration::Nonlocal, 8.0},
                        {Element::QWP, Configuration::Local, 0.0},
                        {Element::QWP, Configuration::Nonlocal, 8.0}};
    double worst_analytic = 0.0, worst_central = 0.0;
    for (double a : angles) {
        for (const Row& r : rows) {
            const Scenario sc = reference_scenario(r.e, r.conf, deg(a));
            const double analytic = scenario_qfi(sc, deg(a)).value;
            worst_analytic = std::max(worst_analytic, std::abs(analytic - r.expected));
            const ParamState ps = channel_derivative(sc, deg(a), DerivativeMethod::CentralDiff);
            const double central = qfi_mixed(ps).value;
            worst_central = std::max(worst_central, std::abs(central - r.expected));
        }
    }
    Outcome out;
    out.ok = worst_analytic <= 1e-9 && worst_central <= 1e-5;
    out.detail = "analytic dev " + fmt(worst_analytic) + ", central dev " + fmt(worst_central);
    return out;
}

// --- criterion 2: superposition-probe waveplate information curve ----------

Outcome criterion_superposition_curve() {
    double worst = 0.0;
    for (int i = 0; i <= 90; ++i) {
        const double a = deg(static_cast<double>(i));
        const Scenario sc{make_channel(Element::QWP, a, Configuration::Local),
                          StateKind::superposition_hv()};
        const double f = scenario_qfi(sc, a).value;
        const double c = std::cos(2.0 * a);
        worst = std::max(worst, std::abs(f - (8.0 - 4.0 * c * c)));
    }
    Outcome out;
    out.ok = worst <= 1e-8;
    out.detail = "max dev " + fmt(worst) + " over 91 angles";
    return out;
}

// --- criterion 3: factor-two advantage of the entangled probe --------------

Outcome criterion_factor_two() {
    double worst = 0.0;
    for (double a : {0.0, 15.0, 37.0, 60.0, 89.0}) {
        const double local =
            scenario_qfi(reference_scenario(Element::LP, Configuration::Local, deg(a)), deg(a))
                .value;
        const double nonlocal =
            scenario_qfi(reference_scenario(Element::LP, Configuration::Nonlocal, deg(a)), deg(a))
                .value;
        worst = std::max(worst, std::abs(nonlocal / local - 2.0));
    }
    Outcome out;
    out.ok = worst <= 1e-9;
    out.detail = "ratio dev " + fmt(worst);
    return out;
}

// --- criterion 4: closed forms match direct channel application ------------

Outcome criterion_closed_form_agreement() {
    double worst = 0.0;
    for (Element e : {Element::LP, Element::QWP}) {
        for (Configuration conf : {Configuration::Local, Configuration::Nonlocal}) {
            for (int i = 0; i <= 90; ++i) {
                const Scenario sc = reference_scenario(e, conf, deg(static_cast<double>(i)));
                const DensityMatrix closed = closed_form_output(sc);
                const DensityMatrix applied = apply_channel(sc.channel, make_state(sc.probe));
                worst = std::max(worst, max_abs_diff(closed.matrix(), applied.matrix()));
            }
        }
    }
    Outcome out;
    out.ok = worst <= 1e-12;
    out.detail = "max entry dev " + fmt(worst) + " over 4 x 91 settings";
    return out;
}

// --- criterion 5: exact-count tomography round trip -------------------------

Outcome criterion_tomography_round_trip() {
    double worst_linear = 0.0;
    double worst_fid = 1.0;
    for (int i = 0; i < 200; ++i) {
        const bool one_qubit = i < 100;
        Rng state_rng(derive_seed(0xACC5, static_cast<std::uint64_t>(i)));
        const DensityMatrix rho = random_density(one_qubit ? 2 : 4, state_rng);
        const PovmSet povm = povm_set(one_qubit ? PovmMode::Single6 : PovmMode::TwoFull36);
        const CountRecord rec = simulate_counts_exact(rho, povm, 10000.0);

        const ComplexMatrix lin = linear_inversion(rec, povm);
        worst_linear = std::max(worst_linear, max_abs_diff(lin, rho.matrix()));

        Rng mle_rng(derive_seed(0xACC5, static_cast<std::uint64_t>(1000 + i)));
        const MleResult res = mle_reconstruct(rec, povm, 10000.0, MleOptions{}, mle_rng);
        worst_fid = std::min(worst_fid, fidelity(res.rho, rho));
    }
    Outcome out;
    out.ok = worst_linear <= 1e-10 && worst_fid >= 1.0 - 1e-6;
    out.detail = "max inversion dev " + fmt(worst_linear) + ", min mle fidelity " +
                 fmt(worst_fid) + " over 100+100 states";
    return out;
}

// --- criterion 6: statistical reconstruction quality ------------------------

Outcome criterion_statistical_mle() {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    const PovmSet povm = povm_set(PovmMode::TwoFull36);
    std::vector<double> fids;
    for (int i = 0; i < 50; ++i) {
        Rng noise_rng(derive_seed(0x5EED6, static_cast<std::uint64_t>(i)));
        const CountRecord rec =
            simulate_counts(bell, povm, 5000.0, CountingMode::Poisson, noise_rng);
        Rng mle_rng(derive_seed(0x5EED6, static_cast<std::uint64_t>(10000 + i)));
        const MleResult res = mle_reconstruct(rec, povm, 5000.0, MleOptions{}, mle_rng);
        fids.push_back(fidelity(res.rho, bell));
    }
    const double med = median_of(fids);
    Outcome out;
    out.ok = med >= 0.99;
    out.detail = "median fidelity " + fmt(med) + " over 50 trials";
    return out;
}

// --- criterion 7: noiseless angle recovery ----------------------------------

Outcome criterion_noiseless_recovery() {
    const double alpha = deg(37.0);
    const Scenario scenarios[] = {
        reference_scenario(Element::LP, Configuration::Nonlocal, alpha),
        reference_scenario(Element::QWP, Configuration::Nonlocal, alpha),
        reference_scenario(Element::LP, Configuration::Local, alpha)};
    double worst = 0.0;
    for (const Scenario& sc : scenarios) {
        const DensityMatrix outp = closed_form_output(sc);
        const double e1 = alpha_hat_1(outp, sc).alpha * 180.0 / kPi;
        const double e2 = alpha_hat_2(outp, sc).alpha * 180.0 / kPi;
        worst = std::max({worst, std::abs(e1 - 37.0), std::abs(e2 - 37.0)});
    }
    Outcome out;
    out.ok = worst <= 0.05;
    out.detail = "max |estimate - 37 deg| = " + fmt(worst) + " deg";
    return out;
}

// --- criterion 8: bias trend under the calibrated noise model ---------------

Outcome criterion_bias_trend() {
    const unsigned hc = std::thread::hardware_concurrency();
    const int jobs = static_cast<int>(hc == 0 ? 1 : std::min(hc, 4u));
    NoiseConfig base;  // sigma = pi/720, n_mean = 5000, k_random = 20
    const std::vector<double> q_grid = {0.0, 0.1, 0.2, 0.3};
    const int trials = 100;
    const std::uint64_t master = 0xB1A5;

    const Scenario lp = reference_scenario(Element::LP, Configuration::Nonlocal, deg(37.0));
    const SweepResult trend =
        bias_sweep(lp, EstimatorKind::Alpha1, q_grid, base, trials, master, jobs);

    const Scenario qwp = reference_scenario(Element::QWP, Configuration::Nonlocal, deg(37.0));
    const SweepResult strong1 =
        bias_sweep(qwp, EstimatorKind::Alpha1, {0.3}, base, trials, master, jobs);
    const SweepResult strong2 =
        bias_sweep(qwp, EstimatorKind::Alpha2, {0.3}, base, trials, master, jobs);
    const double med1 = strong1.rows[0].median_abs_bias_deg;
    const double med2 = strong2.rows[0].median_abs_bias_deg;

    Outcome out;
    out.ok = trend.spearman >= 0.9 && med2 < med1;
    out.detail = "spearman " + fmt(trend.spearman) + "; strong-noise median |bias| " +
                 fmt(med2) + " deg (fidelity) vs " + fmt(med1) + " deg (element ratio)";
    return out;
}

// --- criterion 9: reconstruction physicality under adversarial counts -------

Outcome criterion_physicality() {
    MleOptions opts;
    opts.restarts = 0;
    opts.max_evals = 2000;
    opts.stall_iters = 30;

    int checked = 0;
    double worst_min_eig = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const bool one_qubit = i % 2 == 0;
        const PovmSet povm = povm_set(one_qubit ? PovmMode::Single6 : PovmMode::TwoMinimal16);
        const size_t m = povm.projectors.size();
        Rng rng(derive_seed(0xF1A7, static_cast<std::uint64_t>(i)));

        CountRecord rec;
        rec.source = CountSource::Ingested;
        std::vector<double> values(m, 0.0);
        switch (i % 8) {
            case 0:  // everything dark
                break;
            case 1:  // one enormous spike
                values[static_cast<size_t>(i / 8) % m] = 1e6;
                break;
            case 2:  // uniform glare
                std::fill(values.begin(), values.end(), 1e6);
                break;
            case 3: {  // plausible data with one detector reading 10x hot
                const DensityMatrix rho = random_density(povm.dim(), rng);
                const std::vector<double> p = born_probabilities(rho, povm);
                for (size_t k = 0; k < m; ++k)
                    values[k] = static_cast<double>(rng.poisson(5000.0 * std::max(p[k], 0.0)));
                values[rng.uniform_index(m)] *= 10.0;
                break;
            }
            case 4:  // alternating blind/saturated
                for (size_t k = 0; k < m; k += 2) values[k] = 1e5;
                break;
            case 5:  // barely-above-zero fractions
                std::fill(values.begin(), values.end(), 1e-9);
                break;
            case 6:  // small fractional counts
                for (double& v : values) v = 100.0 * rng.uniform();
                break;
            case 7:  // mutually contradictory correlations
                for (size_t k = 0; k < m; ++k) values[k] = (k % 3 == 0) ? 1e6 : 0.0;
                break;
        }
        for (size_t k = 0; k < m; ++k) rec.counts.emplace_back(povm.projectors[k].label, values[k]);

        double total = 0.0;
        if (povm.mode == PovmMode::Single6) {
            for (double v : values) total += v;
            total /= 3.0;
        } else {
            for (size_t k = 0; k < 4; ++k) total += values[k];
        }
        total = std::max(1.0, total);
        rec.total_per_basis = total;

        const MleResult res = mle_reconstruct(rec, povm, total, opts, rng);
        const PhysicalityReport rep = check_physical(res.rho.matrix(), 1e-10);
        if (!rep.pass) {
            Outcome out;
            out.ok = false;
            out.detail = "record " + std::to_string(i) + " failed: " + rep.summary();
            return out;
        }
        worst_min_eig = std::min(worst_min_eig, rep.min_eigenvalue);
        ++checked;
    }
    Outcome out;
    out.ok = checked == 10000;
    out.detail = "10000 reconstructions physical; worst min eigenvalue " + fmt(worst_min_eig);
    return out;
}

// --- criterion 10: byte-identical CLI reruns ---------------------------------

bool run_cli(const std::string& cli, const std::string& command, const fs::path& config,
             const fs::path& out_dir) {
    const std::string cmd = "\"" + cli + "\" " + command + " --config \"" + config.string() +
                            "\" --out \"" + out_dir.string() + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<std::string> ra, rb;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) ra.push_back(fs::relative(e.path(), a).string());
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) rb.push_back(fs::relative(e.path(), b).string());
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    if (ra != rb) {
        why = "file lists differ between " + a.string() + " and " + b.string();
        return false;
    }
    for (const std::string& rel : ra) {
        std::ifstream fa(a / rel, std::ios::binary), fb(b / rel, std::ios::binary);
        std::ostringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str()) {
            why = rel + " differs between reruns";
            return false;
        }
    }
    return true;
}

Outcome criterion_cli_determinism(const std::string& cli) {
    Outcome out;
    if (cli.empty()) {
        out.detail = "missing --cli path to the command-line binary";
        return out;
    }
    const fs::path root =
        fs::temp_directory_path() / ("qpol_acc10_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);

    const auto write = [&](const char* name, const std::string& body) {
        const fs::path p = root / name;
        std::ofstream f(p, std::ios::binary);
        f << body;
        return p;
    };
    const fs::path sim_cfg = write("sim.json", R"({
        "scenario": {"element": "lp", "configuration": "nonlocal", "alpha_deg": 37},
        "noise": {"n_mean": 800},
        "tomography": {"povm": "two_minimal16"},
        "trials": 3,
        "seed": 11
    })");
    const fs::path qfi_cfg = write("qfi.json", R"({
        "scenario": {"element": "qwp", "configuration": "nonlocal"},
        "alpha_sweep": {"start_deg": 0, "stop_deg": 90, "step_deg": 15},
        "seed": 3
    })");
    const fs::path sweep_cfg = write("sweep.json", R"({
        "scenario": {"element": "qwp", "configuration": "nonlocal", "alpha_deg": 37},
        "noise": {"n_mean": 500},
        "tomography": {"povm": "two_minimal16"},
        "trials": 3,
        "q_grid": [0.0, 0.3],
        "estimator": "both",
        "seed": 7
    })");

    struct Job {
        const char* command;
        fs::path config;
    };
    const Job jobs[] = {{"simulate", sim_cfg}, {"qfi", qfi_cfg}, {"bias-sweep", sweep_cfg}};
    for (const Job& j : jobs) {
        const fs::path da = root / (std::string(j.command) + "_a");
        const fs::path db = root / (std::string(j.command) + "_b");
        if (!run_cli(cli, j.command, j.config, da) || !run_cli(cli, j.command, j.config, db)) {
            out.detail = std::string(j.command) + " exited nonzero";
            return out;
        }
        std::string why;
        if (!same_tree(da, db, why)) {
            out.detail = std::string(j.command) + ": " + why;
            return out;
        }
    }

    // a command that consumes an artifact written by another command
    const fs::path est_cfg = write("est.json", std::string(R"({
        "scenario": {"element": "lp", "configuration": "nonlocal", "alpha_deg": 37},
        "tomography": {"povm": "two_minimal16"},
        "counts_file": ")") + (root / "simulate_a" / "trial_0_counts.csv").string() +
                                                    R"(",
        "estimator": "both",
        "seed": 5
    })");
    const fs::path ea = root / "estimate_a";
    const fs::path eb = root / "estimate_b";
    if (!run_cli(cli, "estimate", est_cfg, ea) || !run_cli(cli, "estimate", est_cfg, eb)) {
        out.detail = "estimate exited nonzero";
        return out;
    }
    std::string why;
    if (!same_tree(ea, eb, why)) {
        out.detail = "estimate: " + why;
        return out;
    }

    fs::remove_all(root);
    out.ok = true;
    out.detail = "simulate, qfi, bias-sweep, estimate reruns byte-identical";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc)
            criterion = std::atoi(argv[++i]);
        else if (arg == "--cli" && i + 1 < argc)
            cli = argv[++i];
    }
    if (criterion < 1 || criterion > 10) {
        std::cerr << "usage: qpol_acceptance --criterion N [--cli PATH]\n";
        return 2;
    }

    const char* names[] = {"information values for the four reference scenarios",
                           "superposition-probe waveplate information curve",
                           "factor-two information advantage of the entangled probe",
                           "closed-form outputs match direct channel application",
                           "exact-count tomography round trip",
                           "statistical reconstruction quality at 5000 counts",
                           "noiseless angle recovery at 37 degrees",
                           "bias grows with noise; fidelity estimator wins at strong noise",
                           "reconstruction physicality under adversarial counts",
                           "byte-identical command-line reruns"};
    const double budgets_s[] = {1, 1, 1, 1, 120, 300, 10, 1800, 1800, 60};

    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    switch (criterion) {
        case 1: out = criterion_information_table(); break;
        case 2: out = criterion_superposition_curve(); break;
        case 3: out = criterion_factor_two(); break;
        case 4: out = criterion_closed_form_agreement(); break;
        case 5: out = criterion_tomography_round_trip(); break;
        case 6: out = criterion_statistical_mle(); break;
        case 7: out = criterion_noiseless_recovery(); break;
        case 8: out = criterion_bias_trend(); break;
        case 9: out = criterion_physicality(); break;
        case 10: out = criterion_cli_determinism(cli); break;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool in_budget = elapsed <= budgets_s[criterion - 1];
    const bool ok = out.ok && in_budget;
    std::cout << (ok ? "PASS" : "FAIL") << ": " << names[criterion - 1] << " (" << out.detail;
    if (!in_budget) std::cout << "; exceeded " << fmt(budgets_s[criterion - 1]) << " s budget";
    std::cout << "; " << fmt(elapsed) << " s)\n";
    return ok ? 0 : 1;
}
