#include "qpol/cli.hpp"

#include "qpol/count_io.hpp"
#include "qpol/errors.hpp"
#include "qpol/estimators.hpp"
#include "qpol/qfi.hpp"
#include "qpol/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

namespace qpol {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

fs::path ensure_out_dir(const ExperimentConfig& cfg) {
    const fs::path dir = cfg.out_dir.empty() ? fs::path("out") : fs::path(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path.string());
    f << content;
    if (!f) throw DataError("write failed: " + path.string());
}

// JSON has no inf/nan literals; non-finite values (vanishing information)
// are emitted as null.
ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson config_echo(const ExperimentConfig& cfg) {
    return ojson::parse(config_to_json_text(cfg));
}

Scenario with_alpha(const Scenario& sc, double alpha_deg) {
    return Scenario{
        make_channel(sc.channel.element, alpha_deg * kPi / 180.0, sc.channel.configuration),
        sc.probe};
}

std::vector<double> report_alphas(const ExperimentConfig& cfg) {
    if (!cfg.alpha_sweep) return {cfg.alpha_deg};
    const AlphaSweep& s = *cfg.alpha_sweep;
    std::vector<double> alphas;
    const long n = std::lround(std::floor((s.stop_deg - s.start_deg) / s.step_deg + 1e-9));
    for (long i = 0; i <= n; ++i) alphas.push_back(s.start_deg + static_cast<double>(i) * s.step_deg);
    return alphas;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Last CSV column may hold free text; quote it so embedded commas stay in one
// cell.
std::string csv_note(const std::string& note) {
    if (note.empty()) return note;
    std::string quoted = "\"";
    for (char c : note) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::vector<EstimatorKind> requested_estimators(const ExperimentConfig& cfg) {
    std::vector<EstimatorKind> kinds;
    if (cfg.estimator == "alpha1" || cfg.estimator == "both")
        kinds.push_back(EstimatorKind::Alpha1);
    if (cfg.estimator == "alpha2" || cfg.estimator == "both")
        kinds.push_back(EstimatorKind::Alpha2);
    return kinds;
}

ojson physicality_json(const PhysicalityReport& rep) {
    return ojson{{"pass", rep.pass},
                 {"hermiticity_defect", rep.hermiticity_defect},
                 {"trace_defect", rep.trace_defect},
                 {"min_eigenvalue", rep.min_eigenvalue},
                 {"tolerance", rep.tolerance}};
}

ojson mle_json(const MleResult& res) {
    return ojson{{"objective", res.objective},
                 {"iterations", res.iterations},
                 {"evaluations", res.evaluations},
                 {"converged", res.converged}};
}

}  // namespace

int cmd_qfi(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out) {
    const fs::path dir = ensure_out_dir(cfg);
    const long m = std::llround(static_cast<double>(cfg.trials) * cfg.noise.n_mean);

    struct Row {
        std::string scenario;
        double alpha_deg, qfi, qcrb_single, qcrb_m;
        std::string note;
    };
    std::vector<Row> rows;
    for (double a : report_alphas(cfg)) {
        const Scenario sc = with_alpha(cfg.scenario, a);
        const QfiResult f = scenario_qfi(sc, sc.channel.alpha);
        Row r{f.scenario, a, f.value, f.qcrb, qcrb(f, m), ""};
        if (f.value <= 0.0) r.note = "no information: the output state does not depend on alpha";
        rows.push_back(std::move(r));
    }

    fs::path path;
    if (args.format == "json") {
        ojson j;
        j["version"] = kVersion;
        j["command"] = "qfi";
        j["master_seed"] = cfg.seed;
        j["config"] = config_echo(cfg);
        j["m"] = m;
        ojson jrows = ojson::array();
        for (const Row& r : rows)
            jrows.push_back({{"scenario", r.scenario},
                             {"alpha_deg", r.alpha_deg},
                             {"qfi", r.qfi},
                             {"qcrb_single", finite_or_null(r.qcrb_single)},
                             {"qcrb_m", finite_or_null(r.qcrb_m)},
                             {"note", r.note}});
        j["rows"] = jrows;
        path = dir / "qfi.json";
        write_text(path, j.dump(2) + "\n");
    } else {
        std::string csv = "scenario,alpha_deg,qfi,qcrb_single,m,qcrb_m,note\n";
        for (const Row& r : rows)
            csv += r.scenario + "," + format_double(r.alpha_deg) + "," + format_double(r.qfi) +
                   "," + format_double(r.qcrb_single) + "," + std::to_string(m) + "," +
                   format_double(r.qcrb_m) + "," + csv_note(r.note) + "\n";
        path = dir / "qfi.csv";
        write_text(path, csv);
    }

    for (const Row& r : rows) {
        out << "qfi " << r.scenario << " alpha=" << format_double(r.alpha_deg)
            << " deg: F=" << format_double(r.qfi) << " qcrb(m=" << m
            << ")=" << format_double(r.qcrb_m);
        if (!r.note.empty()) out << " [warning: " << r.note << "]";
        out << "\n";
    }
    out << "wrote " << path.generic_string() << "\n";
    return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out) {
    const fs::path dir = ensure_out_dir(cfg);
    const PovmSet povm = povm_set(resolved_povm(cfg));
    const int trials = cfg.trials;

    std::vector<std::optional<TrialResult>> results(trials);
    auto worker = [&](int start, int stride) {
        for (int ti = start; ti < trials; ti += stride)
            results[ti] = run_noisy_trial(cfg.scenario, povm, cfg.noise,
                                          derive_seed(cfg.seed, static_cast<uint64_t>(ti)),
                                          cfg.mle);
    };
    const int jobs = std::max(1, std::min(args.jobs, trials));
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w, jobs);
        for (auto& t : threads) t.join();
    }

    const DensityMatrix ideal = scenario_output(cfg.scenario);
    ojson jtrials = ojson::array();
    std::vector<double> fidelities;
    bool all_converged = true;
    for (int ti = 0; ti < trials; ++ti) {
        const TrialResult& tr = *results[ti];
        const uint64_t trial_seed = derive_seed(cfg.seed, static_cast<uint64_t>(ti));
        const std::string counts_name = "trial_" + std::to_string(ti) + "_counts.csv";
        const std::string rho_name = "trial_" + std::to_string(ti) + "_rho.json";
        write_count_csv((dir / counts_name).string(), tr.counts, povm);
        const double fid = fidelity(tr.mle.rho, ideal);
        fidelities.push_back(fid);
        all_converged = all_converged && tr.mle.converged;
        write_density_json((dir / rho_name).string(), tr.mle.rho.matrix(),
                           {{"scenario", scenario_name(cfg.scenario)},
                            {"method", "mle"},
                            {"trial_index", std::to_string(ti)},
                            {"trial_seed", std::to_string(trial_seed)}});
        jtrials.push_back({{"index", ti},
                           {"seed", trial_seed},
                           {"counts_file", counts_name},
                           {"rho_file", rho_name},
                           {"objective", tr.mle.objective},
                           {"evaluations", tr.mle.evaluations},
                           {"converged", tr.mle.converged},
                           {"fidelity_to_ideal", fid}});
    }

    ojson manifest;
    manifest["version"] = kVersion;
    manifest["command"] = "simulate";
    manifest["master_seed"] = cfg.seed;
    manifest["config"] = config_echo(cfg);
    manifest["povm"] = povm_name(povm.mode);
    manifest["trials"] = jtrials;
    manifest["summary"] = {{"trial_count", trials},
                           {"median_fidelity_to_ideal", median_of(fidelities)},
                           {"min_fidelity_to_ideal",
                            *std::min_element(fidelities.begin(), fidelities.end())},
                           {"all_converged", all_converged}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "simulate " << scenario_name(cfg.scenario) << ": " << trials
        << " trial(s), median fidelity to ideal "
        << format_double(median_of(fidelities)) << "\n";
    if (!all_converged)
        out << "warning: some reconstructions hit the evaluation budget before stalling; see "
               "manifest\n";
    out << "wrote " << (dir / "manifest.json").generic_string() << "\n";
    return kExitOk;
}

int cmd_reconstruct(const ExperimentConfig& cfg, const GlobalArgs&, std::ostream& out) {
    const fs::path dir = ensure_out_dir(cfg);
    if (cfg.counts_file.empty()) throw ConfigError("reconstruct requires 'counts_file'");
    if (!cfg.povm)
        throw ConfigError("reconstruct requires an explicit 'tomography.povm' "
                          "(single6, two_minimal16 or two_full36)");
    const PovmSet povm = povm_set(*cfg.povm);
    const CountRecord rec = read_count_csv(cfg.counts_file, povm);

    ComplexMatrix rho_emitted = ComplexMatrix::zero(povm.dim(), povm.dim());
    std::optional<MleResult> mle;
    std::optional<DensityMatrix> metrics_rho;
    std::string metrics_basis = "reconstruction";
    if (cfg.method == "linear") {
        rho_emitted = linear_inversion(rec, povm);
    } else {
        Rng rng(derive_seed(cfg.seed, 0x4d4c45));
        mle = mle_reconstruct(rec, povm, rec.total_per_basis, cfg.mle, rng);
        rho_emitted = mle->rho.matrix();
        metrics_rho = mle->rho;
    }
    const PhysicalityReport phys = check_physical(rho_emitted, 1e-10);
    if (!metrics_rho) {
        if (phys.pass) {
            metrics_rho = DensityMatrix(rho_emitted);
        } else {
            metrics_rho = physicalize(rho_emitted);
            metrics_basis = "physicalized";
        }
    }

    write_density_json((dir / "rho.json").string(), rho_emitted,
                       {{"method", cfg.method},
                        {"counts_file", cfg.counts_file},
                        {"povm", povm_name(povm.mode)}});

    ojson report;
    report["version"] = kVersion;
    report["command"] = "reconstruct";
    report["master_seed"] = cfg.seed;
    report["config"] = config_echo(cfg);
    report["counts_file"] = cfg.counts_file;
    report["povm"] = povm_name(povm.mode);
    report["method"] = cfg.method;
    report["physicality"] = physicality_json(phys);
    report["mle"] = mle ? mle_json(*mle) : ojson(nullptr);
    ojson metrics;
    metrics["basis"] = metrics_basis;
    metrics["purity"] = metrics_rho->purity();
    if (povm.dim() == 4) metrics["concurrence"] = concurrence(*metrics_rho);
    if (!cfg.reference_file.empty()) {
        const ComplexMatrix ref_raw = read_density_json(cfg.reference_file);
        if (ref_raw.rows() != povm.dim())
            throw DataError(cfg.reference_file + ": reference dimension " +
                            std::to_string(ref_raw.rows()) + " does not match the POVM (" +
                            std::to_string(povm.dim()) + ")");
        std::optional<DensityMatrix> ref;
        try {
            ref = DensityMatrix(ref_raw);
        } catch (const std::invalid_argument& e) {
            throw DataError(cfg.reference_file + ": reference state is not physical: " + e.what());
        }
        metrics["fidelity_to_reference"] = fidelity(*metrics_rho, *ref);
    }
    report["metrics"] = metrics;
    write_text(dir / "report.json", report.dump(2) + "\n");

    out << "reconstruct method=" << cfg.method << " povm=" << povm_name(povm.mode)
        << " counts=" << cfg.counts_file << "\n";
    out << "physical: " << (phys.pass ? "yes" : "no")
        << " (min eigenvalue " << format_double(phys.min_eigenvalue) << ")\n";
    if (cfg.method == "linear" && !phys.pass)
        out << "warning: linear inversion produced negative eigenvalues; rho.json holds the raw "
               "(unphysical) matrix and metrics use its physicalized projection\n";
    out << "purity " << format_double(metrics_rho->purity()) << "\n";
    if (povm.dim() == 4)
        out << "concurrence " << format_double(concurrence(*metrics_rho)) << "\n";
    if (metrics.contains("fidelity_to_reference"))
        out << "fidelity to reference "
            << format_double(metrics["fidelity_to_reference"].get<double>()) << "\n";
    out << "wrote " << (dir / "rho.json").generic_string() << "\n";
    out << "wrote " << (dir / "report.json").generic_string() << "\n";
    return (mle && !mle->converged) ? kExitNotConverged : kExitOk;
}

int cmd_estimate(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out) {
    const fs::path dir = ensure_out_dir(cfg);
    const bool have_counts = !cfg.counts_file.empty();
    const bool have_input = !cfg.input_file.empty();
    if (have_counts == have_input)
        throw ConfigError("estimate requires exactly one of 'counts_file' or 'input_file'");

    std::optional<MleResult> mle;
    std::optional<DensityMatrix> rho;
    std::string source;
    if (have_input) {
        const ComplexMatrix m = read_density_json(cfg.input_file);
        try {
            rho = DensityMatrix(m);
        } catch (const std::invalid_argument& e) {
            throw DataError(cfg.input_file + ": input state is not physical: " + e.what());
        }
        source = cfg.input_file;
    } else {
        const PovmSet povm = povm_set(resolved_povm(cfg));
        const CountRecord rec = read_count_csv(cfg.counts_file, povm);
        if (cfg.method == "linear") {
            rho = physicalize(linear_inversion(rec, povm));
        } else {
            Rng rng(derive_seed(cfg.seed, 0x4d4c45));
            mle = mle_reconstruct(rec, povm, rec.total_per_basis, cfg.mle, rng);
            rho = mle->rho;
        }
        source = cfg.counts_file;
    }

    struct Row {
        std::string estimator;
        AlphaEstimate est;
    };
    std::vector<Row> rows;
    for (EstimatorKind k : requested_estimators(cfg)) {
        AlphaEstimate e;
        try {
            e = (k == EstimatorKind::Alpha1) ? alpha_hat_1(*rho, cfg.scenario)
                                             : alpha_hat_2(*rho, cfg.scenario);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("estimator rejected for this scenario: ") + ex.what());
        }
        rows.push_back({estimator_name(k), e});
    }

    const std::string scen = scenario_name(cfg.scenario);
    fs::path path;
    if (args.format == "json") {
        ojson j;
        j["version"] = kVersion;
        j["command"] = "estimate";
        j["master_seed"] = cfg.seed;
        j["config"] = config_echo(cfg);
        j["source"] = source;
        j["reconstruction"] = mle ? mle_json(*mle) : ojson(nullptr);
        ojson jrows = ojson::array();
        for (const Row& r : rows)
            jrows.push_back({{"estimator", r.estimator},
                             {"scenario", scen},
                             {"alpha_deg", r.est.alpha * 180.0 / kPi},
                             {"alpha_rad", r.est.alpha},
                             {"flagged", r.est.flagged},
                             {"note", r.est.note}});
        j["estimates"] = jrows;
        path = dir / "estimate.json";
        write_text(path, j.dump(2) + "\n");
    } else {
        std::string csv = "estimator,scenario,alpha_deg,flagged,note\n";
        for (const Row& r : rows)
            csv += r.estimator + "," + scen + "," + format_double(r.est.alpha * 180.0 / kPi) +
                   "," + (r.est.flagged ? "true" : "false") + "," + csv_note(r.est.note) + "\n";
        path = dir / "estimate.csv";
        write_text(path, csv);
    }

    for (const Row& r : rows) {
        out << r.estimator << ": " << format_double(r.est.alpha * 180.0 / kPi) << " deg";
        if (r.est.flagged) out << " [flagged: " << r.est.note << "]";
        out << "\n";
    }
    out << "wrote " << path.generic_string() << "\n";
    return (mle && !mle->converged) ? kExitNotConverged : kExitOk;
}

int cmd_bias_sweep(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out) {
    const fs::path dir = ensure_out_dir(cfg);
    if (cfg.q_grid.empty()) throw ConfigError("bias-sweep requires a non-empty 'q_grid'");

    std::string csv = "q,trial_count,mean_abs_bias_deg,var_deg2,estimator,scenario\n";
    ojson jests = ojson::array();
    for (EstimatorKind k : requested_estimators(cfg)) {
        const SweepResult res = bias_sweep(cfg.scenario, k, cfg.q_grid, cfg.noise, cfg.trials,
                                           cfg.seed, args.jobs, cfg.povm, cfg.mle);
        ojson jrows = ojson::array();
        for (const SweepRow& row : res.rows) {
            csv += format_double(row.q) + "," + std::to_string(row.trial_count) + "," +
                   format_double(row.mean_abs_bias_deg) + "," + format_double(row.var_deg2) +
                   "," + row.estimator + "," + row.scenario + "\n";
            jrows.push_back({{"q", row.q},
                             {"trial_count", row.trial_count},
                             {"mean_abs_bias_deg", row.mean_abs_bias_deg},
                             {"median_abs_bias_deg", row.median_abs_bias_deg},
                             {"var_deg2", row.var_deg2}});
        }
        const bool have_trend = std::isfinite(res.spearman) && cfg.q_grid.size() >= 2;
        const std::string verdict =
            !have_trend ? "n/a" : (res.spearman >= 0.9 ? "increasing" : "no-trend");
        jests.push_back({{"estimator", estimator_name(k)},
                         {"spearman", finite_or_null(res.spearman)},
                         {"verdict", verdict},
                         {"rows", jrows}});
        out << estimator_name(k) << ": spearman " << format_double(res.spearman) << " ("
            << verdict << ")\n";
    }
    write_text(dir / "sweep.csv", csv);

    ojson summary;
    summary["version"] = kVersion;
    summary["command"] = "bias-sweep";
    summary["master_seed"] = cfg.seed;
    summary["config"] = config_echo(cfg);
    summary["q_convention"] = "q = 0 is noiseless; q enters the pipeline as q1 = q2 = 1 - q";
    summary["estimators"] = jests;
    write_text(dir / "sweep_summary.json", summary.dump(2) + "\n");

    out << "wrote " << (dir / "sweep.csv").generic_string() << "\n";
    out << "wrote " << (dir / "sweep_summary.json").generic_string() << "\n";
    return kExitOk;
}

int run_command(const std::string& command, const GlobalArgs& args, std::ostream& out,
                std::ostream& err) {
    try {
        if (args.config_path.empty()) throw ConfigError("--config is required");
        if (args.format != "csv" && args.format != "json")
            throw ConfigError("--format must be \"csv\" or \"json\"");
        if (args.jobs < 1) throw ConfigError("--jobs must be >= 1");
        ExperimentConfig cfg = load_config(args.config_path);
        if (args.seed) cfg.seed = *args.seed;
        if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;

        if (command == "qfi") return cmd_qfi(cfg, args, out);
        if (command == "simulate") return cmd_simulate(cfg, args, out);
        if (command == "reconstruct") return cmd_reconstruct(cfg, args, out);
        if (command == "estimate") return cmd_estimate(cfg, args, out);
        if (command == "bias-sweep") return cmd_bias_sweep(cfg, args, out);
        throw ConfigError("unknown command: " + command);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
}

}  // namespace qpol
