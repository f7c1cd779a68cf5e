#include "qpol/cli.hpp"
#include "qpol/version.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"polarimetry lab: entangled-photon channels, tomography and angle estimation"};
    app.set_version_flag("--version", qpol::kVersion);
    app.require_subcommand(1);

    qpol::GlobalArgs args;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "JSON run configuration")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "master seed, overrides the config");
        sub->add_option("--jobs", args.jobs, "worker threads for trial-level parallelism");
        sub->add_option("--out", args.out_dir, "output directory, overrides the config");
        sub->add_option("--format", args.format, "report format: csv or json");
    };

    add_common(app.add_subcommand(
        "qfi", "information and precision-bound report for the configured scenario"));
    add_common(app.add_subcommand(
        "simulate", "noisy counting campaign: per-trial count files, reconstructions, manifest"));
    add_common(app.add_subcommand(
        "reconstruct", "density matrix from an ingested count file, with quality metrics"));
    add_common(app.add_subcommand(
        "estimate", "channel angle from a count file or density-matrix file"));
    add_common(app.add_subcommand(
        "bias-sweep", "estimator bias versus noise strength over a q grid"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qpol::kExitConfigError;
    }

    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed") > 0) args.seed = seed;
    return qpol::run_command(active->get_name(), args, std::cout, std::cerr);
}
