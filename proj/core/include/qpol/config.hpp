#pragma once

#include "qpol/channels.hpp"
#include "qpol/noise.hpp"
#include "qpol/tomography.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qpol {

// Name <-> enum maps for the user-facing surfaces (config files, CLI output).
// The *_from_name parsers throw ConfigError on unknown names.
std::string element_name(Element e);
std::string configuration_name(Configuration c);
std::string povm_name(PovmMode mode);
std::string probe_name(const StateKind& kind);
Element element_from_name(const std::string& s);
Configuration configuration_from_name(const std::string& s);
PovmMode povm_from_name(const std::string& s);

struct AlphaSweep {
    double start_deg = 0.0;
    double stop_deg = 90.0;
    double step_deg = 1.0;
};

// One JSON document drives every subcommand; each command reads the fields it
// needs and ignores the rest. Angles are degrees here and radians everywhere
// below this layer.
struct ExperimentConfig {
    Scenario scenario{{Element::LP, 0.0, Configuration::Nonlocal}, StateKind::bell_psi_plus()};
    double alpha_deg = 0.0;

    NoiseConfig noise;
    std::optional<PovmMode> povm;  // absent -> default for the configuration
    MleOptions mle;

    int trials = 1;
    std::vector<double> q_grid;        // bias-sweep knob, 0 = noiseless
    std::string estimator = "alpha1";  // alpha1 | alpha2 | both
    std::string method = "mle";        // mle | linear

    std::string counts_file;     // reconstruct/estimate input
    std::string input_file;      // estimate: density-matrix JSON input
    std::string reference_file;  // reconstruct: fidelity reference
    std::string out_dir;         // default "out"; --out overrides

    std::optional<AlphaSweep> alpha_sweep;
    std::uint64_t seed = 0;
};

// Parse + validate. Unknown keys, bad enum names, out-of-range values and
// malformed JSON all throw ConfigError naming the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text, const std::string& origin);

// POVM to use: the explicit choice, else single6 for local scenarios and the
// 36-setting set for nonlocal ones.
PovmMode resolved_povm(const ExperimentConfig& cfg);

// Normalized JSON view of the config (fixed key order, independent of the
// input file's formatting); embedded verbatim in run manifests so a manifest
// alone reproduces the run. The output directory is deliberately left out:
// artifacts must not depend on where they are written.
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace qpol
