#include "qpol/config.hpp"

#include "qpol/errors.hpp"
#include "qpol/estimators.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace qpol {

namespace {

using json = nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw ConfigError(origin + ": " + msg);
}

std::string joined(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

void check_keys(const json& obj, const std::string& origin, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) fail(origin, "unknown key '" + joined(where, it.key()) + "'");
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require_object(const json& v, const std::string& origin, const std::string& where) {
    if (!v.is_object()) fail(origin, "'" + where + "' must be an object");
    return v;
}

double get_double(const json& obj, const std::string& origin, const std::string& where,
                  const char* key, double dflt) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_number()) fail(origin, "'" + joined(where, key) + "' must be a number");
    return v->get<double>();
}

long get_long(const json& obj, const std::string& origin, const std::string& where,
              const char* key, long dflt) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_number_integer()) fail(origin, "'" + joined(where, key) + "' must be an integer");
    return v->get<long>();
}

bool get_bool(const json& obj, const std::string& origin, const std::string& where,
              const char* key, bool dflt) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_boolean()) fail(origin, "'" + joined(where, key) + "' must be a boolean");
    return v->get<bool>();
}

std::string get_string(const json& obj, const std::string& origin, const std::string& where,
                       const char* key, const std::string& dflt) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_string()) fail(origin, "'" + joined(where, key) + "' must be a string");
    return v->get<std::string>();
}

StateKind probe_from_name(const std::string& s, Configuration configuration,
                          const std::string& origin) {
    if (s == "bell") {
        if (configuration == Configuration::Local)
            fail(origin, "'scenario.probe' \"bell\" is two-photon; configuration is local");
        return StateKind::bell_psi_plus();
    }
    if (s == "mixed")
        return StateKind::maximally_mixed(configuration == Configuration::Local ? 2 : 4);
    if (s == "superposition") {
        if (configuration == Configuration::Nonlocal)
            fail(origin,
                 "'scenario.probe' \"superposition\" is single-photon; configuration is nonlocal");
        return StateKind::superposition_hv();
    }
    fail(origin, "'scenario.probe' must be \"bell\", \"mixed\" or \"superposition\", got \"" + s +
                     "\"");
}

}  // namespace

std::string element_name(Element e) { return e == Element::LP ? "lp" : "qwp"; }

std::string configuration_name(Configuration c) {
    return c == Configuration::Local ? "local" : "nonlocal";
}

std::string povm_name(PovmMode mode) {
    switch (mode) {
        case PovmMode::Single6: return "single6";
        case PovmMode::TwoMinimal16: return "two_minimal16";
        case PovmMode::TwoFull36: return "two_full36";
    }
    return "?";
}

std::string probe_name(const StateKind& kind) {
    switch (kind.tag()) {
        case StateKind::Tag::BellPsiPlus: return "bell";
        case StateKind::Tag::MaximallyMixed: return "mixed";
        case StateKind::Tag::SuperpositionHV: return "superposition";
        case StateKind::Tag::Custom: return "custom";
    }
    return "?";
}

Element element_from_name(const std::string& s) {
    if (s == "lp") return Element::LP;
    if (s == "qwp") return Element::QWP;
    throw ConfigError("'scenario.element' must be \"lp\" or \"qwp\", got \"" + s + "\"");
}

Configuration configuration_from_name(const std::string& s) {
    if (s == "local") return Configuration::Local;
    if (s == "nonlocal") return Configuration::Nonlocal;
    throw ConfigError("'scenario.configuration' must be \"local\" or \"nonlocal\", got \"" + s +
                      "\"");
}

PovmMode povm_from_name(const std::string& s) {
    if (s == "single6") return PovmMode::Single6;
    if (s == "two_minimal16") return PovmMode::TwoMinimal16;
    if (s == "two_full36") return PovmMode::TwoFull36;
    throw ConfigError("'tomography.povm' must be \"single6\", \"two_minimal16\" or \"two_full36\""
                      ", got \"" + s + "\"");
}

PovmMode resolved_povm(const ExperimentConfig& cfg) {
    if (cfg.povm) return *cfg.povm;
    return default_povm_mode(cfg.scenario.channel.configuration);
}

ExperimentConfig config_from_json_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(origin, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(origin, "top level must be a JSON object");
    check_keys(root, origin, "",
               {"scenario", "noise", "tomography", "trials", "q_grid", "estimator", "method",
                "counts_file", "input_file", "reference_file", "out_dir", "alpha_sweep", "seed"});

    ExperimentConfig cfg;

    Element element = Element::LP;
    Configuration configuration = Configuration::Nonlocal;
    std::string probe_str;
    if (const json* sc = find(root, "scenario")) {
        require_object(*sc, origin, "scenario");
        check_keys(*sc, origin, "scenario", {"element", "configuration", "probe", "alpha_deg"});
        try {
            element = element_from_name(get_string(*sc, origin, "scenario", "element", "lp"));
            configuration = configuration_from_name(
                get_string(*sc, origin, "scenario", "configuration", "nonlocal"));
        } catch (const ConfigError& e) {
            fail(origin, e.what());
        }
        probe_str = get_string(*sc, origin, "scenario", "probe", "");
        cfg.alpha_deg = get_double(*sc, origin, "scenario", "alpha_deg", 0.0);
    }
    if (!(cfg.alpha_deg >= 0.0 && cfg.alpha_deg < 180.0))
        fail(origin, "'scenario.alpha_deg' must lie in [0, 180)");
    if (probe_str.empty())
        probe_str = configuration == Configuration::Local ? "mixed" : "bell";
    StateKind probe = probe_from_name(probe_str, configuration, origin);
    cfg.scenario =
        Scenario{make_channel(element, cfg.alpha_deg * kPi / 180.0, configuration), probe};

    if (const json* nz = find(root, "noise")) {
        require_object(*nz, origin, "noise");
        check_keys(*nz, origin, "noise",
                   {"q", "q1", "q2", "sigma_deg", "n_mean", "k_random", "rotation_draw",
                    "count_stat", "round_counts"});
        if (find(*nz, "q") && (find(*nz, "q1") || find(*nz, "q2")))
            fail(origin, "'noise.q' is shorthand for q1 = q2 = 1 - q; do not mix it with q1/q2");
        if (find(*nz, "q")) {
            const double q = get_double(*nz, origin, "noise", "q", 0.0);
            if (!(q >= 0.0 && q <= 1.0)) fail(origin, "'noise.q' must lie in [0, 1]");
            cfg.noise.q1 = 1.0 - q;
            cfg.noise.q2 = 1.0 - q;
        } else {
            cfg.noise.q1 = get_double(*nz, origin, "noise", "q1", cfg.noise.q1);
            cfg.noise.q2 = get_double(*nz, origin, "noise", "q2", cfg.noise.q2);
        }
        const double sigma_deg =
            get_double(*nz, origin, "noise", "sigma_deg", cfg.noise.sigma * 180.0 / kPi);
        if (!(sigma_deg >= 0.0)) fail(origin, "'noise.sigma_deg' must be >= 0");
        cfg.noise.sigma = sigma_deg * kPi / 180.0;
        cfg.noise.n_mean = get_double(*nz, origin, "noise", "n_mean", cfg.noise.n_mean);
        cfg.noise.k_random =
            static_cast<int>(get_long(*nz, origin, "noise", "k_random", cfg.noise.k_random));
        const std::string draw =
            get_string(*nz, origin, "noise", "rotation_draw", "per_projector");
        if (draw == "per_projector")
            cfg.noise.rotation_draw = RotationDraw::PerProjector;
        else if (draw == "per_record")
            cfg.noise.rotation_draw = RotationDraw::PerRecord;
        else
            fail(origin, "'noise.rotation_draw' must be \"per_projector\" or \"per_record\"");
        const std::string stat = get_string(*nz, origin, "noise", "count_stat", "poisson");
        if (stat == "poisson")
            cfg.noise.count_stat = CountStat::Poisson;
        else if (stat == "mean")
            cfg.noise.count_stat = CountStat::Mean;
        else
            fail(origin, "'noise.count_stat' must be \"poisson\" or \"mean\"");
        cfg.noise.round_counts =
            get_bool(*nz, origin, "noise", "round_counts", cfg.noise.round_counts);
    }
    try {
        validate_noise_config(cfg.noise);
    } catch (const ConfigError& e) {
        fail(origin, e.what());
    }

    if (const json* tm = find(root, "tomography")) {
        require_object(*tm, origin, "tomography");
        check_keys(*tm, origin, "tomography", {"povm", "mle"});
        const std::string povm = get_string(*tm, origin, "tomography", "povm", "");
        if (!povm.empty()) {
            try {
                cfg.povm = povm_from_name(povm);
            } catch (const ConfigError& e) {
                fail(origin, e.what());
            }
        }
        if (const json* ml = find(*tm, "mle")) {
            require_object(*ml, origin, "tomography.mle");
            check_keys(*ml, origin, "tomography.mle",
                       {"restarts", "max_evals", "improvement_tol", "stall_iters", "good_enough"});
            cfg.mle.restarts = static_cast<int>(
                get_long(*ml, origin, "tomography.mle", "restarts", cfg.mle.restarts));
            cfg.mle.max_evals =
                get_long(*ml, origin, "tomography.mle", "max_evals", cfg.mle.max_evals);
            cfg.mle.improvement_tol = get_double(*ml, origin, "tomography.mle", "improvement_tol",
                                                 cfg.mle.improvement_tol);
            cfg.mle.stall_iters = static_cast<int>(
                get_long(*ml, origin, "tomography.mle", "stall_iters", cfg.mle.stall_iters));
            cfg.mle.good_enough =
                get_double(*ml, origin, "tomography.mle", "good_enough", cfg.mle.good_enough);
            if (cfg.mle.restarts < 0) fail(origin, "'tomography.mle.restarts' must be >= 0");
            if (cfg.mle.max_evals < 1) fail(origin, "'tomography.mle.max_evals' must be >= 1");
            if (!(cfg.mle.improvement_tol > 0.0))
                fail(origin, "'tomography.mle.improvement_tol' must be > 0");
            if (cfg.mle.stall_iters < 1) fail(origin, "'tomography.mle.stall_iters' must be >= 1");
            if (!(cfg.mle.good_enough >= 0.0))
                fail(origin, "'tomography.mle.good_enough' must be >= 0");
        }
    }

    cfg.trials = static_cast<int>(get_long(root, origin, "", "trials", cfg.trials));
    if (cfg.trials < 1) fail(origin, "'trials' must be >= 1");

    if (const json* qg = find(root, "q_grid")) {
        if (!qg->is_array()) fail(origin, "'q_grid' must be an array of numbers");
        cfg.q_grid.clear();
        for (const json& v : *qg) {
            if (!v.is_number()) fail(origin, "'q_grid' must be an array of numbers");
            const double q = v.get<double>();
            if (!(q >= 0.0 && q <= 1.0)) fail(origin, "'q_grid' values must lie in [0, 1]");
            cfg.q_grid.push_back(q);
        }
        if (cfg.q_grid.empty()) fail(origin, "'q_grid' must not be empty");
    }

    cfg.estimator = get_string(root, origin, "", "estimator", cfg.estimator);
    if (cfg.estimator != "alpha1" && cfg.estimator != "alpha2" && cfg.estimator != "both")
        fail(origin, "'estimator' must be \"alpha1\", \"alpha2\" or \"both\"");
    cfg.method = get_string(root, origin, "", "method", cfg.method);
    if (cfg.method != "mle" && cfg.method != "linear")
        fail(origin, "'method' must be \"mle\" or \"linear\"");

    cfg.counts_file = get_string(root, origin, "", "counts_file", "");
    cfg.input_file = get_string(root, origin, "", "input_file", "");
    cfg.reference_file = get_string(root, origin, "", "reference_file", "");
    cfg.out_dir = get_string(root, origin, "", "out_dir", "");

    if (const json* sw = find(root, "alpha_sweep")) {
        require_object(*sw, origin, "alpha_sweep");
        check_keys(*sw, origin, "alpha_sweep", {"start_deg", "stop_deg", "step_deg"});
        AlphaSweep sweep;
        sweep.start_deg = get_double(*sw, origin, "alpha_sweep", "start_deg", sweep.start_deg);
        sweep.stop_deg = get_double(*sw, origin, "alpha_sweep", "stop_deg", sweep.stop_deg);
        sweep.step_deg = get_double(*sw, origin, "alpha_sweep", "step_deg", sweep.step_deg);
        if (!(sweep.start_deg >= 0.0 && sweep.start_deg < 180.0))
            fail(origin, "'alpha_sweep.start_deg' must lie in [0, 180)");
        if (!(sweep.stop_deg >= sweep.start_deg && sweep.stop_deg < 180.0))
            fail(origin, "'alpha_sweep.stop_deg' must lie in [start_deg, 180)");
        if (!(sweep.step_deg > 0.0)) fail(origin, "'alpha_sweep.step_deg' must be > 0");
        cfg.alpha_sweep = sweep;
    }

    if (const json* sd = find(root, "seed")) {
        if (!sd->is_number_integer() || (sd->is_number_integer() && !sd->is_number_unsigned() &&
                                         sd->get<long long>() < 0))
            fail(origin, "'seed' must be a non-negative integer");
        cfg.seed = sd->get<std::uint64_t>();
    }

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str(), path);
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["scenario"] = {{"element", element_name(cfg.scenario.channel.element)},
                     {"configuration", configuration_name(cfg.scenario.channel.configuration)},
                     {"probe", probe_name(cfg.scenario.probe)},
                     {"alpha_deg", cfg.alpha_deg}};
    j["noise"] = {{"q1", cfg.noise.q1},
                  {"q2", cfg.noise.q2},
                  {"sigma_deg", cfg.noise.sigma * 180.0 / kPi},
                  {"n_mean", cfg.noise.n_mean},
                  {"k_random", cfg.noise.k_random},
                  {"rotation_draw", cfg.noise.rotation_draw == RotationDraw::PerProjector
                                        ? "per_projector"
                                        : "per_record"},
                  {"count_stat",
                   cfg.noise.count_stat == CountStat::Poisson ? "poisson" : "mean"},
                  {"round_counts", cfg.noise.round_counts}};
    j["tomography"] = {{"povm", povm_name(resolved_povm(cfg))},
                       {"mle",
                        {{"restarts", cfg.mle.restarts},
                         {"max_evals", cfg.mle.max_evals},
                         {"improvement_tol", cfg.mle.improvement_tol},
                         {"stall_iters", cfg.mle.stall_iters},
                         {"good_enough", cfg.mle.good_enough}}}};
    j["trials"] = cfg.trials;
    j["q_grid"] = cfg.q_grid;
    j["estimator"] = cfg.estimator;
    j["method"] = cfg.method;
    j["counts_file"] = cfg.counts_file;
    j["input_file"] = cfg.input_file;
    j["reference_file"] = cfg.reference_file;
    if (cfg.alpha_sweep) {
        j["alpha_sweep"] = {{"start_deg", cfg.alpha_sweep->start_deg},
                            {"stop_deg", cfg.alpha_sweep->stop_deg},
                            {"step_deg", cfg.alpha_sweep->step_deg}};
    } else {
        j["alpha_sweep"] = nullptr;
    }
    j["seed"] = cfg.seed;
    return j.dump(2);
}

}  // namespace qpol
