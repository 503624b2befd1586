#include "snls/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "snls/model.hpp"
#include "snls/states.hpp"

namespace snls {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << "; ";
        os << v[i];
    }
    return os.str();
}

void check_keys(const json& block, const char* name, std::vector<std::string> allowed,
                std::vector<std::string>& errors) {
    for (const auto& [key, value] : block.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            errors.push_back(std::string("unknown key '") + name + "." + key + "'");
        }
    }
}

template <typename T>
T get_or(const json& block, const char* key, T fallback, std::vector<std::string>& errors,
         const char* where) {
    if (!block.contains(key)) return fallback;
    try {
        return block.at(key).get<T>();
    } catch (const json::exception&) {
        errors.push_back(std::string("key '") + where + "." + key + "' has the wrong type");
        return fallback;
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error("invalid configuration: " + join(v)), violations(std::move(v)) {}

GridPtr RunConfig::make_grid_ptr() const { return make_grid(dim, n_per_dim, box_length); }

RunConfig load_config(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({"cannot open config file '" + path + "'"});
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    return parse_config(j, strict);
}

RunConfig parse_config(const json& j, bool strict) {
    std::vector<std::string> errors;
    RunConfig cfg;
    cfg.strict = strict;

    check_keys(j, "", {"seed", "grid", "model", "noise", "integrator", "experiment"}, errors);

    cfg.seed = get_or<std::uint64_t>(j, "seed", 1, errors, "");

    const json grid = j.value("grid", json::object());
    check_keys(grid, "grid", {"dim", "n_per_dim", "box_length"}, errors);
    cfg.dim = get_or<int>(grid, "dim", 1, errors, "grid");
    cfg.n_per_dim = get_or<int>(grid, "n_per_dim", 128, errors, "grid");
    cfg.box_length = get_or<double>(grid, "box_length", 6.283185307179586, errors, "grid");
    if (cfg.dim < 1 || cfg.dim > 3) errors.push_back("grid.dim must be 1, 2 or 3");
    if (cfg.n_per_dim < 4 || cfg.n_per_dim % 2 != 0) {
        errors.push_back("grid.n_per_dim must be even and >= 4");
    }
    if (!(cfg.box_length > 0.0)) errors.push_back("grid.box_length must be > 0");

    const json model = j.value("model", json::object());
    check_keys(model, "model", {"lambda", "alpha", "sigma", "kappa"}, errors);
    cfg.model.lambda = get_or<double>(model, "lambda", 1.0, errors, "model");
    cfg.model.alpha = get_or<int>(model, "alpha", -1, errors, "model");
    cfg.model.sigma = get_or<double>(model, "sigma", 1.0, errors, "model");
    cfg.model.dim = cfg.dim;
    cfg.model.kappa = 1.0;
    cfg.kappa_auto = true;
    if (model.contains("kappa") && !(model.at("kappa").is_string())) {
        cfg.kappa_auto = false;
        cfg.model.kappa = get_or<double>(model, "kappa", 1.0, errors, "model");
        if (!(cfg.model.kappa > 0.0)) errors.push_back("model.kappa must be > 0");
    } else if (model.contains("kappa") && model.at("kappa").get<std::string>() != "auto") {
        errors.push_back("model.kappa must be a positive number or \"auto\"");
    }

    const json noise = j.value("noise", json::object());
    check_keys(noise, "noise", {"amplitude", "decay", "cutoff", "kind"}, errors);
    cfg.noise.amplitude = get_or<double>(noise, "amplitude", 1.0, errors, "noise");
    cfg.noise.decay = get_or<double>(noise, "decay", 4.0, errors, "noise");
    if (noise.contains("cutoff") && !noise.at("cutoff").is_null()) {
        cfg.noise.mode_cutoff = get_or<double>(noise, "cutoff", 0.0, errors, "noise");
        if (!(*cfg.noise.mode_cutoff >= 0.0)) errors.push_back("noise.cutoff must be >= 0");
    }
    const std::string kind = get_or<std::string>(noise, "kind", "circular", errors, "noise");
    if (kind == "circular") {
        cfg.noise.kind = NoiseKind::circular;
    } else if (kind == "real") {
        cfg.noise.kind = NoiseKind::real;
    } else {
        errors.push_back("noise.kind must be 'circular' or 'real'");
    }
    if (cfg.noise.amplitude < 0.0) errors.push_back("noise.amplitude must be >= 0");
    if (!(cfg.noise.decay > 0.0)) errors.push_back("noise.decay must be > 0");

    const json integ = j.value("integrator", json::object());
    check_keys(integ, "integrator",
               {"dt", "padding_factor", "stride", "blowup_ceiling", "sup_refine"}, errors);
    cfg.step.dt = get_or<double>(integ, "dt", 1e-3, errors, "integrator");
    cfg.step.padding_factor = get_or<double>(integ, "padding_factor", 1.5, errors, "integrator");
    cfg.step.diagnostics_stride = get_or<int>(integ, "stride", 10, errors, "integrator");
    cfg.step.blowup_ceiling = get_or<double>(integ, "blowup_ceiling", 1e6, errors, "integrator");
    cfg.step.sup_refine = get_or<int>(integ, "sup_refine", 1, errors, "integrator");
    try {
        validate_step_config(cfg.step);
    } catch (const std::invalid_argument& e) {
        errors.push_back(e.what());
    }

    // model regime checks (hard windows always, strict escalates warnings)
    try {
        ModelParams probe = cfg.model;
        probe.kappa = 1.0;  // placeholder; kappa_auto resolves later
        const auto warns = validate_model(probe, false);
        cfg.warnings.insert(cfg.warnings.end(), warns.begin(), warns.end());
        if (strict && !warns.empty()) {
            for (const auto& w : warns) errors.push_back("strict: " + w);
        }
    } catch (const std::invalid_argument& e) {
        errors.push_back(e.what());
    }
    if (cfg.model.alpha == 1 && cfg.model.sigma > 0.0 &&
        !(cfg.model.sigma * cfg.dim < 2.0)) {
        // focusing functional needs sigma*d < 2; already covered by the
        // subcritical window but kept as an explicit message
        errors.push_back("model: focusing kappa term needs sigma*dim < 2");
    }

    // noise smoothness advisories (warning thresholds, strict escalates)
    const double d = cfg.dim;
    if (cfg.noise.amplitude > 0.0 && !cfg.noise.mode_cutoff) {
        if (!(cfg.noise.decay > 1.0 + d / 2.0)) {
            cfg.warnings.push_back(
                "noise.decay <= 1 + d/2: covariance is not square-summable into H^1 "
                "on the continuum");
            if (strict) errors.push_back("strict: " + cfg.warnings.back());
        } else if (!(cfg.noise.decay > 3.0 + d / 2.0)) {
            cfg.warnings.push_back(
                "noise.decay <= 3 + d/2: H^3 summability (mixing experiments) fails "
                "on the continuum");
            if (strict) errors.push_back("strict: " + cfg.warnings.back());
        }
    }

    cfg.experiment_store = std::make_shared<json>(j.value("experiment", json::object()));
    cfg.experiment = cfg.experiment_store.get();

    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

std::vector<Field> kappa_trial_ensemble(GridPtr grid, std::size_t count) {
    std::vector<Field> ens;
    ens.reserve(count);
    ens.push_back(constant_field(grid, {1.0, 0.0}));
    ens.push_back(constant_field(grid, {0.1, 0.0}));
    ens.push_back(constant_field(grid, {0.0, 2.5}));
    ens.push_back(gaussian_bump(grid, 1.0, grid->box_length() / 10.0));
    ens.push_back(gaussian_bump(grid, 2.0, grid->box_length() / 20.0));
    std::vector<int> freq(grid->dim(), 0);
    freq[0] = 1;
    ens.push_back(plane_wave(grid, 1.0, freq));
    freq[0] = 3;
    ens.push_back(plane_wave(grid, 0.5, freq));
    for (std::size_t i = ens.size(); i < count; ++i) {
        NoiseStream s{0xCAFEF00DULL, i, 0, 0x7e57};
        const double amp = 0.2 + 0.05 * static_cast<double>(i % 40);
        const double dec = 1.0 + 0.1 * static_cast<double>(i % 20);
        ens.push_back(to_physical(random_smooth(grid, amp, dec, s)));
    }
    return ens;
}

double resolve_kappa(const RunConfig& cfg) {
    if (!cfg.kappa_auto || cfg.model.alpha != 1 || cfg.model.sigma == 0.0) {
        return cfg.model.kappa;
    }
    const auto ens = kappa_trial_ensemble(cfg.make_grid_ptr());
    return choose_kappa(cfg.model.sigma, cfg.dim, ens);
}

}  // namespace snls
