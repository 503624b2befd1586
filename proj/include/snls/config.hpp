#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "snls/integrator.hpp"

namespace snls {

inline constexpr const char* kVersion = "snls 0.1.0";

// Raised with every violation found, not just the first.
struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v);
};

struct RunConfig {
    std::uint64_t seed = 1;

    int dim = 1;
    int n_per_dim = 128;
    double box_length = 6.283185307179586;

    ModelParams model;        // kappa holds a placeholder when kappa_auto
    bool kappa_auto = true;

    CovarianceSpec noise;
    StepConfig step;

    nlohmann::json* experiment = nullptr;  // owned via experiment_store
    std::shared_ptr<nlohmann::json> experiment_store;

    bool strict = false;
    std::vector<std::string> warnings;  // regime / smoothness advisories

    GridPtr make_grid_ptr() const;
};

RunConfig load_config(const std::string& path, bool strict);
RunConfig parse_config(const nlohmann::json& j, bool strict);

// Fits kappa for focusing runs from a deterministic trial ensemble on
// this grid (>= 100 nonzero H^1 fields; fixed internal seed so the
// result depends only on sigma, dim and the grid). Returns the config
// kappa unchanged when it was given explicitly or the run is defocusing.
double resolve_kappa(const RunConfig& cfg);

// Deterministic trial ensemble used for kappa fitting and sandwich
// constants: constants, plane waves, bumps and random smooth fields.
std::vector<Field> kappa_trial_ensemble(GridPtr grid, std::size_t count = 128);

}  // namespace snls
