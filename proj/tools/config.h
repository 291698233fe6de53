#ifndef SIWR_TOOLS_CONFIG_H
#define SIWR_TOOLS_CONFIG_H

#include "siwr/integrator.h"
#include "siwr/model.h"
#include "siwr/sensitivity.h"
#include "siwr/sweeps.h"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace siwr::cli
{

/// Malformed or inadmissible run configuration; the message starts with the field path.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SimulateConfig {
    double threshold = 1.0;
};

struct SweepConfig {
    std::vector<std::string> interventions = {"eps_h", "eps_w", "nu"};
    std::vector<double> eps_values         = eps_grid;
    std::vector<double> nu_values          = nu_grid;
    double horizon                         = 100.0;
    double threshold                       = 1.0;
};

struct ScenariosConfig {
    std::vector<ScenarioSpec> list = default_scenarios();
    double threshold               = 1.0;
};

struct BifurcationConfig {
    std::string parameter = "beta1";
    double lo             = 0.0;
    double hi             = 0.5;
    std::size_t steps     = 50;
};

struct ContourConfig {
    std::size_t grid_n = 101;
};

struct SensitivityConfig {
    std::size_t n  = 1000;
    double horizon = 100.0;
    std::optional<ParameterRanges> ranges; ///< derived from the parameters when absent
};

struct RunConfig {
    Parameters parameters;
    State initial_state = baseline_initial_state();
    SolverConfig solver;
    SimulateConfig simulate;
    SweepConfig sweep;
    ScenariosConfig scenarios;
    BifurcationConfig bifurcation;
    ContourConfig contour;
    SensitivityConfig sensitivity;
    std::uint64_t seed     = 20240501;
    std::string output_dir = "out";

    /// Sensitivity ranges in effect: the explicit list or the defaults around the parameters.
    ParameterRanges resolved_ranges() const;
};

/// Reads a configuration object. Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);

/// Full configuration document. With @p resolve the default sensitivity ranges are written out.
nlohmann::json to_json(const RunConfig& cfg, bool resolve = false);

/// Applies one `path=value` assignment, e.g. `parameters.gamma=0.3`. The value is read as JSON
/// when it parses, otherwise as a string. The path must name an existing key.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Checks every block against the invariants of the library types.
void validate(const RunConfig& cfg);

} // namespace siwr::cli

#endif // SIWR_TOOLS_CONFIG_H
