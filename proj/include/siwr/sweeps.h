#ifndef SIWR_SWEEPS_H
#define SIWR_SWEEPS_H

#include "siwr/integrator.h"
#include "siwr/model.h"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace siwr
{

enum class Intervention { EpsH, EpsW, Nu };
enum class TransmissionParameter { Beta1, BetaMax };

std::string_view to_string(Intervention which);
std::string_view to_string(TransmissionParameter which);

enum class RowStatus { Ok, NonConvergence };

struct SweepRow {
    std::string label;
    std::vector<std::pair<std::string, double>> values; ///< swept parameter(s) and their values
    double r0 = 0.0;
    std::optional<EpidemicSummary> summary; ///< absent for bifurcation rows
    double endemic_i = 0.0; ///< I* of the endemic equilibrium, 0 when none exists
    RowStatus status = RowStatus::Ok;
};

/// Intervention override applied on top of a base parameter set.
struct ScenarioSpec {
    std::string label;
    double eps_h   = 0.0;
    double eps_w   = 0.0;
    double nu      = 0.0;
    double horizon = 100.0;

    void validate() const;
    bool operator==(const ScenarioSpec&) const = default;
};

/// Settings shared by the simulation-based sweeps.
struct SweepSettings {
    State initial = baseline_initial_state();
    SolverConfig solver{}; ///< t_end is overridden by the sweep horizon
    double horizon   = 100.0;
    double threshold = 1.0; ///< I level for EpidemicSummary::duration_above
    bool endemic     = true; ///< also solve for the endemic equilibrium per row
};

inline const std::vector<double> eps_grid = {0.0, 0.3, 0.6, 0.9};
inline const std::vector<double> nu_grid  = {0.0, 0.01, 0.02, 0.03};

/// One row per value: simulate, summarize and attach R0 (and I* when requested).
std::vector<SweepRow> intervention_sweep(const Parameters& base, Intervention which, const std::vector<double>& values,
                                         const SweepSettings& settings = {});

/**
 * @brief Baseline, single interventions at 0.3/0.6/0.9 (eps) and 0.01/0.02/0.03 (nu),
 * combined low (0.3, 0.3, 0.01), medium (0.6, 0.6, 0.02), high (0.9, 0.9, 0.03),
 * and moderate combined (0.5, 0.5, 0.01).
 */
std::vector<ScenarioSpec> default_scenarios(double horizon = 100.0);

std::vector<SweepRow> scenario_compare(const Parameters& base, const std::vector<ScenarioSpec>& scenarios,
                                       const SweepSettings& settings = {});

/// Equidistant scan of beta1 or beta_max on [lo, hi]; rows carry r0 and endemic I*.
std::vector<SweepRow> bifurcation_scan(const Parameters& base, TransmissionParameter which, double lo, double hi,
                                       std::size_t steps);

/// R0 over (eps_h, eps_w) in [0, 1]^2 with nu = 0; entry (i, j) has eps_h = i/(n-1), eps_w = j/(n-1).
struct R0Grid {
    std::size_t n = 0;
    std::vector<double> values; ///< row-major, row index eps_h

    double operator()(std::size_t i, std::size_t j) const
    {
        return values[i * n + j];
    }
    double axis(std::size_t i) const
    {
        return static_cast<double>(i) / static_cast<double>(n - 1);
    }
};

R0Grid r0_contour(const Parameters& base, std::size_t grid_n);

/// Intervention level in [0, 1] (eps) or [0, nu_max] where R0 crosses 1; nullopt when it does not.
std::optional<double> r0_threshold(const Parameters& base, Intervention which, double nu_max = 1.0);

} // namespace siwr

#endif // SIWR_SWEEPS_H
