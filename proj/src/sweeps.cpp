#include "siwr/sweeps.h"
#include "siwr/equilibrium.h"
#include "siwr/errors.h"
#include "siwr/parallel.h"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace siwr
{

std::string_view to_string(Intervention which)
{
    switch (which) {
    case Intervention::EpsH:
        return "eps_h";
    case Intervention::EpsW:
        return "eps_w";
    case Intervention::Nu:
        break;
    }
    return "nu";
}

std::string_view to_string(TransmissionParameter which)
{
    return which == TransmissionParameter::Beta1 ? "beta1" : "beta_max";
}

void ScenarioSpec::validate() const
{
    auto efficacy_ok = [](double v) {
        return std::isfinite(v) && v >= 0.0 && v <= 1.0;
    };
    if (!efficacy_ok(eps_h) || !efficacy_ok(eps_w)) {
        throw DomainError("scenario '" + label + "': efficacies must lie in [0, 1]");
    }
    if (!std::isfinite(nu) || nu < 0.0) {
        throw DomainError("scenario '" + label + "': nu must be nonnegative");
    }
    if (!std::isfinite(horizon) || horizon <= 0.0) {
        throw DomainError("scenario '" + label + "': horizon must be positive");
    }
}

namespace
{

void attach_endemic(SweepRow& row, const Parameters& p)
{
    try {
        const EndemicResult res = solve_endemic(p);
        if (const auto* rep = std::get_if<EquilibriumReport>(&res)) {
            row.endemic_i = rep->state.i;
        }
    }
    catch (const NumericalError&) {
        row.status    = RowStatus::NonConvergence;
        row.endemic_i = 0.0;
    }
}

SweepRow simulate_row(const Parameters& p, const SweepSettings& settings, double horizon)
{
    SolverConfig cfg = settings.solver;
    cfg.t_end        = horizon;

    SweepRow row;
    row.r0      = r0(p);
    row.summary = summarize(integrate(p, settings.initial, cfg), settings.threshold);
    if (settings.endemic) {
        attach_endemic(row, p);
    }
    return row;
}

} // namespace

std::vector<SweepRow> intervention_sweep(const Parameters& base, Intervention which, const std::vector<double>& values,
                                         const SweepSettings& settings)
{
    base.validate();
    const std::string name(to_string(which));
    for (double v : values) {
        Parameters probe = base;
        set_parameter(probe, name, v);
        probe.validate();
    }

    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), [&](std::size_t idx) {
        Parameters p = base;
        set_parameter(p, name, values[idx]);
        rows[idx]        = simulate_row(p, settings, settings.horizon);
        rows[idx].label  = name;
        rows[idx].values = {{name, values[idx]}};
    });
    return rows;
}

std::vector<ScenarioSpec> default_scenarios(double horizon)
{
    std::vector<ScenarioSpec> out;
    out.push_back({"baseline", 0.0, 0.0, 0.0, horizon});
    for (double v : {0.3, 0.6, 0.9}) {
        out.push_back({"eps_h_only", v, 0.0, 0.0, horizon});
    }
    for (double v : {0.3, 0.6, 0.9}) {
        out.push_back({"eps_w_only", 0.0, v, 0.0, horizon});
    }
    for (double v : {0.01, 0.02, 0.03}) {
        out.push_back({"nu_only", 0.0, 0.0, v, horizon});
    }
    out.push_back({"combined_low", 0.3, 0.3, 0.01, horizon});
    out.push_back({"combined_medium", 0.6, 0.6, 0.02, horizon});
    out.push_back({"combined_high", 0.9, 0.9, 0.03, horizon});
    out.push_back({"combined_moderate", 0.5, 0.5, 0.01, horizon});
    return out;
}

std::vector<SweepRow> scenario_compare(const Parameters& base, const std::vector<ScenarioSpec>& scenarios,
                                       const SweepSettings& settings)
{
    base.validate();
    for (const auto& spec : scenarios) {
        spec.validate();
    }

    std::vector<SweepRow> rows(scenarios.size());
    parallel_for(scenarios.size(), [&](std::size_t idx) {
        const ScenarioSpec& spec = scenarios[idx];
        Parameters p             = base;
        p.eps_h                  = spec.eps_h;
        p.eps_w                  = spec.eps_w;
        p.nu                     = spec.nu;
        rows[idx]                = simulate_row(p, settings, spec.horizon);
        rows[idx].label          = spec.label;
        rows[idx].values         = {{"eps_h", spec.eps_h}, {"eps_w", spec.eps_w}, {"nu", spec.nu}};
    });
    return rows;
}

std::vector<SweepRow> bifurcation_scan(const Parameters& base, TransmissionParameter which, double lo, double hi,
                                       std::size_t steps)
{
    base.validate();
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("bifurcation scan requires lo < hi");
    }
    if (steps < 2) {
        throw std::invalid_argument("bifurcation scan requires at least 2 steps");
    }
    const std::string name(to_string(which));
    {
        Parameters probe = base;
        set_parameter(probe, name, lo);
        probe.validate();
    }

    std::vector<SweepRow> rows(steps);
    parallel_for(steps, [&](std::size_t idx) {
        const double value = lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(steps - 1);
        Parameters p       = base;
        set_parameter(p, name, value);
        SweepRow& row = rows[idx];
        row.label     = name;
        row.values    = {{name, value}};
        row.r0        = r0(p);
        attach_endemic(row, p);
    });
    return rows;
}

R0Grid r0_contour(const Parameters& base, std::size_t grid_n)
{
    if (grid_n < 2) {
        throw std::invalid_argument("contour grid needs at least 2 points per axis");
    }
    Parameters p = base;
    p.nu         = 0.0;
    p.validate();

    R0Grid grid;
    grid.n = grid_n;
    grid.values.resize(grid_n * grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
        for (std::size_t j = 0; j < grid_n; ++j) {
            p.eps_h                  = grid.axis(i);
            p.eps_w                  = grid.axis(j);
            grid.values[i * grid_n + j] = r0(p);
        }
    }
    return grid;
}

std::optional<double> r0_threshold(const Parameters& base, Intervention which, double nu_max)
{
    const std::string name(to_string(which));
    const double lo_level = 0.0;
    const double hi_level = which == Intervention::Nu ? nu_max : 1.0;

    auto r0_at = [&](double level) {
        Parameters p = base;
        set_parameter(p, name, level);
        return r0(p);
    };
    if (r0_at(lo_level) <= 1.0) {
        return lo_level;
    }
    if (r0_at(hi_level) > 1.0) {
        return std::nullopt;
    }
    double lo = lo_level, hi = hi_level;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(hi, 1e-300); ++it) {
        const double mid = 0.5 * (lo + hi);
        (r0_at(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace siwr
