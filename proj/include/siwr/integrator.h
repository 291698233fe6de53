#ifndef SIWR_INTEGRATOR_H
#define SIWR_INTEGRATOR_H

#include "siwr/model.h"

#include <cstddef>
#include <vector>

namespace siwr
{

struct SolverConfig {
    double rel_tol   = 1e-6;
    double abs_tol   = 1e-8;
    double h_init    = 1e-2;
    double h_min     = 1e-10;
    double h_max     = 0.5;
    double output_dt = 1.0;
    double t_end     = 100.0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

/// Dense uniform-grid solution; cum_incidence[j] is C(times[j]) with C(0) = 0.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<double> cum_incidence;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    std::size_t size() const
    {
        return times.size();
    }
};

struct EpidemicSummary {
    double peak_infected         = 0.0;
    double peak_time             = 0.0;
    double cumulative_infections = 0.0;
    double final_susceptible     = 0.0;
    double duration_above        = 0.0; ///< days with I(t) > threshold
};

/**
 * @brief Integrate the model augmented with the cumulative incidence C, dC/dt = incidence.
 *
 * Dormand-Prince 5(4) pair with FSAL, local error controlled per component to
 * abs_tol + rel_tol * |y|, reporting on the grid k * output_dt by cubic Hermite
 * interpolation over accepted steps. Throws StepSizeUnderflow when the
 * controller asks for a step below h_min and DomainError for invalid inputs.
 */
Trajectory integrate(const Parameters& p, const State& x0, const SolverConfig& cfg);

/// Peak, cumulative and duration metrics read off a trajectory; threshold in persons.
EpidemicSummary summarize(const Trajectory& tr, double threshold = 1.0);

} // namespace siwr

#endif // SIWR_INTEGRATOR_H
