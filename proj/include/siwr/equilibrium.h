#ifndef SIWR_EQUILIBRIUM_H
#define SIWR_EQUILIBRIUM_H

#include "siwr/linalg.h"
#include "siwr/model.h"

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>

namespace siwr
{

enum class EquilibriumKind { DiseaseFree, Endemic };
enum class Stability { Stable, Unstable, Marginal };

std::string_view to_string(EquilibriumKind kind);
std::string_view to_string(Stability stability);

struct EquilibriumReport {
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
    State state;
    double residual_norm = 0.0; ///< max-norm of rhs at state
    Eigenvalues4 eigenvalues{};
    Stability stability = Stability::Marginal;
    double r0_at_params = 0.0;
};

/// Outcome of the endemic search when no positive root exists on the scanned range.
struct NoEndemic {
    double scan_lower = 0.0; ///< smallest I* examined
    double scan_upper = 0.0; ///< largest I* examined (lambda / mu)
    std::size_t scan_points = 0;
    double max_reduced_residual = 0.0; ///< sup of the reduced residual over the scan (< 0 certifies)
};

using EndemicResult = std::variant<EquilibriumReport, NoEndemic>;

/// Jacobian of the right-hand side at the disease-free equilibrium, in closed form.
Matrix4 jacobian_dfe(const Parameters& p);

/// Central-difference Jacobian with per-coordinate step 1e-6 * max(|x_j|, 1).
Matrix4 jacobian_numeric(const State& x, const Parameters& p);

/// Stable iff max real part < -1e-9, Unstable iff > 1e-9, Marginal otherwise.
Stability classify_stability(const Eigenvalues4& eigs);

/// Max-norm of rhs(x, p).
double residual_norm(const State& x, const Parameters& p);

/// Report for the disease-free equilibrium, eigenvalues from jacobian_dfe.
EquilibriumReport analyze_dfe(const Parameters& p);

/// DFE with a fraction of its susceptibles moved to I; for baseline parameters this is (9990, 10, 0, 0).
State seeded_initial_state(const Parameters& p, double infected_fraction = 1e-3);

/**
 * @brief Locate the endemic equilibrium.
 *
 * Works on the reduced system in (S*, I*) obtained by substituting
 * W* = (theta/sigma) I* and R* = (gamma I* + nu S*) / mu. Damped Newton is tried
 * first from @p guess, or from the simulated state at t = 1000 days when no guess
 * is given. When Newton fails or lands on the disease-free root, a log-spaced
 * scan of the reduced residual over I* in (0, lambda/mu] brackets the root,
 * which is refined by bisection and polished by Newton.
 *
 * Returns NoEndemic when the scan shows no sign change. Throws NonConvergence
 * when a bracket exists but no root satisfying the residual bound is found.
 */
EndemicResult solve_endemic(const Parameters& p, std::optional<State> guess = std::nullopt);

/**
 * @brief Reduced residual g(I) = (dI/dt) / I along the curve where dS/dt = 0.
 *
 * g(0+) = (gamma + mu + delta)(R0 - 1); endemic equilibria are the positive zeros.
 * Exposed for certificates and tests.
 */
double reduced_residual(double infected, const Parameters& p);

/// S solving dS/dt = 0 with W = (theta/sigma) I and R = (gamma I + nu S)/mu substituted.
double susceptible_on_nullcline(double infected, const Parameters& p);

} // namespace siwr

#endif // SIWR_EQUILIBRIUM_H
