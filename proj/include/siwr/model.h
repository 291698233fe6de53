#ifndef SIWR_MODEL_H
#define SIWR_MODEL_H

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace siwr
{

/**
 * @brief The twelve constants of the cholera SIWR model with sanitation and vaccination.
 *
 * Rates are per day. W is measured in arbitrary concentration units; only the
 * combination theta / (k * sigma) enters the reproduction number.
 */
struct Parameters {
    double lambda   = 1.0; ///< recruitment of susceptibles (persons/day)
    double mu       = 1e-4; ///< natural mortality
    double delta    = 0.005; ///< disease-induced mortality
    double gamma    = 0.2; ///< recovery
    double beta1    = 0.25; ///< direct human-to-human transmission
    double beta_max = 0.5; ///< maximal environment-to-human transmission
    double k        = 1e4; ///< half-saturation pathogen concentration
    double theta    = 0.1; ///< shedding per infected
    double sigma    = 0.33; ///< environmental pathogen decay
    double eps_h    = 0.0; ///< human sanitation efficacy in [0, 1]
    double eps_w    = 0.0; ///< environmental sanitation efficacy in [0, 1]
    double nu       = 0.0; ///< vaccination rate

    /// Throws DomainError naming the first offending field.
    void validate() const;

    /// The subset of validate() the right-hand side needs: finite nonnegative
    /// fields, efficacies in [0, 1] and k > 0. Allows mu = 0 or sigma = 0.
    void validate_rates() const;

    /// Combined exit rate of the infected class, gamma + mu + delta.
    double removal_rate() const
    {
        return gamma + mu + delta;
    }

    bool operator==(const Parameters&) const = default;
};

/// Names of the Parameters fields in declaration order.
inline constexpr std::array<std::string_view, 12> parameter_names = {
    "lambda", "mu", "delta", "gamma", "beta1", "beta_max", "k", "theta", "sigma", "eps_h", "eps_w", "nu"};

/// Pointer-to-member lookup by field name; nullopt for unknown names.
std::optional<double Parameters::*> parameter_field(std::string_view name);

double get_parameter(const Parameters& p, std::string_view name);
void set_parameter(Parameters& p, std::string_view name, double value);

/// Baseline parameter set used wherever "baseline" is referenced (no interventions).
inline Parameters baseline_parameters()
{
    return Parameters{};
}

struct State {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;
    double w = 0.0;

    double population() const
    {
        return s + i + r;
    }

    std::array<double, 4> to_array() const
    {
        return {s, i, r, w};
    }
    static State from_array(std::span<const double, 4> a)
    {
        return {a[0], a[1], a[2], a[3]};
    }

    bool operator==(const State&) const = default;
};

/// Initial state of the baseline experiments: 10 infected in 10^4 susceptibles.
inline State baseline_initial_state()
{
    return {9990.0, 10.0, 0.0, 0.0};
}

struct Derivative {
    double ds = 0.0;
    double di = 0.0;
    double dr = 0.0;
    double dw = 0.0;

    std::array<double, 4> to_array() const
    {
        return {ds, di, dr, dw};
    }
};

/// Monod dose-response beta_max * w / (k + w). Throws DomainError on w < 0 or k <= 0.
double monod_beta2(double w, const Parameters& p);

/// Right-hand side of the four-compartment system. Throws DomainError if N <= 0.
Derivative rhs(const State& x, const Parameters& p);

/// New-infection flux, the two positive terms of dI/dt.
double incidence(const State& x, const Parameters& p);

/// The closed form of R0 split into its pieces: r0 = (direct + environmental) / denominator.
struct R0Breakdown {
    double direct_term; ///< beta1 (1 - eps_h) mu
    double environmental_term; ///< (1 - eps_w) lambda beta_max theta / (k sigma)
    double denominator; ///< (mu + nu) (gamma + mu + delta)
    double value;
};

R0Breakdown r0_breakdown(const Parameters& p);
double r0(const Parameters& p);

/// Disease-free equilibrium (lambda/(mu+nu), 0, nu lambda/(mu (mu+nu)), 0).
State dfe(const Parameters& p);

} // namespace siwr

#endif // SIWR_MODEL_H
