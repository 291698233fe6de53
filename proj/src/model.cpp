#include "siwr/model.h"
#include "siwr/errors.h"

#include <cmath>
#include <string>

namespace siwr
{

namespace
{

constexpr std::array<double Parameters::*, 12> parameter_members = {
    &Parameters::lambda, &Parameters::mu,    &Parameters::delta, &Parameters::gamma,
    &Parameters::beta1,  &Parameters::beta_max, &Parameters::k,  &Parameters::theta,
    &Parameters::sigma,  &Parameters::eps_h, &Parameters::eps_w, &Parameters::nu};

// Monod term without argument checks; smooth for w > -k, which the numeric
// Jacobian relies on when it steps slightly below w = 0.
double monod_unchecked(double w, const Parameters& p)
{
    return p.beta_max * w / (p.k + w);
}

struct Flux {
    double direct;
    double environmental;
};

Flux infection_flux(const State& x, const Parameters& p)
{
    const double n = x.population();
    if (!(n > 0.0)) {
        throw DomainError("total population N = S + I + R must be positive (got " + std::to_string(n) + ")");
    }
    return {p.beta1 * (1.0 - p.eps_h) * x.i * x.s / n, monod_unchecked(x.w, p) * (1.0 - p.eps_w) * x.s};
}

} // namespace

void Parameters::validate_rates() const
{
    for (std::size_t idx = 0; idx < parameter_members.size(); ++idx) {
        const double v = this->*parameter_members[idx];
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("parameter '" + std::string(parameter_names[idx]) +
                              "' must be finite and nonnegative (got " + std::to_string(v) + ")");
        }
    }
    if (eps_h > 1.0) {
        throw DomainError("parameter 'eps_h' must lie in [0, 1]");
    }
    if (eps_w > 1.0) {
        throw DomainError("parameter 'eps_w' must lie in [0, 1]");
    }
    if (k <= 0.0) {
        throw DomainError("parameter 'k' must be positive");
    }
}

void Parameters::validate() const
{
    validate_rates();
    if (mu <= 0.0) {
        throw DomainError("parameter 'mu' must be positive");
    }
    if (sigma <= 0.0) {
        throw DomainError("parameter 'sigma' must be positive");
    }
}

std::optional<double Parameters::*> parameter_field(std::string_view name)
{
    for (std::size_t idx = 0; idx < parameter_names.size(); ++idx) {
        if (parameter_names[idx] == name) {
            return parameter_members[idx];
        }
    }
    return std::nullopt;
}

double get_parameter(const Parameters& p, std::string_view name)
{
    auto field = parameter_field(name);
    if (!field) {
        throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
    }
    return p.**field;
}

void set_parameter(Parameters& p, std::string_view name, double value)
{
    auto field = parameter_field(name);
    if (!field) {
        throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
    }
    p.**field = value;
}

double monod_beta2(double w, const Parameters& p)
{
    if (!(w >= 0.0)) {
        throw DomainError("pathogen concentration must be nonnegative");
    }
    if (!(p.k > 0.0)) {
        throw DomainError("half-saturation constant k must be positive");
    }
    return monod_unchecked(w, p);
}

Derivative rhs(const State& x, const Parameters& p)
{
    const auto [direct, environmental] = infection_flux(x, p);
    const double infections = direct + environmental;
    return {
        p.lambda - infections - (p.mu + p.nu) * x.s,
        infections - p.removal_rate() * x.i,
        p.gamma * x.i + p.nu * x.s - p.mu * x.r,
        p.theta * x.i - p.sigma * x.w,
    };
}

double incidence(const State& x, const Parameters& p)
{
    const auto [direct, environmental] = infection_flux(x, p);
    return direct + environmental;
}

R0Breakdown r0_breakdown(const Parameters& p)
{
    R0Breakdown out{};
    out.direct_term        = p.beta1 * (1.0 - p.eps_h) * p.mu;
    out.environmental_term = (1.0 - p.eps_w) * p.lambda * p.beta_max * p.theta / (p.k * p.sigma);
    out.denominator        = (p.mu + p.nu) * p.removal_rate();
    if (!(out.denominator > 0.0) || !(p.k * p.sigma > 0.0)) {
        throw DomainError("R0 undefined: zero denominator");
    }
    out.value = (out.direct_term + out.environmental_term) / out.denominator;
    return out;
}

double r0(const Parameters& p)
{
    return r0_breakdown(p).value;
}

State dfe(const Parameters& p)
{
    if (!(p.mu > 0.0)) {
        throw DomainError("disease-free equilibrium requires mu > 0");
    }
    const double s = p.lambda / (p.mu + p.nu);
    return {s, 0.0, p.nu * s / p.mu, 0.0};
}

} // namespace siwr
