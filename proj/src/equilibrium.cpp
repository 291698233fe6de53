#include "siwr/equilibrium.h"
#include "siwr/errors.h"
#include "siwr/integrator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace siwr
{

std::string_view to_string(EquilibriumKind kind)
{
    return kind == EquilibriumKind::DiseaseFree ? "DiseaseFree" : "Endemic";
}

std::string_view to_string(Stability stability)
{
    switch (stability) {
    case Stability::Stable:
        return "Stable";
    case Stability::Unstable:
        return "Unstable";
    case Stability::Marginal:
        break;
    }
    return "Marginal";
}

Matrix4 jacobian_dfe(const Parameters& p)
{
    const double mn = p.mu + p.nu;
    if (!(mn > 0.0)) {
        throw DomainError("DFE Jacobian requires mu + nu > 0");
    }
    const double direct = p.beta1 * (1.0 - p.eps_h) * p.mu / mn;
    const double env    = (1.0 - p.eps_w) * (p.lambda / mn) * (p.beta_max / p.k);

    Matrix4 j;
    j(0, 0) = -mn;
    j(0, 1) = -direct;
    j(0, 3) = -env;
    j(1, 1) = direct - p.removal_rate();
    j(1, 3) = env;
    j(2, 0) = p.nu;
    j(2, 1) = p.gamma;
    j(2, 2) = -p.mu;
    j(3, 1) = p.theta;
    j(3, 3) = -p.sigma;
    return j;
}

Matrix4 jacobian_numeric(const State& x, const Parameters& p)
{
    const std::array<double, 4> base = x.to_array();
    Matrix4 j;
    for (std::size_t col = 0; col < 4; ++col) {
        const double h             = 1e-6 * std::max(std::abs(base[col]), 1.0);
        std::array<double, 4> plus = base, minus = base;
        plus[col] += h;
        minus[col] -= h;
        const auto fp = rhs(State::from_array(plus), p).to_array();
        const auto fm = rhs(State::from_array(minus), p).to_array();
        for (std::size_t row = 0; row < 4; ++row) {
            j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    return j;
}

Stability classify_stability(const Eigenvalues4& eigs)
{
    double max_real = -INFINITY;
    for (const auto& e : eigs) {
        max_real = std::max(max_real, e.real());
    }
    if (max_real < -1e-9) {
        return Stability::Stable;
    }
    if (max_real > 1e-9) {
        return Stability::Unstable;
    }
    return Stability::Marginal;
}

double residual_norm(const State& x, const Parameters& p)
{
    double norm = 0.0;
    for (double v : rhs(x, p).to_array()) {
        norm = std::max(norm, std::abs(v));
    }
    return norm;
}

EquilibriumReport analyze_dfe(const Parameters& p)
{
    p.validate();
    EquilibriumReport rep;
    rep.kind          = EquilibriumKind::DiseaseFree;
    rep.state         = dfe(p);
    rep.residual_norm = residual_norm(rep.state, p);
    rep.eigenvalues   = eigenvalues_4x4(jacobian_dfe(p));
    rep.stability     = classify_stability(rep.eigenvalues);
    rep.r0_at_params  = r0(p);
    return rep;
}

State seeded_initial_state(const Parameters& p, double infected_fraction)
{
    const State d      = dfe(p);
    const double moved = infected_fraction * d.s;
    return {d.s - moved, moved, d.r, 0.0};
}

namespace
{

State full_state(double s, double i, const Parameters& p)
{
    return {s, i, (p.gamma * i + p.nu * s) / p.mu, p.theta / p.sigma * i};
}

double population_on_nullcline(double s, double i, const Parameters& p)
{
    return s * (1.0 + p.nu / p.mu) + i * (1.0 + p.gamma / p.mu);
}

double environmental_force(double i, const Parameters& p)
{
    const double w = p.theta / p.sigma * i;
    return (1.0 - p.eps_w) * p.beta_max * w / (p.k + w);
}

// dS/dt along the nullcline parametrization, strictly decreasing in s.
double susceptible_balance(double s, double i, const Parameters& p)
{
    const double n = population_on_nullcline(s, i, p);
    return p.lambda - (p.mu + p.nu) * s - p.beta1 * (1.0 - p.eps_h) * i / n * s - environmental_force(i, p) * s;
}

struct NewtonOutcome {
    bool converged = false;
    double s       = 0.0;
    double i       = 0.0;
};

std::array<double, 2> reduced_system(double s, double i, const Parameters& p)
{
    const Derivative d = rhs(full_state(s, i, p), p);
    return {d.di, d.ds};
}

double max_abs(const std::array<double, 2>& v)
{
    return std::max(std::abs(v[0]), std::abs(v[1]));
}

NewtonOutcome damped_newton(double s, double i, const Parameters& p)
{
    const double scale   = std::max(p.lambda, 1.0);
    const double tol     = 1e-12 * scale;
    constexpr int max_it = 100;

    if (!(s > 0.0) || !(i > 0.0)) {
        return {};
    }
    auto f      = reduced_system(s, i, p);
    double norm = max_abs(f);

    for (int it = 0; it < max_it; ++it) {
        if (norm <= tol) {
            return {true, s, i};
        }

        // Finite-difference Jacobian of (F1, F2) with respect to (S, I).
        const double hs = 1e-7 * std::max(std::abs(s), 1.0);
        const double hi = 1e-7 * i;
        const auto fs_p = reduced_system(s + hs, i, p);
        const auto fs_m = reduced_system(s - hs, i, p);
        const auto fi_p = reduced_system(s, i + hi, p);
        const auto fi_m = reduced_system(s, i - hi, p);

        const double a11 = (fs_p[0] - fs_m[0]) / (2.0 * hs);
        const double a21 = (fs_p[1] - fs_m[1]) / (2.0 * hs);
        const double a12 = (fi_p[0] - fi_m[0]) / (2.0 * hi);
        const double a22 = (fi_p[1] - fi_m[1]) / (2.0 * hi);
        const double det = a11 * a22 - a12 * a21;
        if (!std::isfinite(det) || det == 0.0) {
            return {};
        }
        const double ds = -(a22 * f[0] - a12 * f[1]) / det;
        const double di = -(-a21 * f[0] + a11 * f[1]) / det;

        double lambda_step = 1.0;
        bool improved      = false;
        for (int halving = 0; halving <= 30; ++halving) {
            const double s_new = s + lambda_step * ds;
            const double i_new = i + lambda_step * di;
            if (s_new > 0.0 && i_new > 0.0) {
                const auto f_new    = reduced_system(s_new, i_new, p);
                const double n_new  = max_abs(f_new);
                if (std::isfinite(n_new) && n_new < norm) {
                    s        = s_new;
                    i        = i_new;
                    f        = f_new;
                    norm     = n_new;
                    improved = true;
                    break;
                }
            }
            lambda_step *= 0.5;
        }
        if (!improved) {
            // Stalled at round-off level still counts as converged.
            return {norm <= 1e3 * tol, s, i};
        }
    }
    return {norm <= tol, s, i};
}

EquilibriumReport endemic_report(double s, double i, const Parameters& p)
{
    EquilibriumReport rep;
    rep.kind          = EquilibriumKind::Endemic;
    rep.state         = full_state(s, i, p);
    rep.residual_norm = residual_norm(rep.state, p);
    rep.eigenvalues   = eigenvalues_4x4(jacobian_numeric(rep.state, p));
    rep.stability     = classify_stability(rep.eigenvalues);
    rep.r0_at_params  = r0(p);
    return rep;
}

// Roots with I* at or below floor are treated as the disease-free equilibrium.
bool acceptable_endemic(const NewtonOutcome& out, const Parameters& p, double floor)
{
    if (!out.converged) {
        return false;
    }
    return out.i > floor && out.s > 0.0 &&
           residual_norm(full_state(out.s, out.i, p), p) <= 1e-10 * std::max(p.lambda, 1.0);
}

} // namespace

double susceptible_on_nullcline(double infected, const Parameters& p)
{
    const double upper = p.lambda / (p.mu + p.nu);
    double s           = upper;
    for (int it = 0; it < 1000; ++it) {
        const double n     = population_on_nullcline(s, infected, p);
        const double denom = (p.mu + p.nu) + p.beta1 * (1.0 - p.eps_h) * infected / n + environmental_force(infected, p);
        const double next  = p.lambda / denom;
        if (std::abs(next - s) <= 1e-15 * std::max(next, 1e-300)) {
            return next;
        }
        s = next;
    }
    // Slow contraction: fall back to bisection on the monotone balance.
    double lo = 0.0, hi = upper;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (susceptible_balance(mid, infected, p) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double reduced_residual(double infected, const Parameters& p)
{
    const double s = susceptible_on_nullcline(infected, p);
    const double n = population_on_nullcline(s, infected, p);
    const double k_eff = p.k + p.theta / p.sigma * infected;
    return p.beta1 * (1.0 - p.eps_h) * s / n + (1.0 - p.eps_w) * p.beta_max * (p.theta / p.sigma) * s / k_eff -
           p.removal_rate();
}

EndemicResult solve_endemic(const Parameters& p, std::optional<State> guess)
{
    p.validate();

    if (!guess) {
        SolverConfig cfg;
        cfg.t_end     = 1000.0;
        cfg.output_dt = 1000.0;
        try {
            guess = integrate(p, seeded_initial_state(p), cfg).states.back();
        }
        catch (const NumericalError&) {
            guess.reset();
        }
    }
    if (guess) {
        const NewtonOutcome out = damped_newton(guess->s, guess->i, p);
        if (acceptable_endemic(out, p, 1e-9 * p.lambda / p.mu)) {
            return endemic_report(out.s, out.i, p);
        }
    }

    // Log-spaced scan of the reduced residual on (0, lambda/mu].
    constexpr std::size_t points = 600;
    const double upper           = p.lambda / p.mu;
    const double lower           = upper * 1e-12;
    std::vector<double> grid(points), g(points);
    for (std::size_t j = 0; j < points; ++j) {
        grid[j] = lower * std::pow(upper / lower, static_cast<double>(j) / (points - 1));
        g[j]    = reduced_residual(grid[j], p);
    }

    std::optional<std::size_t> bracket;
    for (std::size_t j = 0; j + 1 < points; ++j) {
        if ((g[j] > 0.0) != (g[j + 1] > 0.0)) {
            bracket = j;
            break;
        }
    }
    if (!bracket) {
        if (g.front() <= 0.0) {
            return NoEndemic{lower, upper, points, *std::max_element(g.begin(), g.end())};
        }
        throw NonConvergence("reduced residual stays positive on the whole scan range");
    }

    double lo = grid[*bracket], hi = grid[*bracket + 1];
    const bool lo_positive = g[*bracket] > 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((reduced_residual(mid, p) > 0.0) == lo_positive ? lo : hi) = mid;
    }
    const double i_root = 0.5 * (lo + hi);
    const double s_root = susceptible_on_nullcline(i_root, p);

    const NewtonOutcome polished = damped_newton(s_root, i_root, p);
    const double floor = 0.5 * grid[*bracket];
    if (acceptable_endemic(polished, p, floor) && polished.i < 2.0 * grid[*bracket + 1]) {
        return endemic_report(polished.s, polished.i, p);
    }
    if (acceptable_endemic({true, s_root, i_root}, p, floor)) {
        return endemic_report(s_root, i_root, p);
    }
    throw NonConvergence("endemic root bracketed but Newton polishing failed to reach the residual bound");
}

} // namespace siwr
