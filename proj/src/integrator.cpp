#include "siwr/integrator.h"
#include "siwr/errors.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace siwr
{

namespace
{

using Vec5 = std::array<double, 5>; // S, I, R, W, C

// Dormand-Prince 5(4) tableau; the system is autonomous so the nodes c_i are not needed.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;

// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double safety    = 0.9;
constexpr double min_scale = 0.2;
constexpr double max_scale = 5.0;

Vec5 augmented_rhs(const Vec5& y, const Parameters& p)
{
    const State x{y[0], y[1], y[2], y[3]};
    const Derivative d = rhs(x, p);
    return {d.ds, d.di, d.dr, d.dw, incidence(x, p)};
}

template <class... Terms>
Vec5 combine(const Vec5& y, double h, const Terms&... terms)
{
    Vec5 out = y;
    for (std::size_t c = 0; c < out.size(); ++c) {
        double acc = 0.0;
        ((acc += terms.first * (*terms.second)[c]), ...);
        out[c] += h * acc;
    }
    return out;
}

std::pair<double, const Vec5*> w(double coef, const Vec5& k)
{
    return {coef, &k};
}

Vec5 hermite(const Vec5& y0, const Vec5& f0, const Vec5& y1, const Vec5& f1, double h, double theta)
{
    const double t2  = theta * theta;
    const double t3  = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    Vec5 out{};
    for (std::size_t c = 0; c < out.size(); ++c) {
        out[c] = h00 * y0[c] + h10 * h * f0[c] + h01 * y1[c] + h11 * h * f1[c];
    }
    return out;
}

void validate_initial_state(const State& x0)
{
    const std::array<double, 4> v = x0.to_array();
    static constexpr std::array<const char*, 4> names = {"s", "i", "r", "w"};
    for (std::size_t c = 0; c < v.size(); ++c) {
        if (!std::isfinite(v[c]) || v[c] < 0.0) {
            throw DomainError(std::string("initial state component '") + names[c] +
                              "' must be finite and nonnegative");
        }
    }
    if (!(x0.population() > 0.0)) {
        throw DomainError("initial population must be positive");
    }
}

} // namespace

void SolverConfig::validate() const
{
    auto require = [](bool ok, const char* msg) {
        if (!ok) {
            throw std::invalid_argument(msg);
        }
    };
    require(std::isfinite(rel_tol) && rel_tol > 0.0, "solver 'rel_tol' must be positive");
    require(std::isfinite(abs_tol) && abs_tol > 0.0, "solver 'abs_tol' must be positive");
    require(std::isfinite(h_min) && h_min > 0.0, "solver 'h_min' must be positive");
    require(std::isfinite(h_init) && h_init >= h_min, "solver 'h_init' must be >= h_min");
    require(std::isfinite(h_max) && h_max >= h_init, "solver 'h_max' must be >= h_init");
    require(std::isfinite(output_dt) && output_dt > 0.0, "solver 'output_dt' must be positive");
    require(std::isfinite(t_end) && t_end > 0.0, "solver 't_end' must be positive");
}

Trajectory integrate(const Parameters& p, const State& x0, const SolverConfig& cfg)
{
    p.validate_rates();
    cfg.validate();
    validate_initial_state(x0);

    const auto n_intervals = static_cast<std::size_t>(std::floor(cfg.t_end / cfg.output_dt * (1.0 + 1e-12)));

    Trajectory tr;
    tr.times.reserve(n_intervals + 1);
    tr.states.reserve(n_intervals + 1);
    tr.cum_incidence.reserve(n_intervals + 1);

    Vec5 y{x0.s, x0.i, x0.r, x0.w, 0.0};
    auto record = [&tr](double t, const Vec5& v) {
        tr.times.push_back(t);
        tr.states.push_back({v[0], v[1], v[2], v[3]});
        tr.cum_incidence.push_back(v[4]);
    };
    record(0.0, y);
    std::size_t next_out = 1;

    double t      = 0.0;
    double h      = cfg.h_init;
    Vec5 k1       = augmented_rhs(y, p);
    bool rejected = false;

    while (t < cfg.t_end) {
        const double remaining = cfg.t_end - t;
        const bool last        = h >= remaining;
        const double step      = last ? remaining : h;

        const Vec5 k2 = augmented_rhs(combine(y, step, w(a21, k1)), p);
        const Vec5 k3 = augmented_rhs(combine(y, step, w(a31, k1), w(a32, k2)), p);
        const Vec5 k4 = augmented_rhs(combine(y, step, w(a41, k1), w(a42, k2), w(a43, k3)), p);
        const Vec5 k5 = augmented_rhs(combine(y, step, w(a51, k1), w(a52, k2), w(a53, k3), w(a54, k4)), p);
        const Vec5 k6 =
            augmented_rhs(combine(y, step, w(a61, k1), w(a62, k2), w(a63, k3), w(a64, k4), w(a65, k5)), p);
        const Vec5 y_new = combine(y, step, w(b1, k1), w(b3, k3), w(b4, k4), w(b5, k5), w(b6, k6));
        const Vec5 k7    = augmented_rhs(y_new, p);

        double err = 0.0;
        for (std::size_t c = 0; c < y.size(); ++c) {
            const double e = step * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[c]), std::abs(y_new[c]));
            err                = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err)) {
            throw NonConvergence("non-finite error estimate at t=" + std::to_string(t));
        }

        double factor = err == 0.0 ? max_scale : std::clamp(safety * std::pow(err, -0.2), min_scale, max_scale);

        if (err <= 1.0) {
            const double t_new = last ? cfg.t_end : t + step;
            while (next_out <= n_intervals) {
                const double t_out = static_cast<double>(next_out) * cfg.output_dt;
                if (t_out > t_new) {
                    break;
                }
                record(t_out, hermite(y, k1, y_new, k7, step, (t_out - t) / step));
                ++next_out;
            }
            t  = t_new;
            y  = y_new;
            k1 = k7;
            ++tr.accepted_steps;
            if (rejected) {
                factor = std::min(factor, 1.0);
            }
            rejected = false;
            h        = std::min(step * factor, cfg.h_max);
        }
        else {
            ++tr.rejected_steps;
            rejected = true;
            h        = step * factor;
            if (h < cfg.h_min) {
                throw StepSizeUnderflow(t, h);
            }
        }
    }

    // Grid points that coincide with t_end up to round-off.
    while (next_out <= n_intervals) {
        record(static_cast<double>(next_out) * cfg.output_dt, y);
        ++next_out;
    }
    return tr;
}

EpidemicSummary summarize(const Trajectory& tr, double threshold)
{
    EpidemicSummary s;
    if (tr.times.empty()) {
        return s;
    }
    std::size_t peak = 0;
    for (std::size_t j = 1; j < tr.size(); ++j) {
        if (tr.states[j].i > tr.states[peak].i) {
            peak = j;
        }
    }
    s.peak_infected         = tr.states[peak].i;
    s.peak_time             = tr.times[peak];
    s.cumulative_infections = tr.cum_incidence.back();
    s.final_susceptible     = tr.states.back().s;

    for (std::size_t j = 0; j + 1 < tr.size(); ++j) {
        const double above = (tr.states[j].i > threshold ? 0.5 : 0.0) + (tr.states[j + 1].i > threshold ? 0.5 : 0.0);
        s.duration_above += above * (tr.times[j + 1] - tr.times[j]);
    }
    return s;
}

} // namespace siwr
