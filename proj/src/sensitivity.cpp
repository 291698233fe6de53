#include "siwr/sensitivity.h"
#include "siwr/errors.h"
#include "siwr/integrator.h"
#include "siwr/parallel.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>

namespace siwr
{

namespace
{

// Explicit conversions keep the design bit-identical across standard libraries.
double uniform01(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::size_t bounded(std::mt19937_64& gen, std::size_t n)
{
    const std::uint64_t range = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw;
    do {
        draw = gen();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % range);
}

Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double denom       = ca.norm() * cb.norm();
    if (denom == 0.0) {
        return 0.0;
    }
    return std::clamp(ca.dot(cb) / denom, -1.0, 1.0);
}

} // namespace

void validate_ranges(const ParameterRanges& ranges, const Parameters& base)
{
    if (ranges.empty()) {
        throw InvalidRanges("no parameter ranges given");
    }
    std::set<std::string> seen;
    for (const auto& r : ranges) {
        if (!parameter_field(r.name)) {
            throw InvalidRanges("unknown parameter '" + r.name + "' in ranges");
        }
        if (!seen.insert(r.name).second) {
            throw InvalidRanges("parameter '" + r.name + "' listed twice in ranges");
        }
        if (r.distribution != "uniform") {
            throw InvalidRanges("range for '" + r.name + "': only uniform distributions are supported");
        }
        if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !(r.lower < r.upper)) {
            throw InvalidRanges("range for '" + r.name + "' must satisfy lower < upper");
        }
        for (double end : {r.lower, r.upper}) {
            Parameters probe = base;
            set_parameter(probe, r.name, end);
            try {
                probe.validate();
            }
            catch (const DomainError& e) {
                throw InvalidRanges("range for '" + r.name + "' leaves the admissible set: " + e.what());
            }
        }
    }
}

ParameterRanges default_ranges(const Parameters& base)
{
    ParameterRanges out;
    for (std::string_view name : parameter_names) {
        if (name == "eps_h" || name == "eps_w") {
            out.push_back({std::string(name), 0.0, 0.9});
        }
        else if (name == "nu") {
            out.push_back({std::string(name), 0.0, 0.03});
        }
        else {
            const double v = get_parameter(base, name);
            if (v > 0.0) {
                out.push_back({std::string(name), 0.5 * v, 1.5 * v});
            }
        }
    }
    return out;
}

std::vector<double> SampleMatrix::column(std::size_t col) const
{
    std::vector<double> out(n_samples);
    for (std::size_t row = 0; row < n_samples; ++row) {
        out[row] = (*this)(row, col);
    }
    return out;
}

SampleMatrix lhs_sample(const ParameterRanges& ranges, std::size_t n, std::uint64_t seed)
{
    if (n < 2) {
        throw InvalidRanges("Latin hypercube needs at least 2 samples");
    }
    for (const auto& r : ranges) {
        if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !(r.lower < r.upper)) {
            throw InvalidRanges("range for '" + r.name + "' must satisfy lower < upper");
        }
    }

    SampleMatrix m;
    m.n_samples = n;
    m.seed      = seed;
    for (const auto& r : ranges) {
        m.names.push_back(r.name);
    }
    m.values.resize(n * ranges.size());

    std::mt19937_64 gen(seed);
    std::vector<std::size_t> strata(n);
    for (std::size_t col = 0; col < ranges.size(); ++col) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(strata[i], strata[bounded(gen, i + 1)]);
        }
        const double width = ranges[col].upper - ranges[col].lower;
        for (std::size_t row = 0; row < n; ++row) {
            const double u = (static_cast<double>(strata[row]) + uniform01(gen)) / static_cast<double>(n);
            m(row, col)    = ranges[col].lower + u * width;
        }
    }
    return m;
}

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

double PrccResult::coefficient(std::string_view name) const
{
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j] == name) {
            return coefficients[j];
        }
    }
    throw std::invalid_argument("no PRCC for parameter '" + std::string(name) + "'");
}

PrccResult prcc(const SampleMatrix& samples, std::span<const double> outcomes, std::string outcome_name)
{
    const std::size_t n = samples.n_samples;
    const std::size_t k = samples.n_params();
    if (outcomes.size() != n) {
        throw std::invalid_argument("outcome count does not match sample count");
    }
    if (k == 0 || n <= k + 2) {
        throw std::invalid_argument("PRCC needs more than n_params + 2 samples");
    }

    Eigen::MatrixXd ranks(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t col = 0; col < k; ++col) {
        const auto r = average_ranks(samples.column(col));
        if (std::adjacent_find(r.begin(), r.end(), std::not_equal_to<>()) == r.end()) {
            throw DegenerateColumn("rank column '" + samples.names[col] + "' is constant");
        }
        ranks.col(static_cast<Eigen::Index>(col)) = to_eigen(r);
    }
    const auto y_ranks = average_ranks(outcomes);
    if (std::adjacent_find(y_ranks.begin(), y_ranks.end(), std::not_equal_to<>()) == y_ranks.end()) {
        throw DegenerateColumn("outcome '" + outcome_name + "' is constant");
    }
    const Eigen::VectorXd y = to_eigen(y_ranks);

    {
        Eigen::MatrixXd full(ranks.rows(), ranks.cols() + 1);
        full << Eigen::VectorXd::Ones(ranks.rows()), ranks;
        if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(full).rank() < full.cols()) {
            throw SingularRegression("rank design matrix is rank-deficient");
        }
    }

    PrccResult out;
    out.names     = samples.names;
    out.n_samples = n;
    out.outcome   = std::move(outcome_name);
    out.seed      = samples.seed;
    out.coefficients.resize(k);

    const auto kk = static_cast<Eigen::Index>(k);
    for (Eigen::Index j = 0; j < kk; ++j) {
        Eigen::MatrixXd design(ranks.rows(), kk);
        design.col(0).setOnes();
        for (Eigen::Index c = 0, d = 1; c < kk; ++c) {
            if (c != j) {
                design.col(d++) = ranks.col(c);
            }
        }
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        const Eigen::VectorXd x  = ranks.col(j);
        const Eigen::VectorXd rx = x - design * qr.solve(x);
        const Eigen::VectorXd ry = y - design * qr.solve(y);
        out.coefficients[static_cast<std::size_t>(j)] = pearson(rx, ry);
    }
    return out;
}

PrccResult run_sensitivity(const Parameters& base, const ParameterRanges& ranges, std::size_t n, std::uint64_t seed,
                           double horizon)
{
    base.validate();
    validate_ranges(ranges, base);
    const SampleMatrix design = lhs_sample(ranges, n, seed);

    SolverConfig cfg;
    cfg.t_end     = horizon;
    cfg.output_dt = horizon;
    cfg.validate();

    std::vector<std::optional<double>> outcome(n);
    parallel_for(n, [&](std::size_t row) {
        Parameters p = base;
        for (std::size_t col = 0; col < design.n_params(); ++col) {
            set_parameter(p, design.names[col], design(row, col));
        }
        try {
            outcome[row] = integrate(p, baseline_initial_state(), cfg).cum_incidence.back();
        }
        catch (const NumericalError&) {
        }
        catch (const DomainError&) {
        }
    });

    SampleMatrix kept;
    kept.names = design.names;
    kept.seed  = seed;
    std::vector<double> y;
    for (std::size_t row = 0; row < n; ++row) {
        if (!outcome[row]) {
            continue;
        }
        for (std::size_t col = 0; col < design.n_params(); ++col) {
            kept.values.push_back(design(row, col));
        }
        y.push_back(*outcome[row]);
    }
    kept.n_samples        = y.size();
    const std::size_t bad = n - y.size();
    if (bad * 100 > n) {
        throw NumericalError("sensitivity analysis aborted: " + std::to_string(bad) + " of " + std::to_string(n) +
                             " sample integrations failed");
    }

    PrccResult out = prcc(kept, y, "cumulative_infections");
    out.n_failed   = bad;
    return out;
}

} // namespace siwr
