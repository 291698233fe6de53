#ifndef SIWR_SENSITIVITY_H
#define SIWR_SENSITIVITY_H

#include "siwr/model.h"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace siwr
{

/// Name of the pseudo-random generator; recorded in every sensitivity output.
inline constexpr const char* rng_name = "std::mt19937_64";

struct ParameterRange {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
    std::string distribution = "uniform";

    bool operator==(const ParameterRange&) const = default;
};

using ParameterRanges = std::vector<ParameterRange>;

/// Throws InvalidRanges unless each range is a known, unique parameter with
/// lower < upper and both ends admissible when substituted into @p base.
void validate_ranges(const ParameterRanges& ranges, const Parameters& base);

/// Rate-like parameters on [0.5x, 1.5x] of base, efficacies on [0, 0.9], nu on [0, 0.03].
ParameterRanges default_ranges(const Parameters& base);

/// Latin hypercube design, row-major n_samples x n_params.
struct SampleMatrix {
    std::size_t n_samples = 0;
    std::vector<std::string> names;
    std::vector<double> values;
    std::uint64_t seed = 0;

    std::size_t n_params() const
    {
        return names.size();
    }
    double operator()(std::size_t row, std::size_t col) const
    {
        return values[row * names.size() + col];
    }
    double& operator()(std::size_t row, std::size_t col)
    {
        return values[row * names.size() + col];
    }
    std::vector<double> column(std::size_t col) const;
};

/**
 * @brief Latin hypercube sample: each column holds exactly one point in each of
 * the n equal-probability strata, placed uniformly inside its stratum, with an
 * independent random permutation per column.
 */
SampleMatrix lhs_sample(const ParameterRanges& ranges, std::size_t n, std::uint64_t seed);

/// Ranks starting at 1; ties receive the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct PrccResult {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::size_t n_samples = 0; ///< samples entering the coefficients
    std::size_t n_failed  = 0; ///< samples dropped after solver failures
    std::string outcome;
    std::uint64_t seed = 0;
    std::string generator = rng_name;

    double coefficient(std::string_view name) const;
};

/**
 * @brief Partial rank correlation of each column with the outcome.
 *
 * Ranks every column and the outcome, regresses the rank of column j and the
 * rank of the outcome on the remaining rank columns plus an intercept, and
 * correlates the two residual vectors. Throws DegenerateColumn on a constant
 * column or outcome and SingularRegression on a rank-deficient design.
 */
PrccResult prcc(const SampleMatrix& samples, std::span<const double> outcomes, std::string outcome_name = "outcome");

/**
 * @brief LHS over @p ranges, integrate each sample for @p horizon days from the
 * baseline initial state, and compute PRCC against cumulative infections.
 *
 * Samples whose integration fails are dropped; more than 1% failures aborts
 * with NumericalError.
 */
PrccResult run_sensitivity(const Parameters& base, const ParameterRanges& ranges, std::size_t n, std::uint64_t seed,
                           double horizon = 100.0);

} // namespace siwr

#endif // SIWR_SENSITIVITY_H
