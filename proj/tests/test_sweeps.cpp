#include "siwr/errors.h"
#include "siwr/sweeps.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using siwr::Intervention;
using siwr::Parameters;
using siwr::SweepRow;

namespace
{

double critical_beta1(const Parameters& base)
{
    Parameters q = base;
    q.beta1      = 0.0;
    const auto b = siwr::r0_breakdown(q);
    return (b.denominator - b.environmental_term) / ((1 - q.eps_h) * q.mu);
}

/// Environmental sanitation at 0.5 so a beta1 ramp covers R0 from 0.5 to 2.
Parameters bifurcation_base()
{
    Parameters p;
    p.eps_w = 0.5;
    return p;
}

} // namespace

TEST(InterventionSweep, MonotoneOnEveryGrid)
{
    const Parameters p = siwr::baseline_parameters();
    for (auto which : {Intervention::EpsH, Intervention::EpsW, Intervention::Nu}) {
        const auto& grid = which == Intervention::Nu ? siwr::nu_grid : siwr::eps_grid;
        const auto rows  = siwr::intervention_sweep(p, which, grid);
        ASSERT_EQ(rows.size(), grid.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            EXPECT_EQ(rows[j].label, siwr::to_string(which));
            EXPECT_EQ(rows[j].values.front().second, grid[j]);
            ASSERT_TRUE(rows[j].summary.has_value());
            if (j > 0) {
                EXPECT_LE(rows[j].summary->peak_infected, rows[j - 1].summary->peak_infected)
                    << siwr::to_string(which) << " " << grid[j];
                EXPECT_LE(rows[j].summary->cumulative_infections, rows[j - 1].summary->cumulative_infections)
                    << siwr::to_string(which) << " " << grid[j];
                EXPECT_LT(rows[j].r0, rows[j - 1].r0);
            }
        }
    }
}

TEST(InterventionSweep, VaccinationStrictlyReducesCumulative)
{
    const auto rows = siwr::intervention_sweep(siwr::baseline_parameters(), Intervention::Nu, siwr::nu_grid);
    for (std::size_t j = 1; j < rows.size(); ++j) {
        EXPECT_LT(rows[j].summary->cumulative_infections, rows[j - 1].summary->cumulative_infections);
    }
}

TEST(InterventionSweep, ZeroOverrideEqualsPlainRun)
{
    const Parameters p          = siwr::baseline_parameters();
    const auto rows             = siwr::intervention_sweep(p, Intervention::EpsW, {0.0});
    const siwr::SweepSettings s = {};
    siwr::SolverConfig cfg      = s.solver;
    cfg.t_end                   = s.horizon;
    const auto plain            = siwr::summarize(siwr::integrate(p, s.initial, cfg), s.threshold);
    EXPECT_EQ(rows[0].summary->peak_infected, plain.peak_infected);
    EXPECT_EQ(rows[0].summary->peak_time, plain.peak_time);
    EXPECT_EQ(rows[0].summary->cumulative_infections, plain.cumulative_infections);
    EXPECT_EQ(rows[0].summary->duration_above, plain.duration_above);
    EXPECT_EQ(rows[0].r0, siwr::r0(p));
}

TEST(InterventionSweep, AttachesEndemicLevel)
{
    const auto rows = siwr::intervention_sweep(siwr::baseline_parameters(), Intervention::EpsH, siwr::eps_grid);
    EXPECT_NEAR(rows[0].endemic_i, 2.40375976148, 1e-8);
    for (const SweepRow& row : rows) {
        EXPECT_EQ(row.status, siwr::RowStatus::Ok);
        EXPECT_GE(row.endemic_i, 0.0);
        EXPECT_EQ(row.endemic_i > 0.0, row.r0 > 1.0);
    }
}

TEST(InterventionSweep, RejectsOutOfRangeValues)
{
    EXPECT_THROW(siwr::intervention_sweep(siwr::baseline_parameters(), Intervention::EpsH, {0.5, 1.5}),
                 siwr::DomainError);
    EXPECT_THROW(siwr::intervention_sweep(siwr::baseline_parameters(), Intervention::Nu, {-0.01}), siwr::DomainError);
}

TEST(Scenarios, DefaultSet)
{
    const auto specs = siwr::default_scenarios();
    ASSERT_EQ(specs.size(), 14u);
    EXPECT_EQ(specs.front().label, "baseline");
    const siwr::ScenarioSpec medium = {"combined_medium", 0.6, 0.6, 0.02, 100.0};
    const siwr::ScenarioSpec moderate = {"combined_moderate", 0.5, 0.5, 0.01, 100.0};
    EXPECT_NE(std::find(specs.begin(), specs.end(), medium), specs.end());
    EXPECT_NE(std::find(specs.begin(), specs.end(), moderate), specs.end());
}

TEST(Scenarios, CombinedDominatesSingles)
{
    const auto rows = siwr::scenario_compare(siwr::baseline_parameters(), siwr::default_scenarios());
    auto peak       = [&](const std::string& label, double eps_h, double eps_w, double nu) {
        for (const SweepRow& row : rows) {
            if (row.label == label && row.values[0].second == eps_h && row.values[1].second == eps_w &&
                row.values[2].second == nu) {
                return row.summary->peak_infected;
            }
        }
        throw std::runtime_error("missing scenario " + label);
    };
    const double medium = peak("combined_medium", 0.6, 0.6, 0.02);
    EXPECT_LE(medium, peak("eps_h_only", 0.6, 0, 0));
    EXPECT_LE(medium, peak("eps_w_only", 0, 0.6, 0));
    EXPECT_LE(medium, peak("nu_only", 0, 0, 0.02));
    EXPECT_LE(peak("combined_low", 0.3, 0.3, 0.01), peak("eps_h_only", 0.3, 0, 0));
    EXPECT_LE(peak("combined_high", 0.9, 0.9, 0.03), medium);
    EXPECT_EQ(peak("baseline", 0, 0, 0), rows.front().summary->peak_infected);
}

TEST(Scenarios, AllZeroEqualsBaseline)
{
    const Parameters p = siwr::baseline_parameters();
    const auto rows    = siwr::scenario_compare(p, {{"none", 0.0, 0.0, 0.0, 100.0}});
    const auto ref     = siwr::intervention_sweep(p, Intervention::EpsH, {0.0});
    EXPECT_EQ(rows[0].summary->peak_infected, ref[0].summary->peak_infected);
    EXPECT_EQ(rows[0].summary->cumulative_infections, ref[0].summary->cumulative_infections);
    EXPECT_EQ(rows[0].r0, ref[0].r0);
}

TEST(Scenarios, HorizonControlsGrid)
{
    const auto rows = siwr::scenario_compare(siwr::baseline_parameters(), {{"short", 0.0, 0.0, 0.0, 20.0}});
    EXPECT_LT(rows[0].summary->cumulative_infections, 1000.0);
}

TEST(Scenarios, RejectsInvalidSpec)
{
    EXPECT_THROW(siwr::scenario_compare(siwr::baseline_parameters(), {{"bad", 1.5, 0.0, 0.0, 100.0}}),
                 siwr::DomainError);
    EXPECT_THROW(siwr::scenario_compare(siwr::baseline_parameters(), {{"bad", 0.0, 0.0, 0.0, 0.0}}),
                 siwr::DomainError);
}

TEST(Bifurcation, ThresholdAndMonotoneBranch)
{
    const Parameters p = bifurcation_base();
    const double lo = 0.02679, hi = 0.3344;
    const auto rows    = siwr::bifurcation_scan(p, siwr::TransmissionParameter::Beta1, lo, hi, 50);
    ASSERT_EQ(rows.size(), 50u);
    EXPECT_NEAR(rows.front().r0, 0.5, 1e-3);
    EXPECT_NEAR(rows.back().r0, 2.0, 1e-3);

    const SweepRow* prev = nullptr;
    for (const SweepRow& row : rows) {
        Parameters q = p;
        q.beta1      = row.values[0].second;
        EXPECT_EQ(row.r0, siwr::r0(q));
        EXPECT_FALSE(row.summary.has_value());
        EXPECT_EQ(row.status, siwr::RowStatus::Ok);
        if (row.r0 < 0.99) {
            EXPECT_EQ(row.endemic_i, 0.0) << row.r0;
        }
        if (row.r0 > 1.01 && prev != nullptr && prev->r0 > 1.01) {
            EXPECT_GT(row.endemic_i, prev->endemic_i);
        }
        prev = &row;
    }

    const double step = (hi - lo) / 49.0;
    const double bc   = critical_beta1(p);
    std::size_t first = rows.size();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].endemic_i > 0.0) {
            first = j;
            break;
        }
    }
    ASSERT_LT(first, rows.size());
    ASSERT_GT(first, 0u);
    EXPECT_LE(rows[first - 1].values[0].second, bc);
    EXPECT_GE(rows[first].values[0].second, bc);
    EXPECT_LE(rows[first].values[0].second - bc, step);
}

TEST(Bifurcation, BetaMaxScan)
{
    const auto rows = siwr::bifurcation_scan(siwr::baseline_parameters(), siwr::TransmissionParameter::BetaMax, 0.0,
                                             1.0, 11);
    for (std::size_t j = 1; j < rows.size(); ++j) {
        EXPECT_GT(rows[j].r0, rows[j - 1].r0);
        EXPECT_GE(rows[j].endemic_i, rows[j - 1].endemic_i);
        EXPECT_EQ(rows[j].label, "beta_max");
    }
}

TEST(Bifurcation, RejectsBadGrid)
{
    const Parameters p = siwr::baseline_parameters();
    EXPECT_THROW(siwr::bifurcation_scan(p, siwr::TransmissionParameter::Beta1, 0.5, 0.1, 10), std::invalid_argument);
    EXPECT_THROW(siwr::bifurcation_scan(p, siwr::TransmissionParameter::Beta1, 0.1, 0.5, 1), std::invalid_argument);
}

TEST(Contour, CornersAndMonotonicity)
{
    Parameters p;
    p.nu                = 0.01;
    const auto grid     = siwr::r0_contour(p, 101);
    Parameters no_vacc  = p;
    no_vacc.nu          = 0.0;
    ASSERT_EQ(grid.values.size(), 101u * 101u);
    EXPECT_EQ(grid(100, 100), 0.0);
    EXPECT_EQ(grid(0, 0), siwr::r0(no_vacc));
    EXPECT_EQ(grid.axis(50), 0.5);
    for (std::size_t i = 0; i < 101; ++i) {
        for (std::size_t j = 0; j < 101; ++j) {
            if (i > 0) {
                EXPECT_LE(grid(i, j), grid(i - 1, j));
            }
            if (j > 0) {
                EXPECT_LE(grid(i, j), grid(i, j - 1));
            }
        }
    }
}

TEST(Contour, EntryMatchesClosedForm)
{
    const auto grid = siwr::r0_contour(siwr::baseline_parameters(), 5);
    Parameters q;
    q.eps_h = 0.25;
    q.eps_w = 0.75;
    EXPECT_DOUBLE_EQ(grid(1, 3), siwr::r0(q));
    EXPECT_THROW(siwr::r0_contour(q, 1), std::invalid_argument);
}

TEST(Thresholds, SanitationOfHumansOnBaseline)
{
    const Parameters p = siwr::baseline_parameters();
    const auto eh      = siwr::r0_threshold(p, Intervention::EpsH);
    ASSERT_TRUE(eh.has_value());
    EXPECT_GT(*eh, 0.0);
    EXPECT_LE(*eh, 1.0);
    Parameters q = p;
    q.eps_h      = *eh;
    EXPECT_NEAR(siwr::r0(q), 1.0, 1e-12);
}

TEST(Thresholds, VaccinationOnBaseline)
{
    const Parameters p = siwr::baseline_parameters();
    const auto nu      = siwr::r0_threshold(p, Intervention::Nu, 0.03);
    ASSERT_TRUE(nu.has_value());
    Parameters q = p;
    q.nu         = *nu;
    EXPECT_NEAR(siwr::r0(q), 1.0, 1e-12);
}

TEST(Thresholds, EnvironmentalSanitationWhenReachable)
{
    Parameters p;
    p.beta1       = 0.1;
    const auto ew = siwr::r0_threshold(p, Intervention::EpsW);
    ASSERT_TRUE(ew.has_value());
    Parameters q = p;
    q.eps_w      = *ew;
    EXPECT_NEAR(siwr::r0(q), 1.0, 1e-12);
}

TEST(Thresholds, EdgeCases)
{
    Parameters p;
    p.beta1 = 0.01;
    p.theta = 0.01;
    EXPECT_EQ(siwr::r0_threshold(p, Intervention::EpsH), 0.0);
    Parameters strong;
    strong.theta = 10.0;
    EXPECT_FALSE(siwr::r0_threshold(strong, Intervention::EpsH).has_value());
}
