#include "cli.h"

#include "config.h"
#include "output.h"

#include "siwr/equilibrium.h"
#include "siwr/errors.h"
#include "siwr/sensitivity.h"
#include "siwr/sweeps.h"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <variant>

namespace siwr::cli
{

using nlohmann::json;

namespace
{

struct Invocation {
    std::string command;
    RunConfig config;
};

/// Everything a command needs: the resolved configuration, its output files and stdout.
class Context
{
public:
    Context(const Invocation& inv, std::ostream& out)
        : cfg(inv.config)
        , files(inv.config.output_dir)
        , console(out)
        , m_command(inv.command)
    {
    }

    json metadata() const
    {
        return {{"command", m_command}, {"seed", cfg.seed}, {"generator", rng_name}, {"config", to_json(cfg, true)}};
    }

    CsvTable table(std::vector<std::string> header) const
    {
        CsvTable t(std::move(header));
        t.meta("command", m_command);
        t.meta("seed", std::to_string(cfg.seed));
        t.meta("generator", rng_name);
        t.meta("config", to_json(cfg, true).dump());
        return t;
    }

    void write_json(const std::string& name, json result)
    {
        const json doc = {{"metadata", metadata()}, {"result", std::move(result)}};
        files.write(name, doc.dump(2) + "\n");
    }

    void write_csv(const std::string& name, const CsvTable& t)
    {
        files.write(name, t.str());
    }

    const RunConfig& cfg;
    OutputSet files;
    std::ostream& console;

private:
    std::string m_command;
};

json state_json(const State& x)
{
    return {{"s", x.s}, {"i", x.i}, {"r", x.r}, {"w", x.w}};
}

json report_json(const EquilibriumReport& rep)
{
    json eigs = json::array();
    for (const auto& z : rep.eigenvalues) {
        eigs.push_back({{"re", z.real()}, {"im", z.imag()}});
    }
    return {
        {"kind", to_string(rep.kind)},
        {"state", state_json(rep.state)},
        {"residual_norm", rep.residual_norm},
        {"eigenvalues", eigs},
        {"stability", to_string(rep.stability)},
        {"r0", rep.r0_at_params},
    };
}

json summary_json(const EpidemicSummary& s)
{
    return {
        {"peak_infected", s.peak_infected},
        {"peak_time", s.peak_time},
        {"cumulative_infections", s.cumulative_infections},
        {"final_susceptible", s.final_susceptible},
        {"duration_above", s.duration_above},
    };
}

std::string status_name(RowStatus s)
{
    return s == RowStatus::Ok ? "ok" : "nonconvergence";
}

std::vector<std::string> summary_cells(const SweepRow& row)
{
    const EpidemicSummary& s = *row.summary;
    return {format_number(row.r0),
            format_number(s.peak_infected),
            format_number(s.peak_time),
            format_number(s.cumulative_infections),
            format_number(s.final_susceptible),
            format_number(s.duration_above),
            format_number(row.endemic_i),
            status_name(row.status)};
}

const std::vector<std::string> summary_header = {"r0",
                                                 "peak_infected",
                                                 "peak_time",
                                                 "cumulative_infections",
                                                 "final_susceptible",
                                                 "duration_above",
                                                 "endemic_i",
                                                 "status"};

std::string fixed(double v, int digits)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

/// Six significant digits for console tables; files keep full precision.
std::string brief(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

Intervention intervention_from(const std::string& name)
{
    if (name == "eps_h") {
        return Intervention::EpsH;
    }
    if (name == "eps_w") {
        return Intervention::EpsW;
    }
    return Intervention::Nu;
}

void cmd_simulate(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const Trajectory tr  = integrate(cfg.parameters, cfg.initial_state, cfg.solver);
    const auto summary   = summarize(tr, cfg.simulate.threshold);

    CsvTable t = ctx.table({"t", "S", "I", "R", "W", "C"});
    for (std::size_t j = 0; j < tr.size(); ++j) {
        const State& x = tr.states[j];
        t.row(std::vector<double>{tr.times[j], x.s, x.i, x.r, x.w, tr.cum_incidence[j]});
    }
    ctx.write_csv("trajectory.csv", t);

    json result          = summary_json(summary);
    result["threshold"]  = cfg.simulate.threshold;
    result["r0"]         = r0(cfg.parameters);
    result["accepted_steps"] = tr.accepted_steps;
    result["rejected_steps"] = tr.rejected_steps;
    ctx.write_json("summary.json", result);

    ctx.console << "R0                    " << format_number(r0(cfg.parameters)) << "\n"
                << "peak infected         " << fixed(summary.peak_infected, 3) << " on day "
                << format_number(summary.peak_time) << "\n"
                << "cumulative infections " << fixed(summary.cumulative_infections, 3) << "\n"
                << "final susceptible     " << fixed(summary.final_susceptible, 3) << "\n"
                << "days with I > " << format_number(cfg.simulate.threshold) << "       "
                << fixed(summary.duration_above, 2) << "\n";
}

void cmd_r0(Context& ctx)
{
    const R0Breakdown b = r0_breakdown(ctx.cfg.parameters);
    ctx.write_json("r0.json", {{"r0", b.value},
                               {"direct_term", b.direct_term},
                               {"environmental_term", b.environmental_term},
                               {"denominator", b.denominator}});
    ctx.console << format_number(b.value) << "\n"
                << "direct_term        " << format_number(b.direct_term) << "\n"
                << "environmental_term " << format_number(b.environmental_term) << "\n"
                << "denominator        " << format_number(b.denominator) << "\n";
}

void print_report(std::ostream& os, const EquilibriumReport& rep)
{
    os << "kind       " << to_string(rep.kind) << "\n"
       << "S I R W    " << format_number(rep.state.s) << " " << format_number(rep.state.i) << " "
       << format_number(rep.state.r) << " " << format_number(rep.state.w) << "\n"
       << "residual   " << format_number(rep.residual_norm) << "\n"
       << "stability  " << to_string(rep.stability) << "\n"
       << "eigenvalues";
    for (const auto& z : rep.eigenvalues) {
        os << " " << format_number(z.real());
        if (z.imag() != 0.0) {
            os << (z.imag() > 0 ? "+" : "") << format_number(z.imag()) << "i";
        }
    }
    os << "\n";
}

void cmd_dfe(Context& ctx)
{
    const EquilibriumReport rep = analyze_dfe(ctx.cfg.parameters);
    ctx.write_json("dfe.json", report_json(rep));
    print_report(ctx.console, rep);
}

void cmd_endemic(Context& ctx)
{
    const EndemicResult res = solve_endemic(ctx.cfg.parameters);
    if (const auto* rep = std::get_if<EquilibriumReport>(&res)) {
        ctx.write_json("endemic.json", report_json(*rep));
        print_report(ctx.console, *rep);
        return;
    }
    const auto& none = std::get<NoEndemic>(res);
    ctx.write_json("endemic.json", {{"kind", "none"},
                                    {"r0", r0(ctx.cfg.parameters)},
                                    {"scan_lower", none.scan_lower},
                                    {"scan_upper", none.scan_upper},
                                    {"scan_points", none.scan_points},
                                    {"max_reduced_residual", none.max_reduced_residual}});
    ctx.console << "no endemic equilibrium (R0 = " << format_number(r0(ctx.cfg.parameters))
                << "); reduced residual stays below " << format_number(none.max_reduced_residual) << " on I in ["
                << format_number(none.scan_lower) << ", " << format_number(none.scan_upper) << "]\n";
}

SweepSettings settings_for(const RunConfig& cfg, double horizon, double threshold)
{
    SweepSettings s;
    s.initial   = cfg.initial_state;
    s.solver    = cfg.solver;
    s.horizon   = horizon;
    s.threshold = threshold;
    return s;
}

void cmd_sweep(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    std::vector<std::string> header = {"intervention", "value"};
    header.insert(header.end(), summary_header.begin(), summary_header.end());
    CsvTable t = ctx.table(header);

    const SweepSettings settings = settings_for(cfg, cfg.sweep.horizon, cfg.sweep.threshold);
    for (const std::string& name : cfg.sweep.interventions) {
        const auto& values = name == "nu" ? cfg.sweep.nu_values : cfg.sweep.eps_values;
        const auto rows    = intervention_sweep(cfg.parameters, intervention_from(name), values, settings);
        ctx.console << name << "\n";
        for (const SweepRow& row : rows) {
            std::vector<std::string> cells = {name, format_number(row.values.front().second)};
            const auto rest                = summary_cells(row);
            cells.insert(cells.end(), rest.begin(), rest.end());
            t.row(cells);
            ctx.console << "  " << std::setw(6) << brief(row.values.front().second) << "  R0 "
                        << fixed(row.r0, 4) << "  peak " << fixed(row.summary->peak_infected, 2) << " (day "
                        << brief(row.summary->peak_time) << ")  cumulative "
                        << fixed(row.summary->cumulative_infections, 2) << "\n";
        }
        if (name == "nu") {
            const auto zero = std::find(values.begin(), values.end(), 0.0);
            const auto one  = std::find(values.begin(), values.end(), 0.01);
            if (zero != values.end() && one != values.end()) {
                const auto& a   = rows[static_cast<std::size_t>(zero - values.begin())];
                const auto& b   = rows[static_cast<std::size_t>(one - values.begin())];
                const double pc = 100.0 * (1.0 - b.summary->peak_infected / a.summary->peak_infected);
                ctx.console << "  peak reduction at nu = 0.01: " << fixed(pc, 1)
                            << "% (reference figure: approximately 40%)\n";
            }
        }
    }
    ctx.write_csv("sweep.csv", t);
}

void cmd_scenarios(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const auto rows =
        scenario_compare(cfg.parameters, cfg.scenarios.list, settings_for(cfg, 100.0, cfg.scenarios.threshold));

    std::vector<std::string> header = {"label", "eps_h", "eps_w", "nu", "horizon"};
    header.insert(header.end(), summary_header.begin(), summary_header.end());
    CsvTable t = ctx.table(header);
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const ScenarioSpec& spec       = cfg.scenarios.list[j];
        std::vector<std::string> cells = {spec.label, format_number(spec.eps_h), format_number(spec.eps_w),
                                          format_number(spec.nu), format_number(spec.horizon)};
        const auto rest                = summary_cells(rows[j]);
        cells.insert(cells.end(), rest.begin(), rest.end());
        t.row(cells);
        ctx.console << std::left << std::setw(18) << spec.label << std::right << " eps_h " << fixed(spec.eps_h, 2)
                    << " eps_w " << fixed(spec.eps_w, 2) << " nu " << fixed(spec.nu, 3) << "  R0 "
                    << fixed(rows[j].r0, 4) << "  peak " << fixed(rows[j].summary->peak_infected, 2)
                    << "  cumulative " << fixed(rows[j].summary->cumulative_infections, 2) << "\n";
    }
    ctx.write_csv("scenarios.csv", t);

    const SweepRow* moderate = nullptr;
    const SweepRow* best     = nullptr;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const std::string& label = cfg.scenarios.list[j].label;
        if (label == "combined_moderate") {
            moderate = &rows[j];
        }
        if (label.size() > 5 && label.compare(label.size() - 5, 5, "_only") == 0 &&
            (best == nullptr || rows[j].summary->peak_infected < best->summary->peak_infected)) {
            best = &rows[j];
        }
    }
    if (moderate != nullptr && best != nullptr) {
        ctx.console << "moderate combined peak " << fixed(moderate->summary->peak_infected, 2)
                    << " vs best single intervention peak " << fixed(best->summary->peak_infected, 2) << " ("
                    << best->label << ")\n";
    }
}

void cmd_bifurcation(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const auto which =
        cfg.bifurcation.parameter == "beta1" ? TransmissionParameter::Beta1 : TransmissionParameter::BetaMax;
    const auto rows =
        bifurcation_scan(cfg.parameters, which, cfg.bifurcation.lo, cfg.bifurcation.hi, cfg.bifurcation.steps);

    CsvTable t = ctx.table({"parameter", "value", "r0", "endemic_i", "status"});
    std::size_t nonconverged = 0;
    const SweepRow* first    = nullptr;
    for (const SweepRow& row : rows) {
        t.row(std::vector<std::string>{row.label, format_number(row.values.front().second), format_number(row.r0),
                                       format_number(row.endemic_i), status_name(row.status)});
        if (row.status != RowStatus::Ok) {
            ++nonconverged;
        }
        if (first == nullptr && row.endemic_i > 0.0) {
            first = &row;
        }
    }
    ctx.write_csv("bifurcation.csv", t);

    ctx.console << rows.size() << " points of " << cfg.bifurcation.parameter << " on ["
                << format_number(cfg.bifurcation.lo) << ", " << format_number(cfg.bifurcation.hi) << "]\n";
    if (first != nullptr) {
        ctx.console << "endemic branch first positive at " << cfg.bifurcation.parameter << " = "
                    << brief(first->values.front().second) << " (R0 " << fixed(first->r0, 4) << ")\n";
    }
    else {
        ctx.console << "no endemic equilibrium on the scanned range\n";
    }
    if (nonconverged > 0) {
        ctx.console << nonconverged << " rows did not converge\n";
    }
}

void cmd_contour(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const R0Grid grid    = r0_contour(cfg.parameters, cfg.contour.grid_n);

    std::vector<std::string> header = {"eps_h"};
    for (std::size_t j = 0; j < grid.n; ++j) {
        header.push_back("eps_w=" + format_number(grid.axis(j)));
    }
    CsvTable t = ctx.table(header);
    t.meta("layout", "rows eps_h, columns eps_w, entries R0 with nu = 0");
    for (std::size_t i = 0; i < grid.n; ++i) {
        std::vector<double> cells = {grid.axis(i)};
        for (std::size_t j = 0; j < grid.n; ++j) {
            cells.push_back(grid(i, j));
        }
        t.row(cells);
    }
    ctx.write_csv("contour.csv", t);

    Parameters p = cfg.parameters;
    p.nu         = 0.0;
    ctx.console << "R0 at (0, 0) " << format_number(grid(0, 0)) << ", at (1, 1) "
                << format_number(grid(grid.n - 1, grid.n - 1)) << "\n";
    for (auto which : {Intervention::EpsH, Intervention::EpsW}) {
        const auto level = r0_threshold(p, which);
        ctx.console << "R0 = 1 along " << to_string(which) << " alone: "
                    << (level ? format_number(*level) : std::string("not reached on [0, 1]")) << "\n";
    }
}

void cmd_prcc(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const PrccResult res =
        run_sensitivity(cfg.parameters, cfg.resolved_ranges(), cfg.sensitivity.n, cfg.seed, cfg.sensitivity.horizon);

    CsvTable t = ctx.table({"parameter", "prcc"});
    t.meta("outcome", res.outcome);
    t.meta("n_samples", std::to_string(res.n_samples));
    t.meta("n_failed", std::to_string(res.n_failed));
    for (std::size_t j = 0; j < res.names.size(); ++j) {
        t.row(std::vector<std::string>{res.names[j], format_number(res.coefficients[j])});
        ctx.console << std::left << std::setw(10) << res.names[j] << std::right << std::setw(9)
                    << fixed(res.coefficients[j], 4) << "\n";
    }
    ctx.write_csv("prcc.csv", t);
    ctx.console << res.n_samples << " samples (" << res.n_failed << " failed), seed " << res.seed << ", "
                << res.generator << "\n";
}

using Handler = void (*)(Context&);

struct CommandInfo {
    const char* name;
    const char* help;
    Handler handler;
};

constexpr CommandInfo commands[] = {
    {"simulate", "integrate one trajectory; writes trajectory.csv and summary.json", cmd_simulate},
    {"r0", "basic reproduction number and its terms; writes r0.json", cmd_r0},
    {"dfe", "disease-free equilibrium and its stability; writes dfe.json", cmd_dfe},
    {"endemic", "endemic equilibrium and its stability; writes endemic.json", cmd_endemic},
    {"sweep", "single-intervention sweeps; writes sweep.csv", cmd_sweep},
    {"scenarios", "combined-strategy comparison; writes scenarios.csv", cmd_scenarios},
    {"bifurcation", "endemic level along a transmission ramp; writes bifurcation.csv", cmd_bifurcation},
    {"contour", "R0 over both sanitation efficacies; writes contour.csv", cmd_contour},
    {"prcc", "Latin hypercube PRCC sensitivity analysis; writes prcc.csv", cmd_prcc},
};

json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    }
    catch (const json::parse_error& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"SIWR cholera transmission model with sanitation and vaccination"};
    app.name("siwr");
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;
    bool dump = false;

    app.add_option("--config", config_path, "JSON run configuration");
    auto* out_opt  = app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides seed)");
    app.add_option("--set", overrides, "override one config field, e.g. --set parameters.gamma=0.3")
        ->allow_extra_args(false);
    app.add_flag("--dump-config", dump, "print the resolved configuration and exit");
    for (const auto& c : commands) {
        app.add_subcommand(c.name, c.help);
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    Invocation inv;
    for (const auto* sub : app.get_subcommands()) {
        inv.command = sub->get_name();
    }

    try {
        json doc       = config_path.empty() ? json::object() : load_config_file(config_path);
        json resolved  = to_json(parse_config(doc));
        for (const auto& assignment : overrides) {
            apply_override(resolved, assignment);
        }
        inv.config = parse_config(resolved);
        if (seed_opt->count() > 0) {
            inv.config.seed = seed;
        }
        if (out_opt->count() > 0) {
            inv.config.output_dir = out_dir;
        }
        validate(inv.config);
    }
    catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    if (dump) {
        out << to_json(inv.config, true).dump(2) << "\n";
        return exit_ok;
    }
    if (inv.command.empty()) {
        err << "error: no command given\n" << app.help();
        return exit_config;
    }

    Context ctx(inv, out);
    const auto* info = std::find_if(std::begin(commands), std::end(commands),
                                    [&](const CommandInfo& c) { return inv.command == c.name; });
    try {
        info->handler(ctx);
        return exit_ok;
    }
    catch (const NumericalError& e) {
        ctx.files.rollback();
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
    catch (const DomainError& e) {
        ctx.files.rollback();
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::invalid_argument& e) {
        ctx.files.rollback();
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::filesystem::filesystem_error& e) {
        ctx.files.rollback();
        err << "error: cannot write output: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception& e) {
        ctx.files.rollback();
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

} // namespace siwr::cli
