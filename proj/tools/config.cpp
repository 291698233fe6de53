#include "config.h"

#include "siwr/errors.h"

#include <cmath>
#include <set>

namespace siwr::cli
{

using nlohmann::json;

namespace
{

/// Pulls known keys out of one JSON object and reports whatever is left over.
class ObjectReader
{
public:
    ObjectReader(const json& j, std::string path)
        : m_json(j)
        , m_path(std::move(path))
    {
        if (!j.is_object()) {
            throw ConfigError(label() + "expected an object");
        }
    }

    /// Throws on the first key that no accessor asked for.
    void finish() const
    {
        for (const auto& item : m_json.items()) {
            if (m_seen.count(item.key()) == 0) {
                throw ConfigError(child(item.key()) + ": unknown key");
            }
        }
    }

    ObjectReader(const ObjectReader&)            = delete;
    ObjectReader& operator=(const ObjectReader&) = delete;

    const json* find(const std::string& key)
    {
        m_seen.insert(key);
        const auto it = m_json.find(key);
        return it == m_json.end() ? nullptr : &*it;
    }

    std::string child(const std::string& key) const
    {
        return m_path.empty() ? key : m_path + "." + key;
    }

    void number(const std::string& key, double& out)
    {
        if (const json* v = find(key)) {
            out = as_number(*v, child(key));
        }
    }

    void count(const std::string& key, std::size_t& out)
    {
        if (const json* v = find(key)) {
            out = static_cast<std::size_t>(as_unsigned(*v, child(key)));
        }
    }

    void unsigned64(const std::string& key, std::uint64_t& out)
    {
        if (const json* v = find(key)) {
            out = as_unsigned(*v, child(key));
        }
    }

    void string(const std::string& key, std::string& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_string()) {
                throw ConfigError(child(key) + ": expected a string");
            }
            out = v->get<std::string>();
        }
    }

    void numbers(const std::string& key, std::vector<double>& out)
    {
        if (const json* v = find(key)) {
            const std::string path = child(key);
            if (!v->is_array()) {
                throw ConfigError(path + ": expected an array of numbers");
            }
            out.clear();
            for (std::size_t idx = 0; idx < v->size(); ++idx) {
                out.push_back(as_number((*v)[idx], path + "[" + std::to_string(idx) + "]"));
            }
        }
    }

    void strings(const std::string& key, std::vector<std::string>& out)
    {
        if (const json* v = find(key)) {
            const std::string path = child(key);
            if (!v->is_array()) {
                throw ConfigError(path + ": expected an array of strings");
            }
            out.clear();
            for (std::size_t idx = 0; idx < v->size(); ++idx) {
                if (!(*v)[idx].is_string()) {
                    throw ConfigError(path + "[" + std::to_string(idx) + "]: expected a string");
                }
                out.push_back((*v)[idx].get<std::string>());
            }
        }
    }

    static double as_number(const json& v, const std::string& path)
    {
        if (!v.is_number()) {
            throw ConfigError(path + ": expected a number");
        }
        return v.get<double>();
    }

    static std::uint64_t as_unsigned(const json& v, const std::string& path)
    {
        if (v.is_number_unsigned()) {
            return v.get<std::uint64_t>();
        }
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        }
        throw ConfigError(path + ": expected a nonnegative integer");
    }

private:
    std::string label() const
    {
        return m_path.empty() ? "config: " : m_path + ": ";
    }

    const json& m_json;
    std::string m_path;
    std::set<std::string> m_seen;
};

void read_parameters(const json& j, const std::string& path, Parameters& p)
{
    ObjectReader r(j, path);
    for (std::string_view name : parameter_names) {
        r.number(std::string(name), p.**parameter_field(name));
    }
    r.finish();
}

void read_state(const json& j, const std::string& path, State& x)
{
    ObjectReader r(j, path);
    r.number("s", x.s);
    r.number("i", x.i);
    r.number("r", x.r);
    r.number("w", x.w);
    r.finish();
}

void read_solver(const json& j, const std::string& path, SolverConfig& s)
{
    ObjectReader r(j, path);
    r.number("rel_tol", s.rel_tol);
    r.number("abs_tol", s.abs_tol);
    r.number("h_init", s.h_init);
    r.number("h_min", s.h_min);
    r.number("h_max", s.h_max);
    r.number("output_dt", s.output_dt);
    r.number("t_end", s.t_end);
    r.finish();
}

void read_scenarios(const json& j, const std::string& path, ScenariosConfig& s)
{
    ObjectReader r(j, path);
    r.number("threshold", s.threshold);
    if (const json* list = r.find("list")) {
        const std::string list_path = r.child("list");
        if (!list->is_array()) {
            throw ConfigError(list_path + ": expected an array of scenarios");
        }
        s.list.clear();
        for (std::size_t idx = 0; idx < list->size(); ++idx) {
            ScenarioSpec spec;
            ObjectReader e((*list)[idx], list_path + "[" + std::to_string(idx) + "]");
            e.string("label", spec.label);
            e.number("eps_h", spec.eps_h);
            e.number("eps_w", spec.eps_w);
            e.number("nu", spec.nu);
            e.number("horizon", spec.horizon);
            e.finish();
            s.list.push_back(spec);
        }
    }
    r.finish();
}

void read_sensitivity(const json& j, const std::string& path, SensitivityConfig& s)
{
    ObjectReader r(j, path);
    r.count("n", s.n);
    r.number("horizon", s.horizon);
    if (const json* ranges = r.find("ranges")) {
        const std::string ranges_path = r.child("ranges");
        if (ranges->is_null()) {
            s.ranges.reset();
            r.finish();
            return;
        }
        if (!ranges->is_array()) {
            throw ConfigError(ranges_path + ": expected an array of ranges or null");
        }
        ParameterRanges out;
        for (std::size_t idx = 0; idx < ranges->size(); ++idx) {
            ParameterRange range;
            ObjectReader e((*ranges)[idx], ranges_path + "[" + std::to_string(idx) + "]");
            e.string("name", range.name);
            e.number("lower", range.lower);
            e.number("upper", range.upper);
            e.string("distribution", range.distribution);
            e.finish();
            out.push_back(range);
        }
        s.ranges = std::move(out);
    }
    r.finish();
}

json state_json(const State& x)
{
    return {{"s", x.s}, {"i", x.i}, {"r", x.r}, {"w", x.w}};
}

json ranges_json(const ParameterRanges& ranges)
{
    json out = json::array();
    for (const auto& r : ranges) {
        out.push_back({{"name", r.name}, {"lower", r.lower}, {"upper", r.upper}, {"distribution", r.distribution}});
    }
    return out;
}

template <class F>
void rethrow_as_config(const std::string& path, F&& check)
{
    try {
        check();
    }
    catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

bool is_intervention(const std::string& name)
{
    return name == "eps_h" || name == "eps_w" || name == "nu";
}

} // namespace

ParameterRanges RunConfig::resolved_ranges() const
{
    return sensitivity.ranges ? *sensitivity.ranges : default_ranges(parameters);
}

RunConfig parse_config(const json& doc)
{
    RunConfig cfg;
    ObjectReader r(doc, "");
    if (const json* v = r.find("parameters")) {
        read_parameters(*v, "parameters", cfg.parameters);
    }
    if (const json* v = r.find("initial_state")) {
        read_state(*v, "initial_state", cfg.initial_state);
    }
    if (const json* v = r.find("solver")) {
        read_solver(*v, "solver", cfg.solver);
    }
    if (const json* v = r.find("simulate")) {
        ObjectReader s(*v, "simulate");
        s.number("threshold", cfg.simulate.threshold);
        s.finish();
    }
    if (const json* v = r.find("sweep")) {
        ObjectReader s(*v, "sweep");
        s.strings("interventions", cfg.sweep.interventions);
        s.numbers("eps_values", cfg.sweep.eps_values);
        s.numbers("nu_values", cfg.sweep.nu_values);
        s.number("horizon", cfg.sweep.horizon);
        s.number("threshold", cfg.sweep.threshold);
        s.finish();
    }
    if (const json* v = r.find("scenarios")) {
        read_scenarios(*v, "scenarios", cfg.scenarios);
    }
    if (const json* v = r.find("bifurcation")) {
        ObjectReader s(*v, "bifurcation");
        s.string("parameter", cfg.bifurcation.parameter);
        s.number("lo", cfg.bifurcation.lo);
        s.number("hi", cfg.bifurcation.hi);
        s.count("steps", cfg.bifurcation.steps);
        s.finish();
    }
    if (const json* v = r.find("contour")) {
        ObjectReader s(*v, "contour");
        s.count("grid_n", cfg.contour.grid_n);
        s.finish();
    }
    if (const json* v = r.find("sensitivity")) {
        read_sensitivity(*v, "sensitivity", cfg.sensitivity);
    }
    r.unsigned64("seed", cfg.seed);
    r.string("output_dir", cfg.output_dir);
    r.finish();
    return cfg;
}

json to_json(const RunConfig& cfg, bool resolve)
{
    json params = json::object();
    for (std::string_view name : parameter_names) {
        params[std::string(name)] = get_parameter(cfg.parameters, name);
    }
    const SolverConfig& s = cfg.solver;

    json scenarios = json::array();
    for (const auto& spec : cfg.scenarios.list) {
        scenarios.push_back({{"label", spec.label},
                             {"eps_h", spec.eps_h},
                             {"eps_w", spec.eps_w},
                             {"nu", spec.nu},
                             {"horizon", spec.horizon}});
    }

    json ranges = nullptr;
    if (cfg.sensitivity.ranges) {
        ranges = ranges_json(*cfg.sensitivity.ranges);
    }
    else if (resolve) {
        ranges = ranges_json(cfg.resolved_ranges());
    }

    return {
        {"parameters", params},
        {"initial_state", state_json(cfg.initial_state)},
        {"solver",
         {{"rel_tol", s.rel_tol},
          {"abs_tol", s.abs_tol},
          {"h_init", s.h_init},
          {"h_min", s.h_min},
          {"h_max", s.h_max},
          {"output_dt", s.output_dt},
          {"t_end", s.t_end}}},
        {"simulate", {{"threshold", cfg.simulate.threshold}}},
        {"sweep",
         {{"interventions", cfg.sweep.interventions},
          {"eps_values", cfg.sweep.eps_values},
          {"nu_values", cfg.sweep.nu_values},
          {"horizon", cfg.sweep.horizon},
          {"threshold", cfg.sweep.threshold}}},
        {"scenarios", {{"list", scenarios}, {"threshold", cfg.scenarios.threshold}}},
        {"bifurcation",
         {{"parameter", cfg.bifurcation.parameter},
          {"lo", cfg.bifurcation.lo},
          {"hi", cfg.bifurcation.hi},
          {"steps", cfg.bifurcation.steps}}},
        {"contour", {{"grid_n", cfg.contour.grid_n}}},
        {"sensitivity", {{"n", cfg.sensitivity.n}, {"horizon", cfg.sensitivity.horizon}, {"ranges", ranges}}},
        {"seed", cfg.seed},
        {"output_dir", cfg.output_dir},
    };
}

void apply_override(json& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("--set " + std::string(assignment) + ": expected path=value");
    }
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot         = path.find('.', start);
        const std::string key  = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        const std::string here = path.substr(0, dot);
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError(here + ": unknown key");
        }
        node = &(*node)[key];
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }

    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    *node = std::move(value);
}

void validate(const RunConfig& cfg)
{
    rethrow_as_config("parameters", [&] { cfg.parameters.validate(); });
    {
        const auto x = cfg.initial_state.to_array();
        const char* names[] = {"s", "i", "r", "w"};
        for (std::size_t c = 0; c < 4; ++c) {
            if (!std::isfinite(x[c]) || x[c] < 0.0) {
                throw ConfigError(std::string("initial_state.") + names[c] + ": must be finite and nonnegative");
            }
        }
        if (!(cfg.initial_state.population() > 0.0)) {
            throw ConfigError("initial_state: s + i + r must be positive");
        }
    }
    rethrow_as_config("solver", [&] { cfg.solver.validate(); });

    auto positive = [](double v, const std::string& path) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ConfigError(path + ": must be positive");
        }
    };
    auto nonnegative = [](double v, const std::string& path) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError(path + ": must be finite and nonnegative");
        }
    };

    positive(cfg.simulate.threshold, "simulate.threshold");

    for (std::size_t idx = 0; idx < cfg.sweep.interventions.size(); ++idx) {
        if (!is_intervention(cfg.sweep.interventions[idx])) {
            throw ConfigError("sweep.interventions[" + std::to_string(idx) + "]: expected eps_h, eps_w or nu");
        }
    }
    for (std::size_t idx = 0; idx < cfg.sweep.eps_values.size(); ++idx) {
        const double v = cfg.sweep.eps_values[idx];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError("sweep.eps_values[" + std::to_string(idx) + "]: must lie in [0, 1]");
        }
    }
    for (std::size_t idx = 0; idx < cfg.sweep.nu_values.size(); ++idx) {
        nonnegative(cfg.sweep.nu_values[idx], "sweep.nu_values[" + std::to_string(idx) + "]");
    }
    positive(cfg.sweep.horizon, "sweep.horizon");
    positive(cfg.sweep.threshold, "sweep.threshold");

    for (std::size_t idx = 0; idx < cfg.scenarios.list.size(); ++idx) {
        rethrow_as_config("scenarios.list[" + std::to_string(idx) + "]", [&] { cfg.scenarios.list[idx].validate(); });
    }
    positive(cfg.scenarios.threshold, "scenarios.threshold");

    if (cfg.bifurcation.parameter != "beta1" && cfg.bifurcation.parameter != "beta_max") {
        throw ConfigError("bifurcation.parameter: expected beta1 or beta_max");
    }
    nonnegative(cfg.bifurcation.lo, "bifurcation.lo");
    if (!std::isfinite(cfg.bifurcation.hi) || !(cfg.bifurcation.lo < cfg.bifurcation.hi)) {
        throw ConfigError("bifurcation.hi: must exceed bifurcation.lo");
    }
    if (cfg.bifurcation.steps < 2) {
        throw ConfigError("bifurcation.steps: must be at least 2");
    }

    if (cfg.contour.grid_n < 2) {
        throw ConfigError("contour.grid_n: must be at least 2");
    }

    positive(cfg.sensitivity.horizon, "sensitivity.horizon");
    const ParameterRanges ranges = cfg.resolved_ranges();
    if (cfg.sensitivity.n <= ranges.size() + 2) {
        throw ConfigError("sensitivity.n: must exceed the number of ranges plus 2");
    }
    try {
        validate_ranges(ranges, cfg.parameters);
    }
    catch (const InvalidRanges& e) {
        throw ConfigError(std::string("sensitivity.ranges: ") + e.what());
    }
}

} // namespace siwr::cli
