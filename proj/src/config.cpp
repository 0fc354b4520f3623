#include "kinetic_harris/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kinetic_harris/errors.hpp"

namespace kh {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::string> aliases = {
    {"scenario", "scenario.name"}, {"d", "scenario.d"},       {"N", "simulation.N"},
    {"t", "simulation.t_final"},   {"seed", "simulation.seed"}, {"beta", "potential.beta"},
    {"delta", "potential.delta"},
};

const std::set<std::string> known_keys = {
    "scenario.name",       "scenario.d",
    "potential.name",      "potential.c",
    "potential.beta",      "potential.delta",
    "potential.gamma1",    "potential.gamma2",
    "potential.A",         "potential.p",
    "potential.bracket",   "kernel.gamma",
    "kernel.b0",           "simulation.N",
    "simulation.t_final",  "simulation.snapshots",
    "simulation.snapshot_count", "simulation.seed",
    "simulation.dt",       "simulation.initial",  "simulation.tail_index", "simulation.tail_scale",
    "simulation.x0",       "simulation.v0",
    "simulation.fit_t_min", "binning.bins",
    "binning.coverage",    "output.dir",
};

[[noreturn]] void fail(const std::string& key, const std::string& msg)
{
    throw ConfigError(key + ": " + msg);
}

double to_number(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double x = 0;
    try
    {
        x = std::stod(text, &used);
    }
    catch (const std::exception&)
    {
        fail(key, "expected a number, got '" + text + "'");
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
        ++used;
    if (used != text.size() || !std::isfinite(x))
        fail(key, "expected a finite number, got '" + text + "'");
    return x;
}

std::vector<double> to_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            fail(key, "empty list item");
        out.push_back(to_number(key, item.substr(b, e - b + 1)));
    }
    return out;
}

std::uint64_t to_count(const std::string& key, const std::string& text, double min)
{
    double x = to_number(key, text);
    if (x != std::floor(x) || x < min || x > 1.8e19)
        fail(key, "expected an integer >= " + std::to_string(static_cast<long long>(min)) + ", got '" +
                      text + "'");
    return static_cast<std::uint64_t>(x);
}

Vec to_vec(const std::string& key, const std::string& text, int d)
{
    auto xs = to_list(key, text);
    if (static_cast<int>(xs.size()) != d && xs.size() != 1)
        fail(key, "expected 1 or d = " + std::to_string(d) + " components");
    Vec v{};
    for (int i = 0; i < d; ++i)
        v[i] = xs.size() == 1 ? xs[0] : xs[i];
    return v;
}

void apply_overrides(pt::ptree& tree, const ConfigOverrides& overrides)
{
    for (const auto& [k, v] : overrides)
    {
        std::string key = k;
        if (auto it = aliases.find(k); it != aliases.end())
            key = it->second;
        if (!known_keys.count(key))
            fail(k, "unknown setting");
        tree.put(key, v);
    }
}

std::optional<std::string> lookup(const pt::ptree& tree, const std::string& key)
{
    auto v = tree.get_optional<std::string>(key);
    if (!v)
        return std::nullopt;
    return *v;
}

ExperimentConfig from_tree(const pt::ptree& tree, std::optional<ScenarioKind> fallback)
{
    for (const auto& [section, body] : tree)
    {
        if (body.empty() && !body.data().empty())
            fail(section, "settings must live inside a [section]");
        for (const auto& [name, value] : body)
            if (!known_keys.count(section + "." + name))
                fail(section + "." + name, "unknown setting");
    }

    ExperimentConfig c;
    if (auto s = lookup(tree, "scenario.name"))
    {
        auto k = scenario_from_string(*s);
        if (!k)
            fail("scenario.name", "unknown scenario '" + *s + "'");
        c.scenario = *k;
    }
    else if (fallback)
        c.scenario = *fallback;
    else
        fail("scenario.name", "missing");

    if (auto s = lookup(tree, "scenario.d"))
    {
        double d = to_number("scenario.d", *s);
        if (d != 1 && d != 2 && d != 3)
            fail("scenario.d", "must be 1, 2 or 3, got " + *s);
        c.d = static_cast<int>(d);
    }

    const bool torus = is_torus(c.scenario);
    bool potential_fields = false;
    for (const char* k : {"potential.name", "potential.c", "potential.beta", "potential.delta",
                          "potential.gamma1", "potential.gamma2", "potential.A", "potential.p",
                          "potential.bracket"})
        if (lookup(tree, k))
            potential_fields = true;
    if (torus && potential_fields)
        c.warnings.push_back("potential settings are ignored for the torus scenario " + to_string(c.scenario));

    if (auto s = lookup(tree, "potential.name"))
    {
        if (*s != "quadratic" && *s != "quartic" && *s != "subquadratic" && *s != "sublinear-plus")
            fail("potential.name", "unknown potential '" + *s +
                                       "' (quadratic, quartic, subquadratic, sublinear-plus)");
        c.potential = *s;
    }
    if (auto s = lookup(tree, "potential.c"))
    {
        c.potential_c = to_number("potential.c", *s);
        if (!(c.potential_c > 0))
            fail("potential.c", "must be positive, got " + *s);
    }
    if (auto s = lookup(tree, "potential.beta"))
        c.beta = to_number("potential.beta", *s);
    if (auto s = lookup(tree, "potential.delta"))
        c.delta = to_number("potential.delta", *s);
    if (!(c.beta > 0) || !(c.beta < 1))
        fail("potential.beta", "must lie in (0, 1), got " + std::to_string(c.beta));
    if (!(c.delta > 0) || !(c.delta <= 1))
        fail("potential.delta", "must lie in (0, 1], got " + std::to_string(c.delta));

    auto g1 = lookup(tree, "potential.gamma1");
    auto g2 = lookup(tree, "potential.gamma2");
    auto gA = lookup(tree, "potential.A");
    if (g1 || g2 || gA)
    {
        if (!g1 || !g2 || !gA)
            fail("potential.gamma1", "declared drift needs gamma1, gamma2 and A together");
        DriftParams dp;
        dp.gamma1 = to_number("potential.gamma1", *g1);
        dp.gamma2 = to_number("potential.gamma2", *g2);
        dp.A = to_number("potential.A", *gA);
        if (auto s = lookup(tree, "potential.p"))
            dp.p = to_number("potential.p", *s);
        if (auto s = lookup(tree, "potential.bracket"))
        {
            if (*s != "true" && *s != "false")
                fail("potential.bracket", "expected true or false, got '" + *s + "'");
            dp.bracket = *s == "true";
        }
        if (!(dp.gamma1 >= 0) || !(dp.gamma2 >= 0) || !(dp.A >= 0))
            fail("potential.gamma1", "gamma1, gamma2 and A must be non-negative");
        c.declared_drift = dp;
    }

    if (auto s = lookup(tree, "kernel.gamma"))
    {
        c.kernel_gamma = to_number("kernel.gamma", *s);
        if (c.kernel_gamma < 0 || c.kernel_gamma > 1)
            fail("kernel.gamma", "must lie in [0, 1], got " + *s);
    }
    if (auto s = lookup(tree, "kernel.b0"))
        c.kernel_b0 = to_number("kernel.b0", *s);
    if (!is_boltzmann(c.scenario) && (lookup(tree, "kernel.gamma") || lookup(tree, "kernel.b0")))
        c.warnings.push_back("kernel settings are ignored for the BGK scenario " + to_string(c.scenario));
    if (is_boltzmann(c.scenario) && c.d == 1 && c.kernel_gamma > 0)
        c.warnings.push_back("kernel.gamma > 0 in d = 1: the gain density vanishes on the diagonal and "
                             "the minorisation constant is 0");

    if (auto s = lookup(tree, "simulation.N"))
        c.N = to_count("simulation.N", *s, static_cast<double>(2 * tv_folds));
    if (auto s = lookup(tree, "simulation.t_final"))
    {
        c.t_final = to_number("simulation.t_final", *s);
        if (!(c.t_final > 0))
            fail("simulation.t_final", "must be positive, got " + *s);
    }
    if (auto s = lookup(tree, "simulation.seed"))
        c.seed = to_count("simulation.seed", *s, 0);
    if (auto s = lookup(tree, "simulation.dt"))
    {
        c.dt = to_number("simulation.dt", *s);
        if (!(c.dt > 0))
            fail("simulation.dt", "must be positive, got " + *s);
    }
    int count = 20;
    if (auto s = lookup(tree, "simulation.snapshot_count"))
        count = static_cast<int>(to_count("simulation.snapshot_count", *s, 2));
    if (auto s = lookup(tree, "simulation.snapshots"))
    {
        c.snapshots = to_list("simulation.snapshots", *s);
        if (!std::is_sorted(c.snapshots.begin(), c.snapshots.end()) ||
            std::adjacent_find(c.snapshots.begin(), c.snapshots.end()) != c.snapshots.end())
            fail("simulation.snapshots", "must be strictly increasing");
        if (c.snapshots.front() < 0 || c.snapshots.back() > c.t_final)
            fail("simulation.snapshots", "must lie within [0, t_final]");
    }
    else
        c.snapshots = geometric_snapshots(c.t_final, count);

    if (auto s = lookup(tree, "simulation.initial"))
    {
        if (*s == "dirac")
            c.initial = InitialLaw::Dirac;
        else if (*s == "equilibrium")
            c.initial = InitialLaw::Equilibrium;
        else if (*s == "heavy-tail")
            c.initial = InitialLaw::HeavyTail;
        else
            fail("simulation.initial", "expected dirac, equilibrium or heavy-tail, got '" + *s + "'");
    }
    if (c.initial == InitialLaw::HeavyTail && torus)
        fail("simulation.initial", "heavy-tail needs a whole-space scenario");
    if (auto s = lookup(tree, "simulation.tail_index"))
    {
        c.tail_index = to_number("simulation.tail_index", *s);
        if (!(c.tail_index > 1))
            fail("simulation.tail_index", "must exceed 1, got " + *s);
    }
    if (auto s = lookup(tree, "simulation.tail_scale"))
    {
        c.tail_scale = to_number("simulation.tail_scale", *s);
        if (!(c.tail_scale > 0))
            fail("simulation.tail_scale", "must be positive, got " + *s);
    }
    for (int i = 0; i < c.d; ++i)
    {
        c.x0[i] = torus ? 0.5 : 1.0;
        c.v0[i] = 1.0;
    }
    if (auto s = lookup(tree, "simulation.x0"))
        c.x0 = to_vec("simulation.x0", *s, c.d);
    if (auto s = lookup(tree, "simulation.v0"))
        c.v0 = to_vec("simulation.v0", *s, c.d);
    if (torus)
        c.x0 = wrap_torus(c.x0, c.d);
    if (auto s = lookup(tree, "simulation.fit_t_min"))
    {
        c.fit_t_min = to_number("simulation.fit_t_min", *s);
        if (c.fit_t_min < 0)
            fail("simulation.fit_t_min", "must be non-negative, got " + *s);
    }

    if (auto s = lookup(tree, "binning.bins"))
        c.bins = static_cast<int>(to_count("binning.bins", *s, 2));
    if (auto s = lookup(tree, "binning.coverage"))
    {
        c.coverage = to_number("binning.coverage", *s);
        if (!(c.coverage > 0) || !(c.coverage < 1))
            fail("binning.coverage", "must lie in (0, 1), got " + *s);
    }
    if (auto s = lookup(tree, "output.dir"))
        c.output_dir = *s;
    return c;
}

} // namespace

const char* to_string(InitialLaw law)
{
    switch (law)
    {
    case InitialLaw::Dirac: return "dirac";
    case InitialLaw::Equilibrium: return "equilibrium";
    case InitialLaw::HeavyTail: return "heavy-tail";
    }
    return "";
}

std::vector<double> geometric_snapshots(double t_final, int count)
{
    std::vector<double> out{0.0};
    double lo = t_final / 200.0;
    for (int i = 0; i < count - 1; ++i)
        out.push_back(count == 2 ? t_final : lo * std::pow(t_final / lo, static_cast<double>(i) / (count - 2)));
    out.back() = t_final;
    return out;
}

ExperimentConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides)
{
    pt::ptree tree;
    std::istringstream in(text);
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    apply_overrides(tree, overrides);
    return from_tree(tree, std::nullopt);
}

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try
    {
        return parse_config_text(ss.str(), overrides);
    }
    catch (const ConfigError& e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

ExperimentConfig default_config(ScenarioKind kind, const ConfigOverrides& overrides)
{
    pt::ptree tree;
    apply_overrides(tree, overrides);
    return from_tree(tree, kind);
}

PotentialPtr make_potential(const ExperimentConfig& c)
{
    if (is_torus(c.scenario))
        return nullptr;
    std::string name = c.potential;
    if (name.empty())
        name = c.scenario == ScenarioKind::SubgeometricBGK         ? "subquadratic"
               : c.scenario == ScenarioKind::SubgeometricBoltzmann ? "sublinear-plus"
                                                                   : "quadratic";
    PotentialPtr phi;
    if (name == "quadratic")
        phi = std::make_shared<QuadraticPotential>(c.potential_c);
    else if (name == "quartic")
        phi = std::make_shared<QuarticPotential>(c.potential_c);
    else if (name == "subquadratic")
        phi = BracketPowerPotential::subquadratic(c.potential_c, c.beta);
    else
        phi = BracketPowerPotential::sublinear_plus(c.potential_c, c.delta);
    if (c.declared_drift)
        phi = std::make_shared<DeclaredDriftPotential>(phi, *c.declared_drift);
    return phi;
}

CollisionKernelSpec make_kernel(const ExperimentConfig& c)
{
    return CollisionKernelSpec::hard_spheres(c.kernel_gamma, c.kernel_b0);
}

Scenario make_scenario(const ExperimentConfig& c)
{
    Scenario s;
    s.kind = c.scenario;
    s.dim = c.d;
    s.potential = make_potential(c);
    s.kernel = make_kernel(c);
    s.beta = c.beta;
    s.delta = c.delta;
    s.flow.dt = c.dt;
    return s;
}

} // namespace kh
