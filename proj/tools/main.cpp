#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinetic_harris/config.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/experiment.hpp"

namespace {

// A config path, or a scenario name followed by key=value settings.
kh::ExperimentConfig resolve(const std::string& source, const std::vector<std::string>& settings)
{
    kh::ConfigOverrides overrides;
    for (const auto& s : settings)
    {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw kh::ConfigError("expected key=value, got '" + s + "'");
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!std::filesystem::exists(source))
        if (auto kind = kh::scenario_from_string(source))
            return kh::default_config(*kind, overrides);
    return kh::load_config(source, overrides);
}

int workers_from_env()
{
    const char* s = std::getenv("KINETIC_HARRIS_WORKERS");
    if (!s || !*s)
        return 0;
    try
    {
        return std::max(0, std::stoi(s));
    }
    catch (const std::exception&)
    {
        return 0;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"kinetic-harris: certified convergence rates for kinetic velocity-jump processes"};
    app.require_subcommand(1);
    int workers = workers_from_env();
    app.add_option("--workers", workers, "OpenMP worker count (0 = default; env KINETIC_HARRIS_WORKERS)")
        ->check(CLI::NonNegativeNumber);

    std::string source;
    std::vector<std::string> settings;
    auto add_args = [&](CLI::App* sub) {
        sub->add_option("config", source, "config file or scenario name")->required();
        sub->add_option("settings", settings, "key=value overrides");
    };
    auto* run = app.add_subcommand("run", "certificate, simulation, distances, fits and reports");
    auto* validate = app.add_subcommand("validate", "check drift parameters, kernel and binning");
    auto* cert = app.add_subcommand("certificate", "certificate audit only");
    add_args(run);
    add_args(validate);
    add_args(cert);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : kh::exit_config;
    }

    kh::ExperimentConfig config;
    try
    {
        config = resolve(source, settings);
    }
    catch (const kh::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kh::exit_config;
    }

    kh::Execution exec;
    exec.workers = workers;
    if (*run)
        return kh::command_run(config, exec, std::cout, std::cerr);
    if (*validate)
        return kh::command_validate(config, std::cout);
    return kh::command_certificate(config, std::cout, std::cerr);
}
