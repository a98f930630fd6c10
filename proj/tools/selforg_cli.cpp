// selforg: run self-organisation experiments and measure populations.
//
//   selforg run --config experiment.cfg
//   selforg analyze --population members.txt
//   selforg --version

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "selforg/complexity.hpp"
#include "selforg/harness.hpp"

using namespace selforg;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

int run_command(const std::string& config_path)
{
    RunConfig config;
    try {
        config = load_config(config_path);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::io_error);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::config_error);
    }

    try {
        run_experiment(config, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::config_error);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::io_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::runtime_error);
    }
    return code(ExitCode::success);
}

int analyze_command(const std::string& population_path)
{
    std::string text;
    try {
        text = read_text_file(population_path);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::io_error);
    }

    try {
        const Population population = parse_population(text);
        std::cout << format_report(physical_complexity_variable(population));
    } catch (const UnmeasurablePopulation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::runtime_error);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << population_path << ": " << e.what() << '\n';
        return code(ExitCode::config_error);
    }
    return code(ExitCode::success);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Physical complexity and efficiency of evolving agent populations" };
    app.set_version_flag("--version", std::string("selforg ") + SELFORG_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an evolution experiment and write stats.csv and snapshots");
    run->add_option("--config", config_path, "key=value experiment config")->required();

    std::string population_path;
    auto* analyze = app.add_subcommand("analyze", "Print the complexity report of a population file");
    analyze->add_option("--population", population_path, "population file (alphabet_size=<n> header, one member per line)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? 0 : code(ExitCode::config_error);
    }

    if (*run)
        return run_command(config_path);
    return analyze_command(population_path);
}
