#pragma once

// Experiment orchestration and file formats: key=value run configs,
// stats.csv, population snapshots, P3 pixmaps and population files for
// one-shot analysis.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selforg/core.hpp"
#include "selforg/evolution.hpp"

namespace selforg {

/// Process exit codes of the command line tool.
enum class ExitCode : int {
    success = 0,
    config_error = 1,
    runtime_error = 2,
    io_error = 3,
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::string key, const std::string& message);

    /// 1-based line of the offending entry, 0 when the error is not tied to
    /// one line (missing key, cross-field constraint).
    std::size_t line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::filesystem::path& path, const std::string& what);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// Everything needed to run one experiment. The alphabet and request are
/// derived from rng_seed by make_problem().
struct RunConfig {
    std::uint64_t rng_seed = 0;
    std::size_t generations = 300;
    std::size_t population_floor = 64;
    double crossover_fraction = 0.10;
    double mutation_fraction = 0.10;
    double parsimony_coefficient = 0.2;
    SelectionMode mode = SelectionMode::discriminating;
    int attribute_min = 0;
    int attribute_max = 29;
    std::size_t pool_size = 32;
    std::size_t attributes_per_agent = 2;
    std::size_t request_length = 12;
    std::size_t snapshot_every = 0;
    std::filesystem::path output_dir = "out";

    void validate() const;
};

/// Parses a `key = value` document. Blank lines and `#` comments are
/// ignored; `rng_seed` is required, every other key is optional.
///
/// Keys: rng_seed, generations, population_floor, crossover_fraction,
/// mutation_fraction, parsimony_coefficient, mode (discriminating |
/// nondiscriminating), attribute_min, attribute_max, pool_size,
/// attributes_per_agent, request_length, snapshot_every, output_dir.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

struct Problem {
    std::shared_ptr<const Alphabet> alphabet;
    UserRequest request;
};

/// Draws the agent pool and the user request from a stream derived from
/// the run seed (independent of the evolution stream).
Problem make_problem(const RunConfig& config);

EvolutionConfig to_evolution_config(const RunConfig& config, const Problem& problem);

inline constexpr std::string_view kStatsHeader
    = "generation,max_fitness,mean_fitness,mean_length,population_size,calculable_length,complexity,efficiency";

std::string format_stats_csv(const std::vector<GenerationStats>& stats);
std::vector<GenerationStats> parse_stats_csv(std::string_view text);
void write_stats_csv(const std::vector<GenerationStats>& stats, const std::filesystem::path& path);

struct SnapshotFile {
    std::size_t generation = 0;
    std::vector<std::vector<AgentId>> rows;
};

SnapshotFile make_snapshot(std::size_t generation, const Population& population);
std::string format_snapshot(const SnapshotFile& snapshot);
SnapshotFile parse_snapshot(std::size_t generation, std::string_view text);

using Rgb = std::array<std::uint8_t, 3>;

/// Colour of agent `id`: hue id / alphabet_size around the colour wheel,
/// with saturation and value alternating between two levels on odd and even
/// ids. Value never exceeds 0.9, so no agent renders white.
Rgb palette_color(AgentId id, std::size_t alphabet_size);

/// Plain-text P3 pixmap: one row per member, one pixel per site, rows
/// left-aligned and padded on the right with white.
std::string render_snapshot(const SnapshotFile& snapshot, std::size_t alphabet_size);

/// Population file: an `alphabet_size=<n>` header line followed by one
/// member per line as space-separated agent ids. Blank lines and `#`
/// comments are skipped. Throws std::invalid_argument on malformed input.
Population parse_population(std::string_view text);
Population load_population(const std::filesystem::path& path);

std::string format_report(const ComplexityReport& report);

struct ExperimentResult {
    RunResult run;
    Problem problem;
};

/// Runs the experiment, writes stats.csv plus snap_<g>.txt / snap_<g>.ppm
/// into output_dir, and prints the final efficiency and maximum fitness to
/// `out`. Throws ConfigError or IoError.
ExperimentResult run_experiment(const RunConfig& config, std::ostream& out);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace selforg
