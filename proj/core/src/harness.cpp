#include "selforg/harness.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace selforg {

namespace {

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size())
                lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::string_view strip_comment(std::string_view line)
{
    const auto hash = line.find('#');
    return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

template <typename T>
bool parse_integer(std::string_view s, T& out)
{
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc {} && ptr == end;
}

bool parse_real(std::string_view s, double& out)
{
    // libstdc++ 11 has no floating-point from_chars.
    std::string copy(s);
    char* end = nullptr;
    errno = 0;
    out = std::strtod(copy.c_str(), &end);
    return !copy.empty() && end == copy.c_str() + copy.size() && errno == 0 && std::isfinite(out);
}

std::string format_real(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    return buf;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}

std::vector<AgentId> parse_id_row(std::string_view line, std::size_t line_no)
{
    std::vector<AgentId> ids;
    std::istringstream in { std::string(line) };
    std::string token;
    while (in >> token) {
        AgentId id = 0;
        if (!parse_integer(std::string_view(token), id))
            throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + token + "' is not an agent id");
        ids.push_back(id);
    }
    return ids;
}

std::filesystem::path snapshot_path(const std::filesystem::path& dir, std::size_t generation, std::string_view ext)
{
    return dir / ("snap_" + std::to_string(generation) + std::string(ext));
}

} // namespace

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message)
    , line_(line)
    , key_(std::move(key))
{
}

IoError::IoError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(what + ": " + path.string())
    , path_(path)
{
}

void RunConfig::validate() const
{
    auto fail = [](const char* key, const std::string& msg) { throw ConfigError(0, key, std::string(key) + ": " + msg); };
    if (pool_size < 2)
        fail("pool_size", "the alphabet needs |D| >= 2 agents, got " + std::to_string(pool_size));
    if (request_length < 1)
        fail("request_length", "must be at least 1");
    if (attributes_per_agent < 1)
        fail("attributes_per_agent", "must be at least 1");
    if (attribute_min > attribute_max)
        fail("attribute_min", "must not exceed attribute_max");
    if (crossover_fraction < 0.0 || crossover_fraction > 1.0)
        fail("crossover_fraction", "must be in [0, 1]");
    if (mutation_fraction < 0.0 || mutation_fraction > 1.0)
        fail("mutation_fraction", "must be in [0, 1]");
    if (parsimony_coefficient < 0.0)
        fail("parsimony_coefficient", "must be non-negative");
    if (population_floor < pool_size)
        fail("population_floor", "must be at least pool_size (" + std::to_string(pool_size) + ")");
}

RunConfig parse_config(std::string_view text)
{
    RunConfig config;
    bool have_seed = false;
    std::unordered_set<std::string> seen;

    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::size_t line_no = n + 1;
        const auto line = strip_comment(lines[n]);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, "", "expected 'key = value', got '" + std::string(line) + "'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError(line_no, key, "duplicate key '" + key + "'");

        auto bad = [&](const char* expected) {
            return ConfigError(line_no, key, key + ": expected " + expected + ", got '" + std::string(value) + "'");
        };
        auto as_size = [&](std::size_t& field) {
            if (!parse_integer(value, field))
                throw bad("a non-negative integer");
        };
        auto as_int = [&](int& field) {
            if (!parse_integer(value, field))
                throw bad("an integer");
        };
        auto as_real = [&](double& field) {
            if (!parse_real(value, field))
                throw bad("a real number");
        };

        if (key == "rng_seed") {
            if (!parse_integer(value, config.rng_seed))
                throw bad("an unsigned 64-bit integer");
            have_seed = true;
        } else if (key == "generations") {
            as_size(config.generations);
        } else if (key == "population_floor") {
            as_size(config.population_floor);
        } else if (key == "crossover_fraction") {
            as_real(config.crossover_fraction);
        } else if (key == "mutation_fraction") {
            as_real(config.mutation_fraction);
        } else if (key == "parsimony_coefficient") {
            as_real(config.parsimony_coefficient);
        } else if (key == "mode") {
            if (value == "discriminating")
                config.mode = SelectionMode::discriminating;
            else if (value == "nondiscriminating")
                config.mode = SelectionMode::nondiscriminating;
            else
                throw bad("'discriminating' or 'nondiscriminating'");
        } else if (key == "attribute_min") {
            as_int(config.attribute_min);
        } else if (key == "attribute_max") {
            as_int(config.attribute_max);
        } else if (key == "pool_size") {
            as_size(config.pool_size);
        } else if (key == "attributes_per_agent") {
            as_size(config.attributes_per_agent);
        } else if (key == "request_length") {
            as_size(config.request_length);
        } else if (key == "snapshot_every") {
            as_size(config.snapshot_every);
        } else if (key == "output_dir") {
            if (value.empty())
                throw bad("a path");
            config.output_dir = std::string(value);
        } else {
            throw ConfigError(line_no, key, "unknown key '" + key + "'");
        }
    }

    if (!have_seed)
        throw ConfigError(0, "rng_seed", "missing required key 'rng_seed'");
    config.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_text_file(path));
}

Problem make_problem(const RunConfig& config)
{
    config.validate();
    Rng rng(mix_seed(config.rng_seed));
    std::vector<Agent> agents;
    agents.reserve(config.pool_size);
    for (std::size_t i = 0; i < config.pool_size; ++i) {
        Agent agent { static_cast<AgentId>(i), {} };
        for (std::size_t k = 0; k < config.attributes_per_agent; ++k)
            agent.attributes.push_back(static_cast<int>(rng.uniform_int(config.attribute_min, config.attribute_max)));
        agents.push_back(std::move(agent));
    }
    std::vector<int> required;
    for (std::size_t k = 0; k < config.request_length; ++k)
        required.push_back(static_cast<int>(rng.uniform_int(config.attribute_min, config.attribute_max)));
    return Problem { std::make_shared<const Alphabet>(std::move(agents)), UserRequest(std::move(required)) };
}

EvolutionConfig to_evolution_config(const RunConfig& config, const Problem& problem)
{
    EvolutionConfig evo;
    evo.request = problem.request;
    evo.alphabet = problem.alphabet;
    evo.crossover_fraction = config.crossover_fraction;
    evo.mutation_fraction = config.mutation_fraction;
    evo.parsimony_coefficient = config.parsimony_coefficient;
    evo.population_floor = config.population_floor;
    evo.generations = config.generations;
    evo.rng_seed = config.rng_seed;
    evo.selection = config.mode;
    return evo;
}

std::string format_stats_csv(const std::vector<GenerationStats>& stats)
{
    std::string out(kStatsHeader);
    out += '\n';
    for (const auto& s : stats) {
        out += std::to_string(s.generation);
        out += ',' + format_real(s.max_fitness);
        out += ',' + format_real(s.mean_fitness);
        out += ',' + format_real(s.mean_length);
        out += ',' + std::to_string(s.population_size);
        out += ',' + std::to_string(s.calculable_length);
        out += ',' + (s.complexity ? format_real(*s.complexity) : std::string());
        out += ',' + (s.efficiency ? format_real(*s.efficiency) : std::string());
        out += '\n';
    }
    return out;
}

std::vector<GenerationStats> parse_stats_csv(std::string_view text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines.front()) != kStatsHeader)
        throw std::invalid_argument("stats.csv: missing or unexpected header");

    std::vector<GenerationStats> stats;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto line = trim(lines[n]);
        if (line.empty())
            continue;
        const auto f = split_fields(line, ',');
        auto fail = [&] { return std::invalid_argument("stats.csv: malformed row " + std::to_string(n + 1)); };
        if (f.size() != 8)
            throw fail();
        GenerationStats s;
        if (!parse_integer(f[0], s.generation) || !parse_real(f[1], s.max_fitness) || !parse_real(f[2], s.mean_fitness)
            || !parse_real(f[3], s.mean_length) || !parse_integer(f[4], s.population_size)
            || !parse_integer(f[5], s.calculable_length))
            throw fail();
        double value = 0.0;
        if (!f[6].empty()) {
            if (!parse_real(f[6], value))
                throw fail();
            s.complexity = value;
        }
        if (!f[7].empty()) {
            if (!parse_real(f[7], value))
                throw fail();
            s.efficiency = value;
        }
        stats.push_back(s);
    }
    return stats;
}

void write_stats_csv(const std::vector<GenerationStats>& stats, const std::filesystem::path& path)
{
    if (stats.empty())
        throw std::invalid_argument("no generation stats to write");
    write_text_file(path, format_stats_csv(stats));
}

SnapshotFile make_snapshot(std::size_t generation, const Population& population)
{
    SnapshotFile snap { generation, {} };
    snap.rows.reserve(population.size());
    for (const auto& m : population.members())
        snap.rows.emplace_back(m.symbols().begin(), m.symbols().end());
    return snap;
}

std::string format_snapshot(const SnapshotFile& snapshot)
{
    std::string out;
    for (const auto& row : snapshot.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ' ';
            out += std::to_string(row[i]);
        }
        out += '\n';
    }
    return out;
}

SnapshotFile parse_snapshot(std::size_t generation, std::string_view text)
{
    SnapshotFile snap { generation, {} };
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        if (trim(lines[n]).empty())
            continue;
        snap.rows.push_back(parse_id_row(lines[n], n + 1));
    }
    return snap;
}

Rgb palette_color(AgentId id, std::size_t alphabet_size)
{
    const double hue = 6.0 * static_cast<double>(id % std::max<std::size_t>(alphabet_size, 1)) / static_cast<double>(std::max<std::size_t>(alphabet_size, 1));
    const bool odd = (id % 2) == 1;
    const double sat = odd ? 0.55 : 0.85;
    const double val = odd ? 0.70 : 0.90;

    const int sector = static_cast<int>(hue) % 6;
    const double frac = hue - std::floor(hue);
    const double p = val * (1.0 - sat);
    const double q = val * (1.0 - sat * frac);
    const double t = val * (1.0 - sat * (1.0 - frac));
    double r = 0, g = 0, b = 0;
    switch (sector) {
    case 0: r = val, g = t, b = p; break;
    case 1: r = q, g = val, b = p; break;
    case 2: r = p, g = val, b = t; break;
    case 3: r = p, g = q, b = val; break;
    case 4: r = t, g = p, b = val; break;
    default: r = val, g = p, b = q; break;
    }
    auto channel = [](double c) { return static_cast<std::uint8_t>(std::lround(c * 255.0)); };
    return { channel(r), channel(g), channel(b) };
}

std::string render_snapshot(const SnapshotFile& snapshot, std::size_t alphabet_size)
{
    std::size_t width = 0;
    for (const auto& row : snapshot.rows)
        width = std::max(width, row.size());

    std::string out = "P3\n" + std::to_string(width) + " " + std::to_string(snapshot.rows.size()) + "\n255\n";
    for (const auto& row : snapshot.rows) {
        for (std::size_t col = 0; col < width; ++col) {
            const Rgb c = col < row.size() ? palette_color(row[col], alphabet_size) : Rgb { 255, 255, 255 };
            if (col)
                out += ' ';
            out += std::to_string(c[0]) + ' ' + std::to_string(c[1]) + ' ' + std::to_string(c[2]);
        }
        out += '\n';
    }
    return out;
}

Population parse_population(std::string_view text)
{
    const auto lines = split_lines(text);
    std::size_t alphabet_size = 0;
    std::vector<AgentSequence> members;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = strip_comment(lines[n]);
        if (line.empty())
            continue;
        if (alphabet_size == 0) {
            constexpr std::string_view prefix = "alphabet_size=";
            std::string compact;
            for (char c : line)
                if (c != ' ' && c != '\t')
                    compact += c;
            if (compact.rfind(prefix, 0) != 0 || !parse_integer(std::string_view(compact).substr(prefix.size()), alphabet_size))
                throw std::invalid_argument("line " + std::to_string(n + 1) + ": expected 'alphabet_size=<n>' header");
            if (alphabet_size < 2)
                throw std::invalid_argument("alphabet_size must be at least 2");
            continue;
        }
        members.emplace_back(parse_id_row(line, n + 1));
    }
    if (alphabet_size == 0)
        throw std::invalid_argument("population file has no 'alphabet_size=<n>' header");
    if (members.empty())
        throw std::invalid_argument("population file has no members");
    return Population(Alphabet::of_size(alphabet_size), std::move(members));
}

Population load_population(const std::filesystem::path& path)
{
    return parse_population(read_text_file(path));
}

std::string format_report(const ComplexityReport& report)
{
    std::string out;
    out += "max_length=" + std::to_string(report.max_length) + '\n';
    out += "calculable_length=" + std::to_string(report.calculable_length) + '\n';
    out += "complexity_potential=" + format_real(report.complexity_potential) + '\n';
    out += "complexity=" + format_real(report.complexity) + '\n';
    out += "efficiency=" + format_real(report.efficiency) + '\n';
    out += "per_site_entropy=";
    for (std::size_t i = 0; i < report.per_site_entropy.size(); ++i)
        out += (i ? "," : "") + format_real(report.per_site_entropy[i]);
    out += '\n';
    return out;
}

ExperimentResult run_experiment(const RunConfig& config, std::ostream& out)
{
    config.validate();
    const Problem problem = make_problem(config);
    const EvolutionConfig evo = to_evolution_config(config, problem);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec)
        throw IoError(config.output_dir, "cannot create output directory (" + ec.message() + ")");

    RunResult result = run(evo, config.snapshot_every);

    write_stats_csv(result.stats, config.output_dir / "stats.csv");
    for (const auto& [generation, population] : result.snapshots) {
        const auto snap = make_snapshot(generation, population);
        write_text_file(snapshot_path(config.output_dir, generation, ".txt"), format_snapshot(snap));
        write_text_file(snapshot_path(config.output_dir, generation, ".ppm"), render_snapshot(snap, problem.alphabet->size()));
    }

    const auto& last = result.stats.back();
    out << "generations=" << last.generation << '\n';
    out << "final_max_fitness=" << format_real(last.max_fitness) << '\n';
    out << "final_efficiency=" << (last.efficiency ? format_real(*last.efficiency) : std::string("unmeasurable")) << '\n';
    return ExperimentResult { std::move(result), problem };
}

void write_text_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError(path, "cannot open for writing");
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.close();
    if (!file)
        throw IoError(path, "write failed");
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw IoError(path, "cannot open for reading");
    std::ostringstream buf;
    buf << file.rdbuf();
    if (file.bad())
        throw IoError(path, "read failed");
    return buf.str();
}

} // namespace selforg
