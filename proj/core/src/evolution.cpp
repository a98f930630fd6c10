#include "selforg/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace selforg {

namespace {

constexpr std::size_t kMinSeedLength = 1;
constexpr std::size_t kMaxSeedLength = 5;

// k distinct indices from [0, n), in random order (partial Fisher-Yates).
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t { 0 });
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

std::size_t operator_count(double fraction, std::size_t n)
{
    // 0.1 * 30 must give 3, not 2.
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

} // namespace

void EvolutionConfig::validate() const
{
    if (!alphabet)
        throw std::invalid_argument("evolution config has no alphabet");
    auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
    if (!in_unit(crossover_fraction))
        throw std::invalid_argument("crossover_fraction must be in [0, 1]");
    if (!in_unit(mutation_fraction))
        throw std::invalid_argument("mutation_fraction must be in [0, 1]");
    if (!std::isfinite(parsimony_coefficient) || parsimony_coefficient < 0.0)
        throw std::invalid_argument("parsimony_coefficient must be a non-negative number");
    if (population_floor < alphabet->size())
        throw std::invalid_argument("population_floor (" + std::to_string(population_floor)
            + ") must be at least the alphabet size (" + std::to_string(alphabet->size()) + ")");
}

double fitness(const AgentSequence& individual, const UserRequest& request, const Alphabet& alphabet)
{
    std::int64_t distance = 0;
    for (int r : request.required()) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (AgentId id : individual.symbols()) {
            for (int a : alphabet[id].attributes)
                best = std::min(best, std::abs(static_cast<std::int64_t>(r) - a));
        }
        distance += best;
    }
    return 1.0 / (1.0 + static_cast<double>(distance));
}

double parsimony_adjusted_fitness(double raw, std::size_t length, double mean_length, double coefficient)
{
    const double excess = std::max(0.0, static_cast<double>(length) - mean_length);
    return raw / (1.0 + coefficient * excess);
}

Population select(const Population& population, std::span<const double> weights, std::size_t target_size, Rng& rng)
{
    if (target_size < 1)
        throw std::invalid_argument("selection target size must be at least 1");
    if (weights.size() != population.size() || population.empty())
        throw std::invalid_argument("selection weights must align with a non-empty population");

    std::vector<double> cumulative(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw std::invalid_argument("selection weights must be positive and finite");
        total += weights[i];
        cumulative[i] = total;
    }

    const auto members = population.members();
    std::vector<AgentSequence> chosen;
    chosen.reserve(target_size);
    for (std::size_t n = 0; n < target_size; ++n) {
        const double spin = rng.uniform_real() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), spin);
        if (it == cumulative.end())
            --it;
        chosen.push_back(members[static_cast<std::size_t>(it - cumulative.begin())]);
    }
    return Population(population.shared_alphabet(), std::move(chosen));
}

std::pair<AgentSequence, AgentSequence> crossover_at(const AgentSequence& first, const AgentSequence& second, std::size_t cut)
{
    const std::size_t shortest = std::min(first.length(), second.length());
    if (cut < 1 || cut >= shortest)
        throw std::out_of_range("crossover cut " + std::to_string(cut) + " outside [1, " + std::to_string(shortest - 1) + "]");

    auto a = first.symbols();
    auto b = second.symbols();
    std::vector<AgentId> child1(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut));
    child1.insert(child1.end(), b.begin() + static_cast<std::ptrdiff_t>(cut), b.end());
    std::vector<AgentId> child2(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(cut));
    child2.insert(child2.end(), a.begin() + static_cast<std::ptrdiff_t>(cut), a.end());
    return { AgentSequence(std::move(child1)), AgentSequence(std::move(child2)) };
}

std::pair<AgentSequence, AgentSequence> crossover_pair(const AgentSequence& first, const AgentSequence& second, Rng& rng)
{
    const std::size_t shortest = std::min(first.length(), second.length());
    if (shortest < 2)
        return { first, second };
    const auto cut = 1 + static_cast<std::size_t>(rng.uniform_index(shortest - 1));
    return crossover_at(first, second, cut);
}

MutationOutcome mutate_traced(const AgentSequence& individual, const Alphabet& alphabet, Rng& rng)
{
    const auto drawn = static_cast<MutationKind>(rng.uniform_index(3));
    auto applied = drawn;
    if (applied == MutationKind::erase && individual.length() == 1)
        applied = MutationKind::replace;

    auto src = individual.symbols();
    std::vector<AgentId> symbols(src.begin(), src.end());
    const std::size_t len = symbols.size();
    switch (applied) {
    case MutationKind::insert: {
        const auto pos = static_cast<std::ptrdiff_t>(rng.uniform_index(len + 1));
        const auto symbol = static_cast<AgentId>(rng.uniform_index(alphabet.size()));
        symbols.insert(symbols.begin() + pos, symbol);
        break;
    }
    case MutationKind::replace: {
        const auto pos = static_cast<std::size_t>(rng.uniform_index(len));
        auto symbol = static_cast<AgentId>(rng.uniform_index(alphabet.size() - 1));
        if (symbol >= symbols[pos])
            ++symbol;
        symbols[pos] = symbol;
        break;
    }
    case MutationKind::erase: {
        const auto pos = static_cast<std::ptrdiff_t>(rng.uniform_index(len));
        symbols.erase(symbols.begin() + pos);
        break;
    }
    }
    return { AgentSequence(std::move(symbols)), drawn, applied };
}

AgentSequence mutate(const AgentSequence& individual, const Alphabet& alphabet, Rng& rng)
{
    return mutate_traced(individual, alphabet, rng).sequence;
}

std::size_t target_population_size(double mean_length, std::size_t alphabet_size, std::size_t floor)
{
    if (!(mean_length >= 1.0))
        throw std::invalid_argument("mean length must be at least 1");
    const double wanted = std::ceil(static_cast<double>(alphabet_size) * mean_length);
    return std::max(floor, static_cast<std::size_t>(wanted));
}

std::size_t target_population_size(std::size_t total_length, std::size_t members, std::size_t alphabet_size, std::size_t floor)
{
    if (members == 0 || total_length < members)
        throw std::invalid_argument("mean length must be at least 1");
    const std::size_t scaled = alphabet_size * total_length;
    return std::max(floor, (scaled + members - 1) / members);
}

GenerationStats measure_generation(const EvolutionState& state, const EvolutionConfig& config)
{
    const auto& population = state.population;
    GenerationStats stats;
    stats.generation = state.generation;
    stats.population_size = population.size();
    stats.mean_length = population.mean_length();

    double sum = 0.0;
    for (const auto& member : population.members()) {
        const double f = fitness(member, config.request, population.alphabet());
        stats.max_fitness = std::max(stats.max_fitness, f);
        sum += f;
    }
    stats.mean_fitness = sum / static_cast<double>(population.size());

    if (auto report = try_measure(population)) {
        stats.calculable_length = report->calculable_length;
        stats.complexity = report->complexity;
        stats.efficiency = report->efficiency;
    }
    return stats;
}

EvolutionState initial_state(const EvolutionConfig& config)
{
    config.validate();
    Rng rng(config.rng_seed);
    const std::size_t symbols = config.alphabet->size();
    std::vector<AgentSequence> members;
    members.reserve(config.population_floor);
    for (std::size_t n = 0; n < config.population_floor; ++n) {
        const auto length = static_cast<std::size_t>(rng.uniform_int(kMinSeedLength, kMaxSeedLength));
        std::vector<AgentId> seq(length);
        for (auto& s : seq)
            s = static_cast<AgentId>(rng.uniform_index(symbols));
        members.emplace_back(std::move(seq));
    }
    return EvolutionState { 0, Population(config.alphabet, std::move(members)), rng };
}

std::pair<EvolutionState, GenerationStats> step_generation(const EvolutionState& state, const EvolutionConfig& config)
{
    const auto& current = state.population;
    const auto& alphabet = current.alphabet();
    const double mean_length = current.mean_length();

    std::vector<double> weights(current.size(), 1.0);
    if (config.selection == SelectionMode::discriminating) {
        for (std::size_t i = 0; i < current.size(); ++i) {
            const auto& member = current.members()[i];
            const double raw = fitness(member, config.request, alphabet);
            weights[i] = parsimony_adjusted_fitness(raw, member.length(), mean_length, config.parsimony_coefficient);
        }
    }

    Rng rng = state.rng;
    const std::size_t target = target_population_size(current.total_length(), current.size(), alphabet.size(), config.population_floor);
    const Population survivors = select(current, weights, target, rng);
    auto span = survivors.members();
    std::vector<AgentSequence> next(span.begin(), span.end());

    const std::size_t crossing = operator_count(config.crossover_fraction, target) & ~std::size_t { 1 };
    const auto parents = sample_distinct(target, crossing, rng);
    for (std::size_t i = 0; i + 1 < parents.size(); i += 2) {
        auto [child1, child2] = crossover_pair(next[parents[i]], next[parents[i + 1]], rng);
        next[parents[i]] = std::move(child1);
        next[parents[i + 1]] = std::move(child2);
    }

    const auto mutants = sample_distinct(target, operator_count(config.mutation_fraction, target), rng);
    for (std::size_t idx : mutants)
        next[idx] = mutate(next[idx], alphabet, rng);

    EvolutionState successor { state.generation + 1, Population(current.shared_alphabet(), std::move(next)), rng };
    auto stats = measure_generation(successor, config);
    return { std::move(successor), std::move(stats) };
}

RunResult run(const EvolutionConfig& config, std::size_t snapshot_every)
{
    EvolutionState state = initial_state(config);
    RunResult result { {}, state, {} };
    result.stats.reserve(config.generations + 1);
    result.stats.push_back(measure_generation(state, config));

    auto keep = [&](const EvolutionState& s, bool last) {
        if (snapshot_every > 0 && (s.generation % snapshot_every == 0 || last))
            result.snapshots.insert_or_assign(s.generation, s.population);
    };
    keep(state, config.generations == 0);

    for (std::size_t g = 0; g < config.generations; ++g) {
        auto [next, stats] = step_generation(state, config);
        state = std::move(next);
        result.stats.push_back(std::move(stats));
        keep(state, g + 1 == config.generations);
    }
    result.final_state = std::move(state);
    return result;
}

} // namespace selforg
