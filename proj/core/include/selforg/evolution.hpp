#pragma once

// Evolution of variable-length agent sequences towards a user request:
// fitness-proportional non-elitist selection, one-point crossover and
// insert/replace/delete point mutation, with a parsimony penalty on
// longer-than-average sequences and a population size that follows the
// mean sequence length.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "selforg/complexity.hpp"
#include "selforg/core.hpp"
#include "selforg/random.hpp"

namespace selforg {

enum class SelectionMode {
    discriminating,
    /// Every member gets survival weight 1; everything else is unchanged.
    nondiscriminating,
};

struct EvolutionConfig {
    UserRequest request { std::vector<int> { 0 } };
    std::shared_ptr<const Alphabet> alphabet;
    double crossover_fraction = 0.10;
    double mutation_fraction = 0.10;
    double parsimony_coefficient = 0.2;
    std::size_t population_floor = 64;
    std::size_t generations = 300;
    std::uint64_t rng_seed = 0;
    SelectionMode selection = SelectionMode::discriminating;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

struct EvolutionState {
    std::size_t generation = 0;
    Population population;
    Rng rng;
};

struct GenerationStats {
    std::size_t generation = 0;
    double max_fitness = 0.0;
    double mean_fitness = 0.0;
    double mean_length = 0.0;
    std::size_t population_size = 0;
    std::size_t calculable_length = 0;
    /// Empty when the population is unmeasurable.
    std::optional<double> complexity;
    std::optional<double> efficiency;

    friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

/// 1 / (1 + sum over r of |r - a|), where a is the attribute closest to r
/// among the pooled attributes of every agent in the sequence.
double fitness(const AgentSequence& individual, const UserRequest& request, const Alphabet& alphabet);

/// raw / (1 + coefficient * max(0, length - mean_length)).
double parsimony_adjusted_fitness(double raw, std::size_t length, double mean_length, double coefficient);

/// Roulette-wheel sampling with replacement. Weights must be positive and
/// aligned with the members.
Population select(const Population& population, std::span<const double> weights, std::size_t target_size, Rng& rng);

/// One-point crossover at a cut drawn uniformly from [1, min_length - 1].
/// Parents shorter than 2 are returned unchanged without consuming the rng.
std::pair<AgentSequence, AgentSequence> crossover_pair(const AgentSequence& first, const AgentSequence& second, Rng& rng);

/// Crossover at an explicit cut: both children keep their first `cut`
/// symbols and swap the tails.
std::pair<AgentSequence, AgentSequence> crossover_at(const AgentSequence& first, const AgentSequence& second, std::size_t cut);

enum class MutationKind { insert, replace, erase };

struct MutationOutcome {
    AgentSequence sequence;
    /// Kind drawn from the uniform three-way choice.
    MutationKind drawn;
    /// Kind actually applied; an erase on a length-1 sequence becomes a replace.
    MutationKind applied;
};

/// Applies one point mutation. Inserted symbols are uniform over the
/// alphabet; a replacement is uniform over the symbols other than the
/// current one, so the result always differs from the input.
MutationOutcome mutate_traced(const AgentSequence& individual, const Alphabet& alphabet, Rng& rng);
AgentSequence mutate(const AgentSequence& individual, const Alphabet& alphabet, Rng& rng);

/// max(floor, ceil(alphabet_size * mean_length)).
std::size_t target_population_size(double mean_length, std::size_t alphabet_size, std::size_t floor);

/// Exact integer form used by the generation loop: mean length given as
/// total_length / members.
std::size_t target_population_size(std::size_t total_length, std::size_t members, std::size_t alphabet_size, std::size_t floor);

/// Fitness and complexity statistics of the state's current population.
GenerationStats measure_generation(const EvolutionState& state, const EvolutionConfig& config);

/// Seeds a population of population_floor members with uniform lengths in
/// [1, 5] and uniform symbols.
EvolutionState initial_state(const EvolutionConfig& config);

/// One generation: fitness, parsimony, selection to the dynamic target size,
/// crossover on a random even-sized subset, mutation on a random subset,
/// then measurement of the resulting population.
std::pair<EvolutionState, GenerationStats> step_generation(const EvolutionState& state, const EvolutionConfig& config);

struct RunResult {
    std::vector<GenerationStats> stats;
    EvolutionState final_state;
    /// Populations keyed by generation, per the snapshot cadence.
    std::map<std::size_t, Population> snapshots;
};

/// Runs config.generations steps from initial_state. With snapshot_every > 0
/// the populations at every multiple of it, and at the final generation,
/// are kept.
RunResult run(const EvolutionConfig& config, std::size_t snapshot_every = 0);

} // namespace selforg
