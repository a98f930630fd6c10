#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "selforg/evolution.hpp"
#include "test_util.hpp"

using namespace selforg;
using namespace selforg::testing;

namespace {

// Agent i carries the attributes listed at position i.
std::shared_ptr<const Alphabet> alphabet_with(std::vector<std::vector<int>> attrs)
{
    std::vector<Agent> agents;
    for (std::size_t i = 0; i < attrs.size(); ++i)
        agents.push_back(Agent { static_cast<AgentId>(i), attrs[i] });
    return std::make_shared<const Alphabet>(std::move(agents));
}

EvolutionConfig small_config(std::uint64_t seed)
{
    EvolutionConfig cfg;
    cfg.alphabet = alphabet_with({ { 1, 4 }, { 2, 8 }, { 3, 3 }, { 5, 9 }, { 0, 7 }, { 6, 6 } });
    cfg.request = UserRequest({ 1, 5, 8 });
    cfg.population_floor = 12;
    cfg.generations = 40;
    cfg.rng_seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("fitness reference values")
{
    const auto alphabet = alphabet_with({ { 3 }, { 5 }, { 6 }, { 2, 9 } });
    CHECK(fitness(AgentSequence { 0, 1 }, UserRequest({ 3, 5 }), *alphabet) == 1.0);
    CHECK(fitness(AgentSequence { 2 }, UserRequest({ 4 }), *alphabet) == doctest::Approx(1.0 / 3.0));
    CHECK(fitness(AgentSequence { 3 }, UserRequest({ 2, 7 }), *alphabet) == doctest::Approx(1.0 / 3.0));
    // Attributes are pooled over every agent in the sequence.
    CHECK(fitness(AgentSequence { 2, 3 }, UserRequest({ 2, 6, 9 }), *alphabet) == 1.0);
}

TEST_CASE("parsimony penalises only above-mean lengths")
{
    CHECK(parsimony_adjusted_fitness(0.8, 3, 5.0, 0.1) == 0.8);
    CHECK(parsimony_adjusted_fitness(0.8, 7, 5.0, 0.1) == doctest::Approx(0.8 / 1.2));
    CHECK(parsimony_adjusted_fitness(0.37, 4, 4.0, 3.0) == 0.37);
    CHECK(parsimony_adjusted_fitness(0.5, 9, 2.0, 0.0) == 0.5);

    double prev = 1.0;
    for (std::size_t len = 6; len < 30; ++len) {
        const double f = parsimony_adjusted_fitness(1.0, len, 5.0, 0.1);
        CHECK(f < prev);
        CHECK(f > 0.0);
        prev = f;
    }
}

TEST_CASE("select")
{
    const auto alphabet = Alphabet::of_size(3);
    Rng rng(42);

    SUBCASE("single member is copied target times")
    {
        const Population one(alphabet, { AgentSequence { 1, 2 } });
        const std::vector<double> w { 0.3 };
        const auto out = select(one, w, 7, rng);
        CHECK(out.size() == 7);
        for (const auto& m : out.members())
            CHECK(m == AgentSequence { 1, 2 });
    }
    SUBCASE("a near-zero weight almost never survives")
    {
        const Population two(alphabet, { AgentSequence { 0 }, AgentSequence { 1 } });
        const std::vector<double> w { 0.9, 1e-9 };
        const auto out = select(two, w, 100, rng);
        const auto first = std::count(out.members().begin(), out.members().end(), AgentSequence { 0 });
        CHECK(first >= 95);
        CHECK(first <= 100);
    }
    SUBCASE("precondition failures")
    {
        const Population two(alphabet, { AgentSequence { 0 }, AgentSequence { 1 } });
        const std::vector<double> w { 1.0, 1.0 };
        const std::vector<double> zero { 1.0, 0.0 };
        const std::vector<double> shortw { 1.0 };
        CHECK_THROWS_AS(select(two, w, 0, rng), std::invalid_argument);
        CHECK_THROWS_AS(select(two, zero, 3, rng), std::invalid_argument);
        CHECK_THROWS_AS(select(two, shortw, 3, rng), std::invalid_argument);
    }
}

TEST_CASE("uniform roulette frequencies pass a chi-square test")
{
    const std::size_t k = 10;
    std::vector<AgentSequence> members;
    for (std::size_t i = 0; i < k; ++i)
        members.push_back(AgentSequence(std::vector<AgentId>(i + 1, 0)));
    const Population pop(Alphabet::of_size(2), members);
    const std::vector<double> weights(k, 0.25);
    Rng rng(9);
    const auto out = select(pop, weights, 10000, rng);
    std::vector<double> observed(k, 0.0);
    for (const auto& m : out.members())
        observed[m.length() - 1] += 1;
    double stat = 0;
    for (double o : observed)
        stat += (o - 1000.0) * (o - 1000.0) / 1000.0;
    const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(k - 1), stat));
    CHECK(p > 0.01);
    for (double o : observed)
        CHECK(std::abs(o - 1000.0) <= 3 * std::sqrt(10000 * 0.1 * 0.9));
}

TEST_CASE("crossover swaps tails at the cut")
{
    const AgentSequence a { 0, 1, 2 };
    const AgentSequence x { 5, 6, 7 };
    auto [c1, c2] = crossover_at(a, x, 1);
    CHECK(c1 == AgentSequence { 0, 6, 7 });
    CHECK(c2 == AgentSequence { 5, 1, 2 });

    Rng rng(1);
    const Rng before = rng;
    auto [u1, u2] = crossover_pair(AgentSequence { 0 }, x, rng);
    CHECK(u1 == AgentSequence { 0 });
    CHECK(u2 == x);
    CHECK(rng == before);

    CHECK_THROWS_AS(crossover_at(a, x, 0), std::out_of_range);
    CHECK_THROWS_AS(crossover_at(a, x, 3), std::out_of_range);
}

TEST_CASE("crossover child lengths for every cut of short parents")
{
    // Hand computation: child1 = p + (len2 - p) = len2, child2 = len1.
    for (std::size_t len1 = 2; len1 <= 5; ++len1) {
        for (std::size_t len2 = 2; len2 <= 5; ++len2) {
            const AgentSequence a(std::vector<AgentId>(len1, 1));
            const AgentSequence b(std::vector<AgentId>(len2, 2));
            for (std::size_t cut = 1; cut < std::min(len1, len2); ++cut) {
                auto [c1, c2] = crossover_at(a, b, cut);
                CHECK(c1.length() == len2);
                CHECK(c2.length() == len1);
                CHECK(std::count(c1.symbols().begin(), c1.symbols().end(), 1u) == static_cast<long>(cut));
                CHECK(std::count(c2.symbols().begin(), c2.symbols().end(), 2u) == static_cast<long>(cut));
            }
        }
    }
}

TEST_CASE("crossover_pair draws every valid cut")
{
    const AgentSequence a { 0, 0, 0, 0, 0 };
    const AgentSequence b { 1, 1, 1, 1 };
    Rng rng(3);
    std::map<std::size_t, int> cuts;
    for (int i = 0; i < 3000; ++i) {
        auto [c1, c2] = crossover_pair(a, b, rng);
        cuts[static_cast<std::size_t>(std::count(c1.symbols().begin(), c1.symbols().end(), 0u))]++;
    }
    CHECK(cuts.size() == 3);
    for (auto [cut, n] : cuts) {
        CHECK(cut >= 1);
        CHECK(cut <= 3);
        CHECK(n > 850);
    }
}

TEST_CASE("mutation of a length-1 sequence never deletes")
{
    const auto alphabet = Alphabet::of_size(4);
    Rng rng(17);
    int remapped = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto out = mutate_traced(AgentSequence { 2 }, alphabet, rng);
        CHECK(out.sequence.length() >= 1);
        if (out.drawn == MutationKind::erase) {
            ++remapped;
            CHECK(out.applied == MutationKind::replace);
            CHECK(out.sequence.length() == 1);
            CHECK(out.sequence.at_site(1) != 2);
        }
    }
    CHECK(remapped > 0);
}

TEST_CASE("mutation kinds are drawn uniformly")
{
    const auto alphabet = Alphabet::of_size(5);
    Rng rng(2024);
    std::map<MutationKind, int> counts;
    const AgentSequence base { 0, 1, 2, 3 };
    const int n = 30000;
    for (int i = 0; i < n; ++i)
        counts[mutate_traced(base, alphabet, rng).drawn]++;
    for (auto kind : { MutationKind::insert, MutationKind::replace, MutationKind::erase }) {
        const double freq = static_cast<double>(counts[kind]) / n;
        CHECK(freq >= 0.323);
        CHECK(freq <= 0.343);
    }
}

TEST_CASE("mutation changes exactly one site")
{
    const auto alphabet = Alphabet::of_size(3);
    Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        const auto in = random_sequence(rng, 3, 8);
        const auto out = mutate(in, alphabet, rng);
        CHECK(edit_distance(in.symbols(), out.symbols()) == 1);
        const auto delta = static_cast<long>(out.length()) - static_cast<long>(in.length());
        CHECK(std::abs(delta) <= 1);
    }
}

TEST_CASE("target_population_size")
{
    CHECK(target_population_size(5.0, 3, 10) == 15);
    CHECK(target_population_size(1.0, 3, 10) == 10);
    CHECK(target_population_size(6.4, 4, 10) == 26);
    CHECK_THROWS_AS(target_population_size(0.5, 3, 10), std::invalid_argument);

    // Integer form: 32 sites over 5 members is a mean of 6.4.
    CHECK(target_population_size(32, 5, 4, 10) == 26);
    CHECK(target_population_size(25, 5, 3, 10) == 15);
    for (std::size_t total = 10; total < 200; total += 7)
        CHECK(target_population_size(total, 10, 3, 4) == target_population_size(total / 10.0, 3, 4));
}

TEST_CASE("config validation")
{
    auto cfg = small_config(1);
    CHECK_NOTHROW(cfg.validate());
    cfg.crossover_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(1);
    cfg.population_floor = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(1);
    cfg.parsimony_coefficient = -1;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = small_config(1);
    cfg.alphabet.reset();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("initial population is seeded with lengths in [1, 5]")
{
    const auto cfg = small_config(4);
    const auto state = initial_state(cfg);
    CHECK(state.generation == 0);
    CHECK(state.population.size() == cfg.population_floor);
    for (const auto& m : state.population.members()) {
        CHECK(m.length() >= 1);
        CHECK(m.length() <= 5);
    }
}

TEST_CASE("perfect identical population is a fixed point without operators")
{
    EvolutionConfig cfg;
    cfg.alphabet = alphabet_with({ { 1 }, { 2 } });
    cfg.request = UserRequest({ 1, 2 });
    cfg.population_floor = 4;
    cfg.crossover_fraction = 0.0;
    cfg.mutation_fraction = 0.0;
    const EvolutionState start { 0, Population(cfg.alphabet, std::vector<AgentSequence>(4, AgentSequence { 0, 1 })), Rng(1) };
    auto [next, stats] = step_generation(start, cfg);
    CHECK(next.generation == 1);
    CHECK(next.population == start.population);
    CHECK(stats.generation == 1);
    CHECK(stats.max_fitness == 1.0);
    CHECK(stats.mean_fitness == 1.0);
    REQUIRE(stats.efficiency.has_value());
    CHECK(*stats.efficiency == 1.0);
}

TEST_CASE("step_generation is deterministic and sizes the population from the mean length")
{
    const auto cfg = small_config(11);
    auto state = initial_state(cfg);
    for (int g = 0; g < 25; ++g) {
        const auto expected = target_population_size(state.population.mean_length(), cfg.alphabet->size(), cfg.population_floor);
        auto [a, sa] = step_generation(state, cfg);
        auto [b, sb] = step_generation(state, cfg);
        CHECK(a.population.size() == expected);
        CHECK(sa == sb);
        CHECK(std::equal(a.population.members().begin(), a.population.members().end(), b.population.members().begin()));
        CHECK(a.rng == b.rng);
        CHECK(sa.max_fitness >= sa.mean_fitness);
        state = std::move(a);
    }
}

TEST_CASE("nondiscriminating mode only changes selection weights")
{
    // With every member a perfect, equal-length match both modes feed the
    // roulette identical weights, so the trajectories must coincide.
    EvolutionConfig cfg;
    cfg.alphabet = alphabet_with({ { 1 }, { 2 }, { 1, 2 } });
    cfg.request = UserRequest({ 1, 2 });
    cfg.population_floor = 20;
    cfg.crossover_fraction = 0.5;
    cfg.mutation_fraction = 0.5;
    std::vector<AgentSequence> members;
    for (int i = 0; i < 20; ++i)
        members.push_back(i % 2 ? AgentSequence { 0, 1 } : AgentSequence { 2, 2 });
    const EvolutionState start { 0, Population(cfg.alphabet, members), Rng(5) };

    auto baseline = cfg;
    baseline.selection = SelectionMode::nondiscriminating;
    auto [a, sa] = step_generation(start, cfg);
    auto [b, sb] = step_generation(start, baseline);
    CHECK(sa == sb);
    CHECK(a.rng == b.rng);
    CHECK(std::equal(a.population.members().begin(), a.population.members().end(), b.population.members().begin()));
}

TEST_CASE("run records generation 0 and is reproducible")
{
    auto cfg = small_config(21);
    cfg.generations = 0;
    const auto zero = run(cfg);
    CHECK(zero.stats.size() == 1);
    CHECK(zero.stats.front().generation == 0);

    cfg.generations = 30;
    const auto r1 = run(cfg, 10);
    const auto r2 = run(cfg, 10);
    CHECK(r1.stats.size() == 31);
    CHECK(r1.stats == r2.stats);
    CHECK(r1.final_state.generation == 30);
    std::vector<std::size_t> kept;
    for (const auto& [g, pop] : r1.snapshots)
        kept.push_back(g);
    CHECK(kept == std::vector<std::size_t> { 0, 10, 20, 30 });
    CHECK(run(cfg, 0).snapshots.empty());

    for (std::size_t g = 0; g < r1.stats.size(); ++g)
        CHECK(r1.stats[g].generation == g);
}

TEST_CASE("property: operator invariants over random inputs")
{
    Rng rng(1234);
    const auto alphabet = Alphabet::of_size(6);
    for (int i = 0; i < 10000; ++i) {
        const auto a = random_sequence(rng, 6, 9);
        const auto b = random_sequence(rng, 6, 9);
        auto [c1, c2] = crossover_pair(a, b, rng);
        CHECK(c1.length() + c2.length() == a.length() + b.length());
        std::vector<AgentId> before(a.symbols().begin(), a.symbols().end());
        before.insert(before.end(), b.symbols().begin(), b.symbols().end());
        std::vector<AgentId> after(c1.symbols().begin(), c1.symbols().end());
        after.insert(after.end(), c2.symbols().begin(), c2.symbols().end());
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);

        const auto m = mutate(a, alphabet, rng);
        CHECK(m.length() >= 1);
        CHECK(edit_distance(a.symbols(), m.symbols()) == 1);
    }
}
