#include "selforg/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace selforg {

namespace {

std::string describe_unmeasurable(std::size_t alphabet_size, const std::vector<std::size_t>& sizes)
{
    std::ostringstream out;
    out << "unmeasurable population: no site i has sample_size(i) >= " << alphabet_size << " * i; sample sizes [";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        out << (i ? " " : "") << (i + 1) << ":" << sizes[i];
    out << "]";
    return out.str();
}

// Length histogram turned into a suffix count: result[i - 1] = #members
// with length >= i.
std::vector<std::size_t> reach_counts(const Population& population)
{
    const std::size_t longest = population.max_length();
    std::vector<std::size_t> reach(longest + 1, 0);
    for (const auto& m : population.members())
        ++reach[m.length() - 1];
    for (std::size_t i = longest; i-- > 0;)
        reach[i] += reach[i + 1];
    reach.pop_back();
    return reach;
}

std::size_t calculable_length_from(const std::vector<std::size_t>& reach, std::size_t alphabet_size)
{
    for (std::size_t length = reach.size(); length >= 1; --length) {
        if (reach[length - 1] >= alphabet_size * length)
            return length;
    }
    return 0;
}

ComplexityReport measure(const Population& population, std::size_t measured_length)
{
    const std::size_t base = population.alphabet().size();
    ComplexityReport report;
    report.calculable_length = measured_length;
    report.max_length = population.max_length();
    report.complexity_potential = static_cast<double>(measured_length);
    report.per_site_entropy.reserve(measured_length);

    double entropy_sum = 0.0;
    for (std::size_t site = 1; site <= measured_length; ++site) {
        const double h = per_site_entropy(site_distribution(population, site), base);
        report.per_site_entropy.push_back(h);
        entropy_sum += h;
    }
    report.complexity = std::clamp(report.complexity_potential - entropy_sum, 0.0, report.complexity_potential);
    report.efficiency = measured_length == 0 ? 0.0 : report.complexity / report.complexity_potential;
    return report;
}

} // namespace

UnmeasurablePopulation::UnmeasurablePopulation(std::size_t alphabet_size, std::vector<std::size_t> sample_sizes)
    : std::runtime_error(describe_unmeasurable(alphabet_size, sample_sizes))
    , alphabet_size_(alphabet_size)
    , sample_sizes_(std::move(sample_sizes))
{
}

std::size_t sample_size(const Population& population, std::size_t site)
{
    if (site < 1)
        throw std::invalid_argument("sites are numbered from 1");
    return static_cast<std::size_t>(std::count_if(population.members().begin(), population.members().end(),
        [site](const AgentSequence& m) { return m.length() >= site; }));
}

std::vector<std::size_t> sample_size_table(const Population& population)
{
    return reach_counts(population);
}

SiteDistribution site_distribution(const Population& population, std::size_t site)
{
    const std::size_t longest = population.max_length();
    if (site < 1 || site > longest)
        throw std::out_of_range("site " + std::to_string(site) + " outside [1, " + std::to_string(longest) + "]");

    SiteDistribution dist;
    dist.site = site;
    dist.counts.assign(population.alphabet().size(), 0);
    for (const auto& m : population.members()) {
        if (m.length() >= site) {
            ++dist.counts[m.at_site(site)];
            ++dist.sample_size;
        }
    }
    return dist;
}

double per_site_entropy(const SiteDistribution& distribution, std::size_t alphabet_size)
{
    if (alphabet_size < 2)
        throw std::invalid_argument("entropy base |D| must be at least 2");
    if (distribution.sample_size == 0)
        throw std::invalid_argument("entropy of site " + std::to_string(distribution.site) + " is undefined with no samples");
    if (distribution.counts.size() > alphabet_size)
        throw std::invalid_argument("distribution has more symbols than the alphabet");

    std::size_t total = 0;
    std::size_t nonzero = 0;
    std::size_t first_nonzero = 0;
    bool uniform = distribution.counts.size() == alphabet_size;
    for (std::size_t count : distribution.counts) {
        total += count;
        if (count != 0) {
            if (nonzero == 0)
                first_nonzero = count;
            ++nonzero;
        }
        if (count != distribution.counts.front())
            uniform = false;
    }
    if (total != distribution.sample_size)
        throw std::invalid_argument("site counts do not sum to the sample size");

    if (nonzero == 1)
        return 0.0;
    if (uniform && first_nonzero != 0)
        return 1.0;

    const double n = static_cast<double>(total);
    double sum = 0.0;
    for (std::size_t count : distribution.counts) {
        if (count == 0)
            continue;
        const double p = static_cast<double>(count) / n;
        sum -= p * std::log(p);
    }
    return std::clamp(sum / std::log(static_cast<double>(alphabet_size)), 0.0, 1.0);
}

std::size_t calculable_length(const Population& population)
{
    if (population.empty())
        throw std::invalid_argument("calculable length of an empty population");
    return calculable_length_from(reach_counts(population), population.alphabet().size());
}

double physical_complexity_fixed(const Population& population, const WarningSink& warn)
{
    if (population.empty())
        throw std::invalid_argument("complexity of an empty population");
    const std::size_t length = population.members().front().length();
    for (const auto& m : population.members()) {
        if (m.length() != length)
            throw std::invalid_argument("fixed-length complexity requires equal lengths; use physical_complexity_variable");
    }
    const std::size_t base = population.alphabet().size();
    if (warn && population.size() < base * length) {
        warn("population of " + std::to_string(population.size()) + " is below the recommended minimum "
            + std::to_string(base * length) + " for length " + std::to_string(length));
    }
    return measure(population, length).complexity;
}

ComplexityReport physical_complexity_variable(const Population& population)
{
    if (population.empty())
        throw std::invalid_argument("complexity of an empty population");
    auto reach = reach_counts(population);
    const std::size_t base = population.alphabet().size();
    const std::size_t measured = calculable_length_from(reach, base);
    if (measured == 0)
        throw UnmeasurablePopulation(base, std::move(reach));
    return measure(population, measured);
}

std::optional<ComplexityReport> try_measure(const Population& population)
{
    if (population.empty())
        return std::nullopt;
    const std::size_t measured = calculable_length(population);
    if (measured == 0)
        return std::nullopt;
    return measure(population, measured);
}

double efficiency(const ComplexityReport& report)
{
    if (report.calculable_length == 0)
        throw UnmeasurablePopulation(0, {});
    return report.complexity / report.complexity_potential;
}

double efficiency(const Population& population)
{
    return physical_complexity_variable(population).efficiency;
}

} // namespace selforg
