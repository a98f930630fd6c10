#pragma once

// Ensemble information measures over populations of symbol sequences.
//
// Sites are 1-based positions. At site i only the sequences that reach i are
// sampled, so symbol probabilities are normalised by sample_size(i) rather
// than by the population size. Entropies use the size of the population's
// alphabet as logarithm base and therefore lie in [0, 1].

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "selforg/core.hpp"

namespace selforg {

/// Symbol tally at one site. counts[d] is the number of sampled sequences
/// carrying agent d at the site; counts has one slot per alphabet symbol.
struct SiteDistribution {
    std::size_t site = 0;
    std::vector<std::size_t> counts;
    std::size_t sample_size = 0;
};

struct ComplexityReport {
    std::size_t calculable_length = 0;
    std::vector<double> per_site_entropy;
    double complexity = 0.0;
    double complexity_potential = 0.0;
    double efficiency = 0.0;
    std::size_t max_length = 0;
};

/// Raised when no site of a population has enough samples to be measured
/// (calculable length 0). Carries sample_size(i) for sites 1..max_length.
class UnmeasurablePopulation : public std::runtime_error {
public:
    UnmeasurablePopulation(std::size_t alphabet_size, std::vector<std::size_t> sample_sizes);

    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    const std::vector<std::size_t>& sample_sizes() const noexcept { return sample_sizes_; }

private:
    std::size_t alphabet_size_;
    std::vector<std::size_t> sample_sizes_;
};

/// Number of members whose length is at least `site`.
std::size_t sample_size(const Population& population, std::size_t site);

/// sample_size for every site 1..max_length, index 0 holding site 1.
std::vector<std::size_t> sample_size_table(const Population& population);

SiteDistribution site_distribution(const Population& population, std::size_t site);

/// Base-|D| Shannon entropy with 0 log 0 = 0. Returns exactly 1.0 for a
/// distribution uniform over all alphabet symbols and exactly 0.0 for a
/// unanimous one.
double per_site_entropy(const SiteDistribution& distribution, std::size_t alphabet_size);

/// Largest L in [1, max_length] with sample_size(L) >= |D| * L, or 0 if
/// there is none.
std::size_t calculable_length(const Population& population);

using WarningSink = std::function<void(std::string_view)>;

/// Complexity of an equal-length population: length minus the summed
/// per-site entropies. Mixed lengths throw std::invalid_argument. A
/// population smaller than |D| * length is still measured, but `warn` is
/// told about it.
double physical_complexity_fixed(const Population& population, const WarningSink& warn = {});

/// Complexity of a variable-length population measured over its calculable
/// length. Throws UnmeasurablePopulation when the calculable length is 0.
ComplexityReport physical_complexity_variable(const Population& population);

/// Same as physical_complexity_variable, but reports an unmeasurable
/// population as an empty optional.
std::optional<ComplexityReport> try_measure(const Population& population);

/// complexity / complexity_potential.
double efficiency(const ComplexityReport& report);
double efficiency(const Population& population);

} // namespace selforg
