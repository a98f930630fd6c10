#pragma once

// Domain types shared by the complexity measures, the evolutionary
// simulation and the experiment harness.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace selforg {

/// Index of an agent within its Alphabet. Agents double as the characters
/// of the sequences whose entropy is measured.
using AgentId = std::uint32_t;

struct Agent {
    AgentId id = 0;
    std::vector<int> attributes;

    friend bool operator==(const Agent&, const Agent&) = default;
};

/// The global agent pool. Fixed for a whole run; its size is the entropy
/// base for every per-site measurement.
class Alphabet {
public:
    /// Throws std::invalid_argument unless there are at least two agents,
    /// every agent's id equals its position and every agent has attributes.
    explicit Alphabet(std::vector<Agent> agents);

    /// An alphabet of `size` agents that carry a single placeholder
    /// attribute. Used when only the symbol count matters (population files).
    static Alphabet of_size(std::size_t size);

    std::size_t size() const noexcept { return agents_.size(); }
    bool contains(AgentId id) const noexcept { return id < agents_.size(); }
    const Agent& operator[](AgentId id) const { return agents_.at(id); }
    std::span<const Agent> agents() const noexcept { return agents_; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<Agent> agents_;
};

/// One individual: a non-empty ordered list of agent ids. Site i (1-based)
/// is symbols()[i - 1].
class AgentSequence {
public:
    /// Throws std::invalid_argument on an empty symbol list.
    explicit AgentSequence(std::vector<AgentId> symbols);
    AgentSequence(std::initializer_list<AgentId> symbols);

    std::size_t length() const noexcept { return symbols_.size(); }
    std::span<const AgentId> symbols() const noexcept { return symbols_; }
    AgentId at_site(std::size_t site) const { return symbols_.at(site - 1); }

    friend bool operator==(const AgentSequence&, const AgentSequence&) = default;
    friend auto operator<=>(const AgentSequence&, const AgentSequence&) = default;

private:
    std::vector<AgentId> symbols_;
};

/// A multiset of sequences over one alphabet. Member order is kept for
/// reproducibility of the simulation but never affects equality or any
/// metric.
class Population {
public:
    /// Throws std::invalid_argument if a member uses a symbol outside the
    /// alphabet.
    Population(std::shared_ptr<const Alphabet> alphabet, std::vector<AgentSequence> members);
    Population(const Alphabet& alphabet, std::vector<AgentSequence> members);

    const Alphabet& alphabet() const noexcept { return *alphabet_; }
    const std::shared_ptr<const Alphabet>& shared_alphabet() const noexcept { return alphabet_; }
    std::span<const AgentSequence> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }

    std::size_t max_length() const noexcept;
    std::size_t total_length() const noexcept;
    double mean_length() const;

    /// Multiset equality over members plus alphabet equality.
    friend bool operator==(const Population& lhs, const Population& rhs);

private:
    std::shared_ptr<const Alphabet> alphabet_;
    std::vector<AgentSequence> members_;
};

/// The required attribute values a sequence is evolved towards.
class UserRequest {
public:
    explicit UserRequest(std::vector<int> required);

    std::span<const int> required() const noexcept { return required_; }
    std::size_t size() const noexcept { return required_.size(); }

    friend bool operator==(const UserRequest&, const UserRequest&) = default;

private:
    std::vector<int> required_;
};

using BigUnsigned = boost::multiprecision::cpp_int;

/// Number of distinct genotypes of the given length: alphabet_size^length,
/// exact.
BigUnsigned genotype_space_size(std::size_t alphabet_size, std::size_t length);

/// Smallest population that keeps fixed-length complexity estimates usable:
/// alphabet_size * length.
std::uint64_t min_population_size(std::size_t alphabet_size, std::size_t length);

} // namespace selforg
