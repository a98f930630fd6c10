#include "selforg/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace selforg {

namespace {

void check_domain(std::size_t alphabet_size, std::size_t length)
{
    if (alphabet_size < 2)
        throw std::invalid_argument("alphabet size must be at least 2, got " + std::to_string(alphabet_size));
    if (length < 1)
        throw std::invalid_argument("sequence length must be at least 1");
}

} // namespace

Alphabet::Alphabet(std::vector<Agent> agents)
    : agents_(std::move(agents))
{
    if (agents_.size() < 2)
        throw std::invalid_argument("alphabet needs at least 2 agents, got " + std::to_string(agents_.size()));
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (agents_[i].id != i)
            throw std::invalid_argument("agent at position " + std::to_string(i) + " has id " + std::to_string(agents_[i].id));
        if (agents_[i].attributes.empty())
            throw std::invalid_argument("agent " + std::to_string(i) + " has no attributes");
    }
}

Alphabet Alphabet::of_size(std::size_t size)
{
    std::vector<Agent> agents;
    agents.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
        agents.push_back(Agent { static_cast<AgentId>(i), { 0 } });
    return Alphabet(std::move(agents));
}

AgentSequence::AgentSequence(std::vector<AgentId> symbols)
    : symbols_(std::move(symbols))
{
    if (symbols_.empty())
        throw std::invalid_argument("agent sequences must not be empty");
}

AgentSequence::AgentSequence(std::initializer_list<AgentId> symbols)
    : AgentSequence(std::vector<AgentId>(symbols))
{
}

Population::Population(std::shared_ptr<const Alphabet> alphabet, std::vector<AgentSequence> members)
    : alphabet_(std::move(alphabet))
    , members_(std::move(members))
{
    if (!alphabet_)
        throw std::invalid_argument("population requires an alphabet");
    for (const auto& member : members_) {
        for (AgentId id : member.symbols()) {
            if (!alphabet_->contains(id))
                throw std::invalid_argument("symbol " + std::to_string(id) + " is not in an alphabet of size " + std::to_string(alphabet_->size()));
        }
    }
}

Population::Population(const Alphabet& alphabet, std::vector<AgentSequence> members)
    : Population(std::make_shared<const Alphabet>(alphabet), std::move(members))
{
}

std::size_t Population::max_length() const noexcept
{
    std::size_t longest = 0;
    for (const auto& m : members_)
        longest = std::max(longest, m.length());
    return longest;
}

std::size_t Population::total_length() const noexcept
{
    return std::accumulate(members_.begin(), members_.end(), std::size_t { 0 },
        [](std::size_t acc, const AgentSequence& m) { return acc + m.length(); });
}

double Population::mean_length() const
{
    if (members_.empty())
        throw std::invalid_argument("mean length of an empty population");
    return static_cast<double>(total_length()) / static_cast<double>(members_.size());
}

bool operator==(const Population& lhs, const Population& rhs)
{
    if (lhs.members_.size() != rhs.members_.size())
        return false;
    if (lhs.alphabet_ != rhs.alphabet_ && !(*lhs.alphabet_ == *rhs.alphabet_))
        return false;
    auto a = lhs.members_;
    auto b = rhs.members_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

UserRequest::UserRequest(std::vector<int> required)
    : required_(std::move(required))
{
    if (required_.empty())
        throw std::invalid_argument("user request needs at least one required attribute");
}

BigUnsigned genotype_space_size(std::size_t alphabet_size, std::size_t length)
{
    check_domain(alphabet_size, length);
    if (length > std::numeric_limits<unsigned>::max())
        throw std::invalid_argument("sequence length too large");
    return boost::multiprecision::pow(BigUnsigned(alphabet_size), static_cast<unsigned>(length));
}

std::uint64_t min_population_size(std::size_t alphabet_size, std::size_t length)
{
    check_domain(alphabet_size, length);
    if (length > std::numeric_limits<std::uint64_t>::max() / alphabet_size)
        throw std::overflow_error("minimum population size overflows 64 bits");
    return static_cast<std::uint64_t>(alphabet_size) * length;
}

} // namespace selforg
