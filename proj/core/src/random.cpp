#include "selforg/random.hpp"

#include <limits>
#include <stdexcept>

namespace selforg {

namespace {
__extension__ typedef unsigned __int128 u128;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("uniform_index bound must be positive");
    u128 product = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<u128>(engine_()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo)
        throw std::invalid_argument("uniform_int requires lo <= hi");
    const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max())
        return static_cast<std::int64_t>(engine_());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + uniform_index(span + 1));
}

double Rng::uniform_real()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

} // namespace selforg
