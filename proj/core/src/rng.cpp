#include "snns/rng.hpp"

#include <cmath>
#include <numbers>

namespace snns {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        return 0;
    }
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const unsigned __int128 product = static_cast<unsigned __int128>(next_u64()) * bound;
        if (static_cast<std::uint64_t>(product) >= threshold) {
            return static_cast<std::uint64_t>(product >> 64);
        }
    }
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace snns
