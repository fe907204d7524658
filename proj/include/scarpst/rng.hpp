#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace scarpst {

inline std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Substream seed for (root seed, term kind, term index). Hash-derived so the
// draws attached to a given term do not depend on construction order.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t kind, std::uint64_t index)
{
    std::uint64_t z = root ^ mix64(0x9e3779b97f4a7c15ULL * (kind + 1));
    z = mix64(z + 0xd1b54a32d192ed03ULL * (index + 1));
    return mix64(z + root);
}

// Standard-normal stream: mt19937_64 (bit-exact across platforms) feeding the
// Box-Muller transform, u1 in (0,1], u2 in [0,1). Consumes two engine words
// per pair of normals.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double next()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace scarpst
