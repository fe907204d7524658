#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scarpst {

// Identity of one experiment: chain geometry, field, coupling scale, seed.
// Site 1 is the most significant digit of a basis index. Local levels map to
// digits as 0,1 <-> |0>,|1> for spin-1/2 and 0,1,2 <-> |->,|0>,|+> for spin-1.
struct ChainConfig {
    int num_sites = 2;      // N
    int local_dim = 2;      // 2 or 3
    double omega = 0.0;     // field strength
    double lambda = 1.0;    // coupling scale, > 0
    std::uint64_t seed = 1;

    static constexpr long default_max_dimension = 1L << 16;

    long dimension() const
    {
        long d = 1;
        for (int i = 0; i < num_sites; ++i) d *= local_dim;
        return d;
    }

    void validate(long max_dimension = default_max_dimension) const
    {
        if (local_dim != 2 && local_dim != 3)
            throw std::invalid_argument("ChainConfig: local_dim must be 2 or 3, got "
                                        + std::to_string(local_dim));
        if (num_sites < 2)
            throw std::invalid_argument("ChainConfig: need at least 2 sites, got "
                                        + std::to_string(num_sites));
        if (!(lambda > 0.0))
            throw std::invalid_argument("ChainConfig: lambda must be positive, got "
                                        + std::to_string(lambda));
        long d = 1;
        for (int i = 0; i < num_sites; ++i) {
            d *= local_dim;
            if (d > max_dimension)
                throw std::invalid_argument("ChainConfig: Hilbert dimension " + std::to_string(local_dim)
                                            + "^" + std::to_string(num_sites) + " exceeds the memory budget of "
                                            + std::to_string(max_dimension));
        }
    }
};

// place value of `site` (1-based) in a basis index
inline long site_place(int site, const ChainConfig& cfg)
{
    long p = 1;
    for (int i = 0; i < cfg.num_sites - site; ++i) p *= cfg.local_dim;
    return p;
}

inline int basis_digit(long index, int site, const ChainConfig& cfg)
{
    return static_cast<int>((index / site_place(site, cfg)) % cfg.local_dim);
}

inline long with_digit(long index, int site, int value, const ChainConfig& cfg)
{
    const long place = site_place(site, cfg);
    return index + (value - basis_digit(index, site, cfg)) * place;
}

// |n>: single excitation at site n over the transfer background. Spin-1/2
// uses digit 1 (|1>) on zeros; spin-1 uses digit 0 (|->) on all-plus.
inline long single_excitation_index(int site, const ChainConfig& cfg)
{
    if (cfg.local_dim == 2) return site_place(site, cfg);
    return (cfg.dimension() - 1) - 2 * site_place(site, cfg);
}

// the excitation-free background: |0...0> for spin-1/2, |+...+> for spin-1
inline long vacuum_index(const ChainConfig& cfg)
{
    return cfg.local_dim == 2 ? 0 : cfg.dimension() - 1;
}

} // namespace scarpst
