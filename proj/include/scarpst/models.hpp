#pragma once

#include <cmath>
#include <vector>

#include "chain.hpp"
#include "hilbert.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace scarpst {

// substream labels for derive_seed
enum class TermKind : std::uint64_t { window_term = 0, pair_term = 1, gue_sample = 2 };

inline DenseOperator pauli_x()
{
    DenseOperator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline DenseOperator pauli_y()
{
    DenseOperator m(2, 2);
    m << 0, complexd(0, -1), complexd(0, 1), 0;
    return m;
}

inline DenseOperator pauli_z()
{
    DenseOperator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// spin-1 local ops coupling only the |-> and |+> levels; the |0> level is
// untouched (X |0> = 0). Basis order {|->, |0>, |+>}.
inline DenseOperator qutrit_x()
{
    DenseOperator m = DenseOperator::Zero(3, 3);
    m(0, 2) = 1;
    m(2, 0) = 1;
    return m;
}

inline DenseOperator qutrit_y()
{
    DenseOperator m = DenseOperator::Zero(3, 3);
    m(0, 2) = complexd(0, -1);
    m(2, 0) = complexd(0, 1);
    return m;
}

inline DenseOperator qutrit_z()
{
    DenseOperator m = DenseOperator::Zero(3, 3);
    m(0, 0) = -1;
    m(2, 2) = 1;
    return m;
}

inline DenseOperator x_op(int local_dim) { return local_dim == 2 ? pauli_x() : qutrit_x(); }
inline DenseOperator y_op(int local_dim) { return local_dim == 2 ? pauli_y() : qutrit_y(); }
inline DenseOperator z_op(int local_dim) { return local_dim == 2 ? pauli_z() : qutrit_z(); }

// engineered couplings lambda_n = lambda * sqrt(n (N - n)), n = 1..N-1;
// mirror symmetric because n (N - n) is the same integer for n and N-n
struct CouplingProfile {
    std::vector<double> lambdas;

    static CouplingProfile engineered(const ChainConfig& cfg)
    {
        cfg.validate();
        CouplingProfile p;
        p.lambdas.resize(cfg.num_sites - 1);
        for (int n = 1; n < cfg.num_sites; ++n)
            p.lambdas[n - 1] = cfg.lambda * std::sqrt(static_cast<double>(n * (cfg.num_sites - n)));
        return p;
    }
};

struct RandomInteractionSpec {
    int window_size = 3;        // 3 for spin-1/2 windows, 2 for spin-1 pairs
    std::uint64_t seed = 1;
    bool homogeneous = true;    // one draw shared by all windows vs fresh draw per term
    double decay_power = 0.0;   // pair terms scale by 1 / |n - n'|^decay_power

    void validate() const
    {
        if (window_size != 2 && window_size != 3)
            throw std::invalid_argument("RandomInteractionSpec: window_size must be 2 or 3");
        if (decay_power < 0.0)
            throw std::invalid_argument("RandomInteractionSpec: decay_power must be >= 0");
    }
};

// h = (A + A^dag) / 2 with Re A_ij, Im A_ij independent standard normals,
// drawn row-major, real part before imaginary part. Exactly Hermitian by
// construction. Off-diagonal E|h_ij|^2 = 1, diagonal variance 1.
inline DenseOperator random_hermitian(int dim, GaussianStream& stream)
{
    if (dim < 1) throw std::invalid_argument("random_hermitian: dim must be >= 1");
    DenseOperator a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double re = stream.next();
            const double im = stream.next();
            a(i, j) = complexd(re, im);
        }
    return 0.5 * (a + DenseOperator(a.adjoint()));
}

enum class ProjectorKind { spin_half_pxxp, spin_one_two_body, spin_one_trivial };

// local projectors defining the scarred interactions; all diagonal 0/1
// matrices in the product basis
inline DenseOperator build_projector(ProjectorKind kind)
{
    switch (kind) {
    case ProjectorKind::spin_half_pxxp: {
        // 3-site: remove |000>, |001>, |010>, |100>
        DenseOperator p = DenseOperator::Identity(8, 8);
        for (long idx : {0L, 1L, 2L, 4L}) p(idx, idx) = 0;
        return p;
    }
    case ProjectorKind::spin_one_two_body: {
        // 2-site spin-1: remove |+,+>, |-,+>, |+,->   (digits -,0,+ = 0,1,2)
        DenseOperator p = DenseOperator::Identity(9, 9);
        for (long idx : {8L, 2L, 6L}) p(idx, idx) = 0;
        return p;
    }
    case ProjectorKind::spin_one_trivial: {
        // additionally remove |-,->
        DenseOperator p = build_projector(ProjectorKind::spin_one_two_body);
        p(0, 0) = 0;
        return p;
    }
    }
    throw std::invalid_argument("build_projector: unknown kind");
}

namespace detail {

inline DenseOperator hopping_term(int local_dim)
{
    return kron(x_op(local_dim), x_op(local_dim)) + kron(y_op(local_dim), y_op(local_dim));
}

inline DenseOperator build_h_pst_impl(const ChainConfig& cfg)
{
    const long dim = cfg.dimension();
    const auto profile = CouplingProfile::engineered(cfg);
    DenseOperator h = DenseOperator::Zero(dim, dim);
    const DenseOperator z = z_op(cfg.local_dim);
    for (int n = 1; n <= cfg.num_sites; ++n)
        detail::add_embedded_on_sites(h, z, {n}, cfg, 0.5 * cfg.omega);
    const DenseOperator hop = hopping_term(cfg.local_dim);
    for (int n = 1; n < cfg.num_sites; ++n)
        detail::add_embedded_on_sites(h, hop, {n, n + 1}, cfg, 0.5 * profile.lambdas[n - 1]);
    return h;
}

// shared ingredient of the thermal and scarred spin-1/2 models: one 3-site
// window term per start site k = 1..N-2, optionally sandwiched by P
inline DenseOperator add_window_terms(DenseOperator h, const ChainConfig& cfg,
                                      const RandomInteractionSpec& spec, bool projected)
{
    if (cfg.num_sites < 3)
        throw std::invalid_argument("window terms need at least 3 sites, got "
                                    + std::to_string(cfg.num_sites));
    const DenseOperator p = build_projector(ProjectorKind::spin_half_pxxp);
    DenseOperator shared;
    if (spec.homogeneous) {
        GaussianStream stream(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::window_term), 0));
        shared = random_hermitian(8, stream);
    }
    for (int k = 1; k <= cfg.num_sites - 2; ++k) {
        DenseOperator term;
        if (spec.homogeneous) {
            term = shared;
        } else {
            GaussianStream stream(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::window_term),
                                              static_cast<std::uint64_t>(k)));
            term = random_hermitian(8, stream);
        }
        if (projected) term = p * term * p;
        detail::add_embedded_on_sites(h, term, {k, k + 1, k + 2}, cfg);
    }
    return h;
}

// shared ingredient of the spin-1 models: one two-body term per unordered
// pair n < n', scaled by 1 / |n - n'|^decay_power
inline DenseOperator add_pair_terms(DenseOperator h, const ChainConfig& cfg,
                                    const RandomInteractionSpec& spec, bool projected)
{
    const DenseOperator p = build_projector(ProjectorKind::spin_one_two_body);
    DenseOperator shared;
    if (spec.homogeneous) {
        GaussianStream stream(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::pair_term), 0));
        shared = random_hermitian(9, stream);
    }
    for (int n = 1; n <= cfg.num_sites; ++n)
        for (int m = n + 1; m <= cfg.num_sites; ++m) {
            DenseOperator term;
            if (spec.homogeneous) {
                term = shared;
            } else {
                GaussianStream stream(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::pair_term),
                                                  static_cast<std::uint64_t>(n) * 256 + m));
                term = random_hermitian(9, stream);
            }
            term /= std::pow(static_cast<double>(m - n), spec.decay_power);
            if (projected) term = p * term * p;
            detail::add_embedded_on_sites(h, term, {n, m}, cfg);
        }
    return h;
}

} // namespace detail

inline DenseOperator build_h_pst(const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 2)
        throw std::invalid_argument("build_h_pst: spin-1/2 chain expected (local_dim 2)");
    return detail::build_h_pst_impl(cfg);
}

inline DenseOperator build_h_thermal(const ChainConfig& cfg, const RandomInteractionSpec& spec)
{
    cfg.validate();
    spec.validate();
    if (cfg.local_dim != 2 || spec.window_size != 3)
        throw std::invalid_argument("build_h_thermal: spin-1/2 chain with 3-site windows expected");
    return detail::add_window_terms(build_h_pst(cfg), cfg, spec, false);
}

inline DenseOperator build_h_scar(const ChainConfig& cfg, const RandomInteractionSpec& spec)
{
    cfg.validate();
    spec.validate();
    if (cfg.local_dim != 2 || spec.window_size != 3)
        throw std::invalid_argument("build_h_scar: spin-1/2 chain with 3-site windows expected");
    return detail::add_window_terms(build_h_pst(cfg), cfg, spec, true);
}

inline DenseOperator build_h_pst_spin1(const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 3)
        throw std::invalid_argument("build_h_pst_spin1: spin-1 chain expected (local_dim 3)");
    return detail::build_h_pst_impl(cfg);
}

inline DenseOperator build_h_thermal_spin1(const ChainConfig& cfg, const RandomInteractionSpec& spec)
{
    cfg.validate();
    spec.validate();
    if (cfg.local_dim != 3 || spec.window_size != 2)
        throw std::invalid_argument("build_h_thermal_spin1: spin-1 chain with pair terms expected");
    return detail::add_pair_terms(build_h_pst_spin1(cfg), cfg, spec, false);
}

inline DenseOperator build_h_scar_spin1(const ChainConfig& cfg, const RandomInteractionSpec& spec)
{
    cfg.validate();
    spec.validate();
    if (cfg.local_dim != 3 || spec.window_size != 2)
        throw std::invalid_argument("build_h_scar_spin1: spin-1 chain with pair terms expected");
    return detail::add_pair_terms(build_h_pst_spin1(cfg), cfg, spec, true);
}

} // namespace scarpst
