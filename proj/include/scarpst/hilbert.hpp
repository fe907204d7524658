#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "chain.hpp"
#include "linalg.hpp"

namespace scarpst {

constexpr double kEntropyClip = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;

namespace detail {

// embed a D^k x D^k operator acting on the given (ascending, 1-based) sites,
// identity elsewhere; accumulates scale * op into H
inline void add_embedded_on_sites(DenseOperator& h, const DenseOperator& op,
                                  const std::vector<int>& sites, const ChainConfig& cfg,
                                  double scale = 1.0)
{
    const long dim = cfg.dimension();
    const int k = static_cast<int>(sites.size());
    const int d = cfg.local_dim;

    long window_dim = 1;
    for (int i = 0; i < k; ++i) window_dim *= d;
    if (op.rows() != window_dim || op.cols() != window_dim)
        throw std::invalid_argument("embed: operator dimension " + std::to_string(op.rows())
                                    + " does not match window dimension " + std::to_string(window_dim));

    std::vector<long> places(k);
    for (int i = 0; i < k; ++i) {
        if (sites[i] < 1 || sites[i] > cfg.num_sites)
            throw std::invalid_argument("embed: site " + std::to_string(sites[i])
                                        + " outside chain 1.." + std::to_string(cfg.num_sites));
        if (i > 0 && sites[i] <= sites[i - 1])
            throw std::invalid_argument("embed: sites must be strictly ascending");
        places[i] = site_place(sites[i], cfg);
    }

    // window index of a full basis index, first listed site most significant
    std::vector<long> window_of(dim);
    for (long idx = 0; idx < dim; ++idx) {
        long w = 0;
        for (int i = 0; i < k; ++i) w = w * d + (idx / places[i]) % d;
        window_of[idx] = w;
    }

    for (long col = 0; col < dim; ++col) {
        const long wc = window_of[col];
        // strip the window digits, then write each target window value back
        long base = col;
        {
            long w = wc;
            for (int i = k - 1; i >= 0; --i) {
                base -= (w % d) * places[i];
                w /= d;
            }
        }
        for (long wr = 0; wr < window_dim; ++wr) {
            const complexd v = op(wr, wc);
            if (v == complexd(0.0, 0.0)) continue;
            long row = base;
            long w = wr;
            for (int i = k - 1; i >= 0; --i) {
                row += (w % d) * places[i];
                w /= d;
            }
            h(row, col) += scale * v;
        }
    }
}

} // namespace detail

// I^(start-1) (x) op (x) I^(rest): op acts on the contiguous window starting
// at start_site (1-based)
inline DenseOperator embed_local(const DenseOperator& op, int start_site, const ChainConfig& cfg)
{
    cfg.validate();
    require_square(op, "embed_local");
    int k = 0;
    for (long w = 1; w < op.rows(); w *= cfg.local_dim) ++k;
    if (start_site < 1 || start_site + k - 1 > cfg.num_sites)
        throw std::invalid_argument("embed_local: window [" + std::to_string(start_site) + ", "
                                    + std::to_string(start_site + k - 1) + "] exceeds chain 1.."
                                    + std::to_string(cfg.num_sites));
    std::vector<int> sites(k);
    for (int i = 0; i < k; ++i) sites[i] = start_site + i;
    DenseOperator h = DenseOperator::Zero(cfg.dimension(), cfg.dimension());
    detail::add_embedded_on_sites(h, op, sites, cfg);
    return h;
}

// two-site embedding for possibly non-adjacent sites; op lives on the pair
// space with site a the more significant factor
inline DenseOperator embed_pair(const DenseOperator& op, int site_a, int site_b, const ChainConfig& cfg)
{
    cfg.validate();
    if (site_a >= site_b)
        throw std::invalid_argument("embed_pair: need site_a < site_b");
    DenseOperator h = DenseOperator::Zero(cfg.dimension(), cfg.dimension());
    detail::add_embedded_on_sites(h, op, {site_a, site_b}, cfg);
    return h;
}

namespace detail {

inline std::vector<int> checked_keep_sites(const std::set<int>& keep_sites, const ChainConfig& cfg)
{
    if (keep_sites.empty())
        throw std::invalid_argument("partial_trace: keep set must not be empty");
    for (int s : keep_sites)
        if (s < 1 || s > cfg.num_sites)
            throw std::invalid_argument("partial_trace: site " + std::to_string(s)
                                        + " outside chain 1.." + std::to_string(cfg.num_sites));
    return {keep_sites.begin(), keep_sites.end()};
}

} // namespace detail

// reduced density matrix of a pure state on the kept sites (site order kept)
inline DenseOperator partial_trace(const StateVector& psi, const std::set<int>& keep_sites,
                                   const ChainConfig& cfg)
{
    cfg.validate();
    const auto keep = detail::checked_keep_sites(keep_sites, cfg);
    const long dim = cfg.dimension();
    if (psi.size() != dim)
        throw std::invalid_argument("partial_trace: state dimension mismatch");

    long kdim = 1;
    for (size_t i = 0; i < keep.size(); ++i) kdim *= cfg.local_dim;
    const long edim = dim / kdim;

    // M(kept, env) gathers amplitudes; rho = M M^dag
    DenseOperator m = DenseOperator::Zero(kdim, edim);
    for (long idx = 0; idx < dim; ++idx) {
        long k = 0, e = 0;
        size_t ki = 0;
        for (int site = 1; site <= cfg.num_sites; ++site) {
            const int digit = basis_digit(idx, site, cfg);
            if (ki < keep.size() && keep[ki] == site) {
                k = k * cfg.local_dim + digit;
                ++ki;
            } else {
                e = e * cfg.local_dim + digit;
            }
        }
        m(k, e) = psi(idx);
    }
    return m * m.adjoint();
}

// reduced density matrix of a density matrix on the kept sites
inline DenseOperator partial_trace(const DenseOperator& rho, const std::set<int>& keep_sites,
                                   const ChainConfig& cfg)
{
    cfg.validate();
    const auto keep = detail::checked_keep_sites(keep_sites, cfg);
    const long dim = cfg.dimension();
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("partial_trace: operator dimension mismatch");

    std::vector<long> kept_of(dim), env_of(dim);
    long kdim = 1;
    for (size_t i = 0; i < keep.size(); ++i) kdim *= cfg.local_dim;
    for (long idx = 0; idx < dim; ++idx) {
        long k = 0, e = 0;
        size_t ki = 0;
        for (int site = 1; site <= cfg.num_sites; ++site) {
            const int digit = basis_digit(idx, site, cfg);
            if (ki < keep.size() && keep[ki] == site) {
                k = k * cfg.local_dim + digit;
                ++ki;
            } else {
                e = e * cfg.local_dim + digit;
            }
        }
        kept_of[idx] = k;
        env_of[idx] = e;
    }

    DenseOperator out = DenseOperator::Zero(kdim, kdim);
    for (long col = 0; col < dim; ++col)
        for (long row = 0; row < dim; ++row)
            if (env_of[row] == env_of[col]) out(kept_of[row], kept_of[col]) += rho(row, col);
    return out;
}

// -sum p ln p over the eigenvalues of rho, natural log, eigenvalues below
// the clip threshold contribute zero
inline double von_neumann_entropy(const DenseOperator& rho)
{
    require_hermitian(rho, kHermitianTol, "von_neumann_entropy");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol)
        throw std::invalid_argument("von_neumann_entropy: trace = " + std::to_string(tr)
                                    + ", expected 1");
    const Eigen::VectorXd p = eigvalsh(rho);
    if (p.size() > 0 && p.minCoeff() < -kTraceTol)
        throw std::invalid_argument("von_neumann_entropy: negative eigenvalue "
                                    + std::to_string(p.minCoeff()));
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > kEntropyClip) s -= p(i) * std::log(p(i));
    return s;
}

// total magnetization sum_n Z_n; diagonal. Spin-1/2 digits contribute +1/-1,
// spin-1 digits -1, 0, +1 (the |0> level counts zero).
inline DenseOperator magnetization_operator(const ChainConfig& cfg)
{
    cfg.validate();
    const long dim = cfg.dimension();
    DenseOperator m = DenseOperator::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        int total = 0;
        for (int site = 1; site <= cfg.num_sites; ++site) {
            const int digit = basis_digit(idx, site, cfg);
            total += cfg.local_dim == 2 ? (digit == 0 ? 1 : -1) : digit - 1;
        }
        m(idx, idx) = static_cast<double>(total);
    }
    return m;
}

} // namespace scarpst
