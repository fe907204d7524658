#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "chain.hpp"
#include "hilbert.hpp"
#include "linalg.hpp"
#include "models.hpp"

namespace scarpst {

// Spin-J angular momentum operators (J = (N-1)/2) in the N-dimensional
// single-excitation basis {|n>}, plus their liftings to the full chain
// Hilbert space (zero outside the single-excitation sector).
struct EffectiveSpinOps {
    DenseOperator jp, jx, jy, jz;                      // N x N
    DenseOperator jp_full, jx_full, jy_full, jz_full;  // full dimension
};

// embed an operator on the single-excitation sector into the full space:
// sum_{m,n} A_mn |m><n|, zero elsewhere
inline DenseOperator lift_single_excitation(const DenseOperator& a, const ChainConfig& cfg)
{
    const long dim = cfg.dimension();
    const int n_sites = cfg.num_sites;
    if (a.rows() != n_sites || a.cols() != n_sites)
        throw std::invalid_argument("lift_single_excitation: operator must be N x N");
    DenseOperator full = DenseOperator::Zero(dim, dim);
    for (int m = 1; m <= n_sites; ++m)
        for (int n = 1; n <= n_sites; ++n)
            full(single_excitation_index(m, cfg), single_excitation_index(n, cfg)) = a(m - 1, n - 1);
    return full;
}

inline StateVector lift_single_excitation(const StateVector& v, const ChainConfig& cfg)
{
    if (v.size() != cfg.num_sites)
        throw std::invalid_argument("lift_single_excitation: vector must have N entries");
    StateVector full = StateVector::Zero(cfg.dimension());
    for (int n = 1; n <= cfg.num_sites; ++n)
        full(single_excitation_index(n, cfg)) = v(n - 1);
    return full;
}

inline EffectiveSpinOps effective_spin_ops(const ChainConfig& cfg)
{
    cfg.validate();
    const int n_sites = cfg.num_sites;
    EffectiveSpinOps ops;
    ops.jp = DenseOperator::Zero(n_sites, n_sites);
    for (int n = 1; n < n_sites; ++n)
        ops.jp(n, n - 1) = std::sqrt(static_cast<double>(n * (n_sites - n)));
    const DenseOperator jm = ops.jp.adjoint();
    ops.jx = 0.5 * (ops.jp + jm);
    ops.jy = complexd(0, 0.5) * (jm - ops.jp);
    ops.jz = DenseOperator::Zero(n_sites, n_sites);
    for (int n = 1; n <= n_sites; ++n)
        ops.jz(n - 1, n - 1) = 0.5 * (2 * n - n_sites - 1);
    ops.jp_full = lift_single_excitation(ops.jp, cfg);
    ops.jx_full = lift_single_excitation(ops.jx, cfg);
    ops.jy_full = lift_single_excitation(ops.jy, cfg);
    ops.jz_full = lift_single_excitation(ops.jz, cfg);
    return ops;
}

// Unitary rotating the Jz eigenbasis into the Jx eigenbasis, computed by
// exact exponentiation in the N-dimensional representation. Satisfies
// U Jz U^dag = Jx, so column n is the Jx eigenvector with eigenvalue
// (2n - N - 1)/2.
inline DenseOperator x_basis_rotation(const ChainConfig& cfg)
{
    const EffectiveSpinOps ops = effective_spin_ops(cfg);
    DenseOperator v = ops.jy;
    const Eigen::VectorXd w = eigh_inplace(v);
    StateVector phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double angle = -0.5 * std::numbers::pi * w(i);
        phases(i) = complexd(std::cos(angle), std::sin(angle));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

// The N+1 scar vectors: the excitation-free vacuum plus the N rotated
// single-excitation states |x_n>, with their predicted eigenvalues under the
// scarred Hamiltonian. energies[0] belongs to the vacuum, energies[n] to
// xstates[n-1].
struct ScarBasis {
    StateVector vacuum;
    std::vector<StateVector> xstates;
    Eigen::VectorXd energies;
};

namespace detail {

inline ScarBasis scar_basis_impl(const ChainConfig& cfg)
{
    const long dim = cfg.dimension();
    const int n_sites = cfg.num_sites;
    ScarBasis basis;
    basis.vacuum = StateVector::Zero(dim);
    basis.vacuum(vacuum_index(cfg)) = 1.0;
    const DenseOperator u = x_basis_rotation(cfg);
    basis.xstates.reserve(n_sites);
    for (int n = 1; n <= n_sites; ++n)
        basis.xstates.push_back(lift_single_excitation(StateVector(u.col(n - 1)), cfg));
    basis.energies.resize(n_sites + 1);
    basis.energies(0) = 0.5 * cfg.omega * n_sites;
    for (int n = 1; n <= n_sites; ++n)
        basis.energies(n) = 0.5 * cfg.omega * (n_sites - 2) + cfg.lambda * (2 * n - n_sites - 1);
    return basis;
}

} // namespace detail

inline ScarBasis scar_basis(const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 2)
        throw std::invalid_argument("scar_basis: spin-1/2 chain expected");
    return detail::scar_basis_impl(cfg);
}

inline ScarBasis scar_basis_spin1(const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 3)
        throw std::invalid_argument("scar_basis_spin1: spin-1 chain expected");
    return detail::scar_basis_impl(cfg);
}

// scar vectors as the columns of a dim x (N+1) matrix, vacuum first
inline DenseOperator scar_subspace_matrix(const ScarBasis& basis)
{
    const long dim = basis.vacuum.size();
    DenseOperator b(dim, static_cast<long>(basis.xstates.size()) + 1);
    b.col(0) = basis.vacuum;
    for (size_t n = 0; n < basis.xstates.size(); ++n) b.col(n + 1) = basis.xstates[n];
    return b;
}

struct ScarResidualReport {
    Eigen::VectorXd residuals;  // ||H|s> - E_pred|s>|| per scar vector, vacuum first
    double max_residual = 0.0;
};

inline ScarResidualReport verify_scar_eigenstates(const DenseOperator& h, const ScarBasis& basis)
{
    const long dim = basis.vacuum.size();
    if (h.rows() != dim || h.cols() != dim)
        throw std::invalid_argument("verify_scar_eigenstates: dimension mismatch");
    ScarResidualReport report;
    report.residuals.resize(basis.energies.size());
    report.residuals(0) = (h * basis.vacuum - basis.energies(0) * basis.vacuum).norm();
    for (size_t n = 0; n < basis.xstates.size(); ++n)
        report.residuals(n + 1) =
            (h * basis.xstates[n] - basis.energies(n + 1) * basis.xstates[n]).norm();
    report.max_residual = report.residuals.maxCoeff();
    return report;
}

struct InteractionClassification {
    int annihilated = 0;  // dim { h : P h P = 0 }
    int fixed = 0;        // dim { h : P h P = h }
    int other = 0;
};

namespace detail {

// orthonormal basis of the real vector space of d x d Hermitian matrices:
// diagonal units, symmetric pairs, antisymmetric pairs
inline std::vector<DenseOperator> hermitian_basis(int d)
{
    std::vector<DenseOperator> basis;
    basis.reserve(static_cast<size_t>(d) * d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        DenseOperator g = DenseOperator::Zero(d, d);
        g(i, i) = 1.0;
        basis.push_back(g);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            DenseOperator g = DenseOperator::Zero(d, d);
            g(i, j) = inv_sqrt2;
            g(j, i) = inv_sqrt2;
            basis.push_back(g);
            g(i, j) = complexd(0, -inv_sqrt2);
            g(j, i) = complexd(0, inv_sqrt2);
            basis.push_back(g);
        }
    return basis;
}

} // namespace detail

// Decompose the Hermitian operator space under h -> P h P by rank counting
// at the given tolerance. The three dimensions sum to d^2.
inline InteractionClassification classify_interactions(const DenseOperator& p, double tol = 1e-10)
{
    require_hermitian(p, kHermitianTol, "classify_interactions");
    if (max_abs(p * p - p) > kHermitianTol)
        throw std::invalid_argument("classify_interactions: P is not idempotent, |P^2 - P|_max = "
                                    + std::to_string(max_abs(p * p - p)));
    const int d = static_cast<int>(p.rows());
    const auto basis = detail::hermitian_basis(d);
    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXd t(m, m);
    for (int b = 0; b < m; ++b) {
        const DenseOperator image = p * basis[b] * p;
        for (int a = 0; a < m; ++a)
            t(a, b) = (basis[a].adjoint() * image).trace().real();
    }
    const auto sv_of = [](const Eigen::MatrixXd& x) {
        return Eigen::BDCSVD<Eigen::MatrixXd>(x).singularValues();
    };
    const Eigen::VectorXd sv_t = sv_of(t);
    const Eigen::VectorXd sv_t_minus_id = sv_of(t - Eigen::MatrixXd::Identity(m, m));
    InteractionClassification result;
    for (int i = 0; i < m; ++i) {
        if (sv_t(i) < tol) ++result.annihilated;
        if (sv_t_minus_id(i) < tol) ++result.fixed;
    }
    result.other = m - result.annihilated - result.fixed;
    return result;
}

// half-chain entanglement ceiling for the rotated scar states: at most
// floor(N/2) + 1 distinct left configurations contribute
inline double scar_entropy_bound(const ChainConfig& cfg)
{
    return std::log(static_cast<double>(cfg.num_sites / 2 + 1));
}

struct ShiraishiMoriReport {
    std::vector<double> h_pst_projector_comm;  // ||[H_PST, P_k]||_max per window
    std::vector<double> jx_projector_comm;     // ||[Jx_full, P_k]||_max per window
    int spin1_num_sites = 0;
    double spin1_trivial_comm_max = 0.0;       // max over pairs ||[H1_PST, Ptriv]||_max
};

// Structural comparison against the projector-embedding recipe: the chain
// Hamiltonian fails to commute with the local projectors, while the lifted
// Jx does commute with every one of them. The spin-1 chain with the trivial
// projector is the case where the chain Hamiltonian itself commutes.
inline ShiraishiMoriReport shiraishi_mori_report(const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 2)
        throw std::invalid_argument("shiraishi_mori_report: spin-1/2 configuration expected");
    if (cfg.num_sites < 3)
        throw std::invalid_argument("shiraishi_mori_report: need at least 3 sites");

    ShiraishiMoriReport report;
    const DenseOperator h = build_h_pst(cfg);
    const DenseOperator jx_full = effective_spin_ops(cfg).jx_full;
    const DenseOperator p = build_projector(ProjectorKind::spin_half_pxxp);
    for (int k = 1; k <= cfg.num_sites - 2; ++k) {
        const DenseOperator pk = embed_local(p, k, cfg);
        report.h_pst_projector_comm.push_back(max_abs(h * pk - pk * h));
        report.jx_projector_comm.push_back(max_abs(jx_full * pk - pk * jx_full));
    }

    ChainConfig spin1 = cfg;
    spin1.local_dim = 3;
    spin1.num_sites = std::min(cfg.num_sites, 6);
    report.spin1_num_sites = spin1.num_sites;
    const DenseOperator h1 = build_h_pst_spin1(spin1);
    const DenseOperator ptriv = build_projector(ProjectorKind::spin_one_trivial);
    for (int n = 1; n <= spin1.num_sites; ++n)
        for (int m = n + 1; m <= spin1.num_sites; ++m) {
            const DenseOperator pk = embed_pair(ptriv, n, m, spin1);
            report.spin1_trivial_comm_max =
                std::max(report.spin1_trivial_comm_max, max_abs(h1 * pk - pk * h1));
        }
    return report;
}

// the five-parameter two-body family the minimal projector leaves intact:
// |--> coupled to |0+>, |+0>, |0->, |-0>, |00>
inline DenseOperator robust_interaction_family(double a, double b, double c, double d, double f)
{
    DenseOperator h = DenseOperator::Zero(9, 9);
    h(0, 5) = a;  // <0+|
    h(0, 7) = b;  // <+0|
    h(0, 3) = c;  // <0-|
    h(0, 1) = d;  // <-0|
    h(0, 4) = f;  // <00|
    return h + DenseOperator(h.adjoint());
}

struct TrivialEmbeddingReport {
    int trivial_kernel_dim = 0;   // simultaneous kernel of all trivial pair projectors
    int expected_trivial_dim = 0; // 2^N
    int minimal_kernel_dim = 0;   // same computation with the two-body projector
    int transfer_subspace_dim = 0;// N + 1
    double family_minimal_diff = 0.0;  // max over members ||P h P - h||_max
    double family_trivial_diff = 0.0;  // ||Ptriv h Ptriv - h||_max, generic member
};

inline TrivialEmbeddingReport trivial_embedding_compare(const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 3)
        throw std::invalid_argument("trivial_embedding_compare: spin-1 configuration expected");

    TrivialEmbeddingReport report;
    report.expected_trivial_dim = 1 << cfg.num_sites;
    report.transfer_subspace_dim = cfg.num_sites + 1;

    // states annihilated by every pair projector = null space of the sum of
    // the (positive semidefinite) projectors
    const auto kernel_dim = [&cfg](ProjectorKind kind) {
        const DenseOperator p = build_projector(kind);
        DenseOperator total = DenseOperator::Zero(cfg.dimension(), cfg.dimension());
        for (int n = 1; n <= cfg.num_sites; ++n)
            for (int m = n + 1; m <= cfg.num_sites; ++m)
                detail::add_embedded_on_sites(total, p, {n, m}, cfg);
        const Eigen::VectorXd w = eigvalsh(total);
        int dim = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (std::abs(w(i)) < 1e-10) ++dim;
        return dim;
    };
    report.trivial_kernel_dim = kernel_dim(ProjectorKind::spin_one_trivial);
    report.minimal_kernel_dim = kernel_dim(ProjectorKind::spin_one_two_body);

    const DenseOperator p = build_projector(ProjectorKind::spin_one_two_body);
    const DenseOperator ptriv = build_projector(ProjectorKind::spin_one_trivial);
    const double members[5][5] = {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                  {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
    for (const auto& coeff : members) {
        const DenseOperator h =
            robust_interaction_family(coeff[0], coeff[1], coeff[2], coeff[3], coeff[4]);
        report.family_minimal_diff = std::max(report.family_minimal_diff, max_abs(p * h * p - h));
    }
    const DenseOperator generic = robust_interaction_family(1, 1, 1, 1, 1);
    report.family_minimal_diff =
        std::max(report.family_minimal_diff, max_abs(p * generic * p - generic));
    report.family_trivial_diff = max_abs(ptriv * generic * ptriv - generic);
    return report;
}

} // namespace scarpst
