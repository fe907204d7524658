#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "chain.hpp"
#include "dynamics.hpp"
#include "hilbert.hpp"
#include "linalg.hpp"
#include "threads.hpp"

namespace scarpst {

enum class PerturbationKind { local_x, global_x, global_yy };

inline const char* to_string(PerturbationKind k)
{
    switch (k) {
    case PerturbationKind::local_x: return "local-X";
    case PerturbationKind::global_x: return "global-X";
    case PerturbationKind::global_yy: return "global-YY";
    }
    return "?";
}

// true spin-1 ladder matrices in the {|->, |0>, |+>} basis; these move the
// |0> level, unlike the embedded qubit operators
inline DenseOperator spin1_sx()
{
    DenseOperator m = DenseOperator::Zero(3, 3);
    m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = 1.0;
    return m;
}

inline DenseOperator spin1_sy()
{
    DenseOperator m = DenseOperator::Zero(3, 3);
    m(0, 1) = m(1, 2) = complexd(0, -1);
    m(1, 0) = m(2, 1) = complexd(0, 1);
    return m;
}

// epsilon-scaled non-projected perturbations: a single S^x at the chain
// center, S^x on every site, or S^y S^y on every bond (open chain)
inline DenseOperator build_perturbation(PerturbationKind kind, double epsilon,
                                        const ChainConfig& cfg)
{
    cfg.validate();
    if (cfg.local_dim != 3)
        throw std::invalid_argument("build_perturbation: spin-1 chain expected");
    const long dim = cfg.dimension();
    DenseOperator h = DenseOperator::Zero(dim, dim);
    switch (kind) {
    case PerturbationKind::local_x: {
        if (cfg.num_sites % 2 != 0)
            throw std::invalid_argument("build_perturbation: local-X needs an even chain (site N/2), N = "
                                        + std::to_string(cfg.num_sites));
        detail::add_embedded_on_sites(h, spin1_sx(), {cfg.num_sites / 2}, cfg, epsilon);
        break;
    }
    case PerturbationKind::global_x: {
        for (int n = 1; n <= cfg.num_sites; ++n)
            detail::add_embedded_on_sites(h, spin1_sx(), {n}, cfg, epsilon);
        break;
    }
    case PerturbationKind::global_yy: {
        const DenseOperator yy = kron(spin1_sy(), spin1_sy());
        for (int n = 1; n < cfg.num_sites; ++n)
            detail::add_embedded_on_sites(h, yy, {n, n + 1}, cfg, epsilon);
        break;
    }
    }
    return h;
}

struct ScalingFit {
    std::vector<double> epsilons;
    std::vector<double> infidelities;   // 1 - F(tau_1)
    std::vector<int> fit_indices;       // points inside the validity window
    double slope = 0.0;                 // log-log exponent
    double intercept = 0.0;             // log-log offset
    double r_squared = 0.0;
};

// numerical floor and saturation bounds on usable infidelity points
constexpr double kInfidelityFloor = 1e-9;
constexpr double kInfidelitySaturation = 0.5;

// Infidelity 1 - F(tau_1) versus perturbation strength: each point
// diagonalizes H_base + H_pert(epsilon) and evaluates the fidelity with the
// unperturbed correction unitary. The power law is fit by least squares on
// the log-log points inside the validity window.
inline ScalingFit infidelity_scan(const DenseOperator& h_base, PerturbationKind kind,
                                  const std::vector<double>& epsilons, const TransferJob& job,
                                  const ChainConfig& cfg)
{
    cfg.validate();
    job.validate();
    if (epsilons.empty() || epsilons.front() <= 0.0)
        throw std::invalid_argument("infidelity_scan: epsilons must be positive");
    for (size_t i = 1; i < epsilons.size(); ++i)
        if (epsilons[i] <= epsilons[i - 1])
            throw std::invalid_argument("infidelity_scan: epsilons must be strictly ascending");
    if (std::log10(epsilons.back() / epsilons.front()) < 2.0 - 1e-9)
        throw std::invalid_argument("infidelity_scan: epsilon grid must span at least two decades");
    if (h_base.rows() != cfg.dimension())
        throw std::invalid_argument("infidelity_scan: base Hamiltonian dimension mismatch");

    ScalingFit fit;
    fit.epsilons = epsilons;
    fit.infidelities.resize(epsilons.size());
    const double tau_1 = transfer_time(1, cfg);
    const DenseOperator pert_unit = build_perturbation(kind, 1.0, cfg);

    // heavy diagonalizations; two at a time to stay inside the memory budget
    parallel_for(static_cast<long>(epsilons.size()), [&](long i) {
        const DenseOperator h = h_base + epsilons[static_cast<size_t>(i)] * pert_unit;
        const EigenSystem sys = diagonalize(h);
        fit.infidelities[static_cast<size_t>(i)] = 1.0 - fidelity_at(sys, job, cfg, tau_1);
    }, 2);

    for (size_t i = 0; i < epsilons.size(); ++i)
        if (fit.infidelities[i] > kInfidelityFloor && fit.infidelities[i] < kInfidelitySaturation)
            fit.fit_indices.push_back(static_cast<int>(i));
    if (fit.fit_indices.size() < 2) {
        std::ostringstream msg;
        msg << "infidelity_scan: all points outside the validity window (" << kInfidelityFloor
            << ", " << kInfidelitySaturation << "); data:";
        for (size_t i = 0; i < epsilons.size(); ++i)
            msg << " (" << epsilons[i] << ", " << fit.infidelities[i] << ")";
        throw numerical_error(msg.str());
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fit.fit_indices.size());
    for (int idx : fit.fit_indices) {
        const double x = std::log(fit.epsilons[idx]);
        const double y = std::log(fit.infidelities[idx]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (int idx : fit.fit_indices) {
        const double x = std::log(fit.epsilons[idx]);
        const double y = std::log(fit.infidelities[idx]);
        const double y_hat = fit.slope * x + fit.intercept;
        ss_res += (y - y_hat) * (y - y_hat);
        ss_tot += (y - sy / n) * (y - sy / n);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// default log-spaced grid over [1e-3, 1e-1], hitting 1e-2 exactly
inline std::vector<double> default_epsilon_grid(int points_per_decade = 2)
{
    std::vector<double> eps;
    const int total = 2 * points_per_decade + 1;
    for (int k = 0; k < total; ++k)
        eps.push_back(std::pow(10.0, -3.0 + 2.0 * k / (total - 1)));
    eps[points_per_decade] = 1e-2;  // exact midpoint
    return eps;
}

} // namespace scarpst
