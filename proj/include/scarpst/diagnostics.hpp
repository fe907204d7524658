#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "chain.hpp"
#include "dynamics.hpp"
#include "hilbert.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "scars.hpp"
#include "threads.hpp"

namespace scarpst {

struct SpacingHistogram {
    std::vector<double> bin_edges;        // nbins + 1 edges
    std::vector<double> density;          // normalized histogram of unfolded spacings
    std::vector<double> wigner_reference; // GUE surmise at bin centers
    double mean_spacing = 0.0;
};

struct SpectralStatistics {
    std::vector<double> gap_ratios;  // r_k = min(s_k, s_k+1) / max(s_k, s_k+1)
    double mean_r = 0.0;
    double standard_error = 0.0;
    double degeneracy_tolerance = 0.0;
    SpacingHistogram histogram;
};

// middle `fraction` of the (ascending) spectrum by index
inline std::vector<double> middle_fraction(const std::vector<double>& eigenvalues,
                                           double fraction = 0.6)
{
    const long n = static_cast<long>(eigenvalues.size());
    const long skip = static_cast<long>(std::floor(0.5 * (1.0 - fraction) * n));
    return {eigenvalues.begin() + skip, eigenvalues.end() - skip};
}

inline std::vector<double> middle_fraction(const Eigen::VectorXd& eigenvalues, double fraction = 0.6)
{
    return middle_fraction(std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size()),
                           fraction);
}

namespace detail {

// collapse levels closer than tol into one representative, returning the
// ascending distinct spectrum
inline std::vector<double> collapse_degeneracies(std::vector<double> levels, double tol)
{
    std::sort(levels.begin(), levels.end());
    std::vector<double> out;
    out.reserve(levels.size());
    for (double e : levels) {
        if (out.empty() || e - out.back() > tol)
            out.push_back(e);
    }
    return out;
}

inline double default_degeneracy_tol(const std::vector<double>& levels)
{
    double scale = 0.0;
    for (double e : levels) scale = std::max(scale, std::abs(e));
    return 1e-10 * std::max(scale, 1.0);
}

} // namespace detail

// Consecutive-spacing gap ratios, unfolding-free. Spacings below the
// degeneracy tolerance are collapsed first. Pass a negative tolerance for
// the default 1e-10 * max|E|.
inline SpectralStatistics gap_ratio_statistic(const std::vector<double>& eigenvalues,
                                              double degeneracy_tolerance = -1.0)
{
    SpectralStatistics stats;
    stats.degeneracy_tolerance = degeneracy_tolerance >= 0.0
                                     ? degeneracy_tolerance
                                     : detail::default_degeneracy_tol(eigenvalues);
    const auto levels = detail::collapse_degeneracies(eigenvalues, stats.degeneracy_tolerance);
    if (levels.size() < 3)
        throw std::invalid_argument("gap_ratio_statistic: need at least 3 distinct levels, got "
                                    + std::to_string(levels.size()));
    stats.gap_ratios.reserve(levels.size() - 2);
    double sum = 0.0;
    for (size_t k = 0; k + 2 < levels.size(); ++k) {
        const double s0 = levels[k + 1] - levels[k];
        const double s1 = levels[k + 2] - levels[k + 1];
        const double r = std::min(s0, s1) / std::max(s0, s1);
        stats.gap_ratios.push_back(r);
        sum += r;
    }
    const double n = static_cast<double>(stats.gap_ratios.size());
    stats.mean_r = sum / n;
    double var = 0.0;
    for (double r : stats.gap_ratios) var += (r - stats.mean_r) * (r - stats.mean_r);
    stats.standard_error = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    return stats;
}

inline SpectralStatistics gap_ratio_statistic(const Eigen::VectorXd& eigenvalues,
                                              double degeneracy_tolerance = -1.0)
{
    return gap_ratio_statistic(
        std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size()),
        degeneracy_tolerance);
}

// GUE Wigner surmise P(s) = (32 / pi^2) s^2 exp(-4 s^2 / pi)
inline double wigner_surmise_gue(double s)
{
    const double pi = std::numbers::pi;
    return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
}

// Unfold the spectrum by a degree-`unfolding_degree` polynomial fit of the
// integrated density of states, then histogram the unfolded spacings.
inline SpectralStatistics spacing_histogram(const std::vector<double>& eigenvalues,
                                            int unfolding_degree, int num_bins = 40,
                                            double s_max = 4.0)
{
    if (unfolding_degree < 1)
        throw std::invalid_argument("spacing_histogram: unfolding degree must be >= 1");
    SpectralStatistics stats;
    stats.degeneracy_tolerance = detail::default_degeneracy_tol(eigenvalues);
    const auto levels = detail::collapse_degeneracies(eigenvalues, stats.degeneracy_tolerance);
    const long n = static_cast<long>(levels.size());
    if (n < unfolding_degree + 2)
        throw std::invalid_argument("spacing_histogram: too few levels for the requested degree");

    // staircase fit on the rescaled spectrum (conditioning)
    const double lo = levels.front(), hi = levels.back();
    if (!(hi > lo))
        throw numerical_error("spacing_histogram: degenerate spectrum, unfolding fit is singular");
    Eigen::MatrixXd vand(n, unfolding_degree + 1);
    Eigen::VectorXd counts(n);
    for (long i = 0; i < n; ++i) {
        const double x = 2.0 * (levels[i] - lo) / (hi - lo) - 1.0;
        double p = 1.0;
        for (int d = 0; d <= unfolding_degree; ++d) {
            vand(i, d) = p;
            p *= x;
        }
        counts(i) = static_cast<double>(i) + 0.5;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vand);
    if (qr.rank() < unfolding_degree + 1)
        throw numerical_error("spacing_histogram: unfolding fit is rank deficient (rank "
                              + std::to_string(qr.rank()) + " of "
                              + std::to_string(unfolding_degree + 1) + ")");
    const Eigen::VectorXd coeffs = qr.solve(counts);
    const Eigen::VectorXd unfolded = vand * coeffs;

    std::vector<double> spacings;
    spacings.reserve(n - 1);
    double mean = 0.0;
    for (long i = 0; i + 1 < n; ++i) {
        const double s = unfolded(i + 1) - unfolded(i);
        spacings.push_back(s);
        mean += s;
    }
    mean /= static_cast<double>(spacings.size());

    auto& hist = stats.histogram;
    hist.mean_spacing = mean;
    hist.bin_edges.resize(num_bins + 1);
    hist.density.assign(num_bins, 0.0);
    hist.wigner_reference.resize(num_bins);
    const double width = s_max / num_bins;
    for (int b = 0; b <= num_bins; ++b) hist.bin_edges[b] = b * width;
    for (double s : spacings) {
        const int b = static_cast<int>(s / width);
        if (b >= 0 && b < num_bins) hist.density[b] += 1.0;
    }
    for (int b = 0; b < num_bins; ++b) {
        hist.density[b] /= static_cast<double>(spacings.size()) * width;
        hist.wigner_reference[b] = wigner_surmise_gue((b + 0.5) * width);
    }
    return stats;
}

inline SpectralStatistics spacing_histogram(const Eigen::VectorXd& eigenvalues, int unfolding_degree,
                                            int num_bins = 40, double s_max = 4.0)
{
    return spacing_histogram(
        std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size()),
        unfolding_degree, num_bins, s_max);
}

struct EntropyScatter {
    Eigen::VectorXd energies;
    Eigen::VectorXd entropies;  // half-chain von Neumann entropy per eigenstate
    int cut = 0;                // sites 1..cut traced out
};

// Half-chain entanglement entropy of every eigenstate, cut after site
// ceil(N/2). Uses the Schmidt decomposition of the reshaped state (singular
// values squared are the reduced density matrix eigenvalues).
inline EntropyScatter eigenstate_entropies(const EigenSystem& sys, const ChainConfig& cfg)
{
    cfg.validate();
    const long dim = cfg.dimension();
    if (sys.eigenvectors.rows() != dim)
        throw std::invalid_argument("eigenstate_entropies: dimension mismatch");
    EntropyScatter scatter;
    scatter.cut = (cfg.num_sites + 1) / 2;
    scatter.energies = sys.eigenvalues;
    scatter.entropies.resize(dim);

    long left_dim = 1;
    for (int i = 0; i < scatter.cut; ++i) left_dim *= cfg.local_dim;
    const long right_dim = dim / left_dim;

    parallel_for(dim, [&](long col) {
        // site 1 is the most significant digit, so the state reshapes
        // row-major into (left, right)
        Eigen::Map<const Eigen::Matrix<complexd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            m(sys.eigenvectors.col(col).data(), left_dim, right_dim);
        Eigen::JacobiSVD<DenseOperator> svd(m);
        const Eigen::VectorXd& sv = svd.singularValues();
        double s = 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            const double p = sv(i) * sv(i);
            if (p > kEntropyClip) s -= p * std::log(p);
        }
        scatter.entropies(col) = s;
    });
    return scatter;
}

struct ScarDetection {
    std::vector<int> outlier_indices;   // eigenstates with overlap above threshold
    Eigen::VectorXd overlaps;           // scar-subspace weight per eigenstate
    Eigen::VectorXd outlier_entropies;  // entropies of the flagged states
    int count = 0;
    double threshold = 0.99;
};

// Weight of every eigenstate on the scar subspace projector; eigenstates
// above the overlap threshold are flagged. The overlaps sum to N+1 (the
// projector trace) for any orthonormal eigenbasis.
inline ScarDetection detect_scars(const EigenSystem& sys, const ScarBasis& basis,
                                  const EntropyScatter& entropy_data, double threshold = 0.99)
{
    const DenseOperator b = scar_subspace_matrix(basis);
    if (sys.eigenvectors.rows() != b.rows())
        throw std::invalid_argument("detect_scars: dimension mismatch");
    ScarDetection det;
    det.threshold = threshold;
    const DenseOperator amplitudes = b.adjoint() * sys.eigenvectors;  // (N+1) x dim
    det.overlaps = amplitudes.cwiseAbs2().colwise().sum();
    for (Eigen::Index i = 0; i < det.overlaps.size(); ++i)
        if (det.overlaps(i) > threshold) det.outlier_indices.push_back(static_cast<int>(i));
    det.count = static_cast<int>(det.outlier_indices.size());
    det.outlier_entropies.resize(det.count);
    for (int k = 0; k < det.count; ++k)
        det.outlier_entropies(k) = entropy_data.entropies(det.outlier_indices[k]);
    return det;
}

// ---- random-matrix reference values (computed, never cited) ----

// Poisson (integrable) mean consecutive gap ratio, 2 ln 2 - 1
inline double poisson_mean_gap_ratio()
{
    return 2.0 * std::log(2.0) - 1.0;
}

struct OracleEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    long num_ratios = 0;
};

// Monte-Carlo mean gap ratio of the GUE, sampled matrix by matrix with the
// same middle-fraction restriction applied to physical spectra.
inline OracleEstimate gue_mean_gap_ratio_oracle(int dim, int num_matrices, std::uint64_t seed,
                                                double fraction = 0.6)
{
    if (dim < 8 || num_matrices < 1)
        throw std::invalid_argument("gue_mean_gap_ratio_oracle: need dim >= 8 and >= 1 samples");
    std::vector<std::vector<double>> per_sample(num_matrices);
    parallel_for(num_matrices, [&](long s) {
        GaussianStream stream(derive_seed(seed, static_cast<std::uint64_t>(TermKind::gue_sample),
                                          static_cast<std::uint64_t>(s)));
        const DenseOperator h = random_hermitian(dim, stream);
        const Eigen::VectorXd w = eigvalsh(h);
        const auto bulk = middle_fraction(w, fraction);
        per_sample[s] = gap_ratio_statistic(bulk).gap_ratios;
    });
    double sum = 0.0;
    long n = 0;
    for (const auto& rs : per_sample)
        for (double r : rs) {
            sum += r;
            ++n;
        }
    const double mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (const auto& rs : per_sample)
        for (double r : rs) var += (r - mean) * (r - mean);
    OracleEstimate est;
    est.mean = mean;
    est.num_ratios = n;
    est.standard_error = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    return est;
}

} // namespace scarpst
