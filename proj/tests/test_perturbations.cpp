#include <catch2/catch_amalgamated.hpp>

#include "scarpst/perturbations.hpp"
#include "scarpst/models.hpp"

using namespace scarpst;

TEST_CASE("perturbation operators", "[perturbations]")
{
    // ladder matrices in the {|->, |0>, |+>} ordering
    const DenseOperator sx = spin1_sx();
    CHECK(sx(0, 1).real() == 1.0);
    CHECK(sx(1, 0).real() == 1.0);
    CHECK(sx(1, 2).real() == 1.0);
    CHECK(sx(2, 1).real() == 1.0);
    CHECK(sx(0, 2) == complexd(0, 0));
    const DenseOperator sy = spin1_sy();
    CHECK(sy(0, 1) == complexd(0, -1));
    CHECK(sy(1, 0) == complexd(0, 1));
    CHECK(hermiticity_defect(sy) == 0.0);

    ChainConfig cfg{2, 3, 0.0, 1.0, 1};
    // epsilon = 0 gives the zero matrix
    CHECK(max_abs(build_perturbation(PerturbationKind::global_x, 0.0, cfg)) == 0.0);

    // global-X at N=2 is Sx (x) I + I (x) Sx
    const DenseOperator gx = build_perturbation(PerturbationKind::global_x, 0.7, cfg);
    const DenseOperator manual = 0.7 * (kron(sx, DenseOperator::Identity(3, 3))
                                        + kron(DenseOperator::Identity(3, 3), sx));
    CHECK(max_abs(gx - manual) <= 1e-15);

    // global-YY runs over the N-1 open-chain bonds
    ChainConfig cfg3{3, 3, 0.0, 1.0, 1};
    const DenseOperator gyy = build_perturbation(PerturbationKind::global_yy, 1.0, cfg3);
    const DenseOperator yy = kron(sy, sy);
    CHECK(max_abs(gyy - (embed_local(yy, 1, cfg3) + embed_local(yy, 2, cfg3))) <= 1e-15);

    // local-X sits on site N/2 and needs an even chain
    const DenseOperator lx = build_perturbation(PerturbationKind::local_x, 1.0, cfg);
    CHECK(max_abs(lx - embed_local(sx, 1, cfg)) <= 1e-15);
    CHECK_THROWS_AS(build_perturbation(PerturbationKind::local_x, 1.0, cfg3), std::invalid_argument);

    for (auto kind : {PerturbationKind::local_x, PerturbationKind::global_x, PerturbationKind::global_yy})
        CHECK(hermiticity_defect(build_perturbation(kind, 0.3, cfg)) <= 1e-12);

    ChainConfig half{4, 2, 0.0, 1.0, 1};
    CHECK_THROWS_AS(build_perturbation(PerturbationKind::global_x, 1.0, half), std::invalid_argument);
}

TEST_CASE("unperturbed scarred chain transfers perfectly", "[perturbations]")
{
    ChainConfig cfg{6, 3, 0.0, 1.0, 1};
    RandomInteractionSpec spec{2, 1, false, 3.0};
    const EigenSystem sys = diagonalize(build_h_scar_spin1(cfg, spec));
    TransferJob job;
    job.variant = HamiltonianVariant::scar;
    const double infid = 1.0 - fidelity_at(sys, job, cfg, transfer_time(1, cfg));
    CHECK(infid <= 1e-9);
}

TEST_CASE("infidelity scales quadratically in the perturbation strength", "[perturbations]")
{
    ChainConfig cfg{6, 3, 0.0, 1.0, 1};
    RandomInteractionSpec spec{2, 1, false, 3.0};
    const DenseOperator h_scar = build_h_scar_spin1(cfg, spec);
    TransferJob job;
    job.variant = HamiltonianVariant::scar;
    const auto epsilons = default_epsilon_grid();

    for (auto kind : {PerturbationKind::global_x, PerturbationKind::local_x, PerturbationKind::global_yy}) {
        const ScalingFit fit = infidelity_scan(h_scar, kind, epsilons, job, cfg);
        INFO("kind " << to_string(kind));
        CHECK(fit.slope == Catch::Approx(2.0).margin(0.1));
        CHECK(fit.r_squared >= 0.98);
        REQUIRE(fit.fit_indices.size() >= 3);
        // monotone growth over the sampled grid (reported, not required by
        // the physics; tolerate exact ties at the numerical floor)
        bool monotone = true;
        for (size_t i = 1; i < fit.infidelities.size(); ++i)
            monotone = monotone && fit.infidelities[i] >= fit.infidelities[i - 1] - 1e-9;
        INFO("monotone over grid: " << (monotone ? "yes" : "no"));
        CHECK(fit.infidelities.back() <= 1.0);
    }
}

TEST_CASE("integrable base is more fragile at matching strength", "[perturbations]")
{
    ChainConfig cfg{6, 3, 0.0, 1.0, 1};
    RandomInteractionSpec spec{2, 1, false, 3.0};
    const DenseOperator h_scar = build_h_scar_spin1(cfg, spec);
    const DenseOperator h_pst = build_h_pst_spin1(cfg);
    TransferJob job;
    const double tau_1 = transfer_time(1, cfg);
    for (auto kind : {PerturbationKind::global_x, PerturbationKind::global_yy}) {
        const double eps = 1e-2;
        const DenseOperator pert = build_perturbation(kind, eps, cfg);
        const double infid_scar = 1.0 - fidelity_at(diagonalize(h_scar + pert), job, cfg, tau_1);
        const double infid_pst = 1.0 - fidelity_at(diagonalize(h_pst + pert), job, cfg, tau_1);
        INFO("kind " << to_string(kind) << ": pst " << infid_pst << " vs scar " << infid_scar);
        CHECK(infid_pst > infid_scar);
    }
}

TEST_CASE("scan input validation", "[perturbations]")
{
    ChainConfig cfg{4, 3, 0.0, 1.0, 1};
    RandomInteractionSpec spec{2, 1, false, 3.0};
    const DenseOperator h = build_h_scar_spin1(cfg, spec);
    TransferJob job;

    CHECK_THROWS_AS(infidelity_scan(h, PerturbationKind::global_x, {1e-2, 1e-1}, job, cfg),
                    std::invalid_argument);  // spans one decade only
    CHECK_THROWS_AS(infidelity_scan(h, PerturbationKind::global_x, {1e-1, 1e-2, 1e-3}, job, cfg),
                    std::invalid_argument);  // not ascending
    CHECK_THROWS_AS(infidelity_scan(h, PerturbationKind::global_x, {-1.0, 1.0}, job, cfg),
                    std::invalid_argument);

    // every point under the numerical floor: rejected with the data attached
    CHECK_THROWS_AS(infidelity_scan(h, PerturbationKind::global_x, {1e-14, 1e-13, 1e-12}, job, cfg),
                    numerical_error);
}
