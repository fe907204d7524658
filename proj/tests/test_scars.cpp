#include <catch2/catch_amalgamated.hpp>

#include "scarpst/dynamics.hpp"
#include "scarpst/hilbert.hpp"
#include "scarpst/scars.hpp"

using namespace scarpst;

TEST_CASE("effective spin operators", "[scars]")
{
    // N=2: the single-excitation sector realizes a spin-1/2 with Jx = sigma_x / 2
    ChainConfig cfg2{2, 2, 0.0, 1.0, 1};
    const auto ops2 = effective_spin_ops(cfg2);
    CHECK(max_abs(ops2.jx - 0.5 * pauli_x()) <= 1e-15);

    ChainConfig cfg{9, 2, 0.0, 1.0, 1};
    const auto ops = effective_spin_ops(cfg);
    // Jz is diagonal with integer-spaced eigenvalues from -(N-1)/2 to (N-1)/2
    for (int n = 1; n <= 9; ++n) CHECK(ops.jz(n - 1, n - 1).real() == 0.5 * (2 * n - 9 - 1));

    const complexd i_unit(0, 1);
    CHECK(max_abs(ops.jx * ops.jy - ops.jy * ops.jx - i_unit * ops.jz) <= 1e-10);
    CHECK(max_abs(ops.jy * ops.jz - ops.jz * ops.jy - i_unit * ops.jx) <= 1e-10);
    CHECK(max_abs(ops.jz * ops.jx - ops.jx * ops.jz - i_unit * ops.jy) <= 1e-10);

    const double j = 0.5 * (9 - 1);
    const DenseOperator casimir = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
    CHECK(max_abs(casimir - j * (j + 1) * DenseOperator::Identity(9, 9)) <= 1e-10);
}

TEST_CASE("chain restriction to the single-excitation sector is 2 lambda Jx", "[scars]")
{
    ChainConfig cfg{7, 2, 0.0, 1.4, 1};
    const DenseOperator h = build_h_pst(cfg);
    const auto ops = effective_spin_ops(cfg);
    DenseOperator block(cfg.num_sites, cfg.num_sites);
    for (int m = 1; m <= cfg.num_sites; ++m)
        for (int n = 1; n <= cfg.num_sites; ++n)
            block(m - 1, n - 1) =
                h(single_excitation_index(m, cfg), single_excitation_index(n, cfg));
    // equality up to a multiple of the identity in the sector
    const complexd c = (block - 2.0 * cfg.lambda * ops.jx).trace() / static_cast<double>(cfg.num_sites);
    CHECK(max_abs(block - 2.0 * cfg.lambda * ops.jx
                  - c * DenseOperator::Identity(cfg.num_sites, cfg.num_sites)) <= 1e-12);
}

TEST_CASE("x-basis rotation", "[scars]")
{
    ChainConfig cfg{8, 2, 0.0, 1.0, 1};
    const auto ops = effective_spin_ops(cfg);
    const DenseOperator u = x_basis_rotation(cfg);
    CHECK(max_abs(u * u.adjoint() - DenseOperator::Identity(8, 8)) <= 1e-10);
    CHECK(max_abs(u * ops.jz * u.adjoint() - ops.jx) <= 1e-10);

    // N=2 by hand: |x_1> = (|1> - |2>)/sqrt(2), Jx eigenvalue -1/2
    ChainConfig cfg2{2, 2, 0.0, 1.0, 1};
    const DenseOperator u2 = x_basis_rotation(cfg2);
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(u2(0, 0) - complexd(r, 0)) <= 1e-12);
    CHECK(std::abs(u2(1, 0) - complexd(-r, 0)) <= 1e-12);
}

TEST_CASE("scar basis structure", "[scars]")
{
    ChainConfig cfg{8, 2, 0.3, 1.0, 1};
    const ScarBasis basis = scar_basis(cfg);
    REQUIRE(basis.xstates.size() == 8);
    REQUIRE(basis.energies.size() == 9);

    // orthonormal set of N+1 vectors
    const DenseOperator b = scar_subspace_matrix(basis);
    CHECK(max_abs(b.adjoint() * b - DenseOperator::Identity(9, 9)) <= 1e-10);

    // every |x_n> is a Jx eigenstate with eigenvalue (2n - N - 1)/2 ...
    const auto ops = effective_spin_ops(cfg);
    for (int n = 1; n <= 8; ++n) {
        const double jx_val = 0.5 * (2 * n - 8 - 1);
        CHECK((ops.jx_full * basis.xstates[n - 1] - jx_val * basis.xstates[n - 1]).norm() <= 1e-10);
    }
    // ... and lives in the single-excitation magnetization sector
    const DenseOperator m = magnetization_operator(cfg);
    for (const auto& x : basis.xstates) CHECK((m * x - double(8 - 2) * x).norm() <= 1e-12);
}

TEST_CASE("scar vectors are eigenstates of the scarred chain", "[scars]")
{
    ChainConfig cfg{8, 2, 0.3, 1.0, 1};
    const ScarBasis basis = scar_basis(cfg);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        RandomInteractionSpec spec{3, seed, true, 0.0};
        const auto report = verify_scar_eigenstates(build_h_scar(cfg, spec), basis);
        CHECK(report.max_residual <= 1e-8);
    }

    // they are exact eigenstates of the unperturbed chain too
    CHECK(verify_scar_eigenstates(build_h_pst(cfg), basis).max_residual <= 1e-10);

    // a thermal chain has no reason to preserve them
    RandomInteractionSpec spec{3, 1, true, 0.0};
    CHECK(verify_scar_eigenstates(build_h_thermal(cfg, spec), basis).max_residual > 0.1);
}

TEST_CASE("spin-1 scar basis", "[scars]")
{
    ChainConfig cfg{6, 3, 0.2, 1.0, 1};
    const ScarBasis basis = scar_basis_spin1(cfg);
    REQUIRE(basis.xstates.size() == 6);
    CHECK(basis.energies.size() == 6 + 1);  // N+1 scar states

    const DenseOperator b = scar_subspace_matrix(basis);
    CHECK(max_abs(b.adjoint() * b - DenseOperator::Identity(7, 7)) <= 1e-10);

    // the projected interaction annihilates every basis vector
    RandomInteractionSpec spec{2, 3, false, 3.0};
    const DenseOperator added = build_h_scar_spin1(cfg, spec) - build_h_pst_spin1(cfg);
    CHECK((added * basis.vacuum).norm() <= 1e-12);
    for (const auto& x : basis.xstates) CHECK((added * x).norm() <= 1e-12);

    // harmonic ladder with spacing 2 lambda under the scarred chain
    const auto report = verify_scar_eigenstates(build_h_scar_spin1(cfg, spec), basis);
    CHECK(report.max_residual <= 1e-8);
    for (int n = 2; n <= 6; ++n)
        CHECK(basis.energies(n) - basis.energies(n - 1) == Catch::Approx(2.0 * cfg.lambda).margin(1e-12));
}

TEST_CASE("scar states obey the half-chain entanglement ceiling", "[scars]")
{
    for (int n_sites : {7, 8}) {
        ChainConfig cfg{n_sites, 2, 0.0, 1.0, 1};
        const ScarBasis basis = scar_basis(cfg);
        const int cut = (n_sites + 1) / 2;
        std::set<int> keep;
        for (int s = cut + 1; s <= n_sites; ++s) keep.insert(s);
        const double bound = scar_entropy_bound(cfg);
        for (const auto& x : basis.xstates)
            CHECK(von_neumann_entropy(partial_trace(x, keep, cfg)) <= bound + 1e-9);
    }
}

TEST_CASE("interaction classification by rank counting", "[scars]")
{
    const auto spin1 = classify_interactions(build_projector(ProjectorKind::spin_one_two_body));
    CHECK(spin1.annihilated == 45);
    CHECK(spin1.fixed == 36);
    CHECK(spin1.other == 0);

    const auto identity = classify_interactions(DenseOperator::Identity(9, 9));
    CHECK(identity.annihilated == 0);
    CHECK(identity.fixed == 81);
    CHECK(identity.other == 0);

    const auto zero = classify_interactions(DenseOperator::Zero(9, 9));
    CHECK(zero.annihilated == 81);
    CHECK(zero.fixed == 0);
    CHECK(zero.other == 0);

    // the dimensions always sum to the squared pair dimension
    const auto half = classify_interactions(build_projector(ProjectorKind::spin_half_pxxp));
    CHECK(half.annihilated + half.fixed + half.other == 64);

    CHECK_THROWS_AS(classify_interactions(0.5 * DenseOperator::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("projector commutator structure", "[scars]")
{
    ChainConfig cfg{6, 2, 0.0, 1.0, 1};
    const auto report = shiraishi_mori_report(cfg);
    REQUIRE(report.h_pst_projector_comm.size() == 4);
    for (double c : report.jx_projector_comm) CHECK(c <= 1e-12);
    for (double c : report.h_pst_projector_comm) CHECK(c > 0.01);
    CHECK(report.spin1_trivial_comm_max <= 1e-12);

    ChainConfig wrong{6, 3, 0.0, 1.0, 1};
    CHECK_THROWS_AS(shiraishi_mori_report(wrong), std::invalid_argument);
}

TEST_CASE("trivial embedding comparison", "[scars]")
{
    ChainConfig cfg4{4, 3, 0.0, 1.0, 1};
    const auto report = trivial_embedding_compare(cfg4);
    CHECK(report.trivial_kernel_dim == 16);   // 2^N
    CHECK(report.expected_trivial_dim == 16);
    CHECK(report.minimal_kernel_dim == 5);    // N+1
    CHECK(report.transfer_subspace_dim == 5);
    CHECK(report.family_minimal_diff <= 1e-15);
    CHECK(report.family_trivial_diff > 0.1);

    ChainConfig cfg3{3, 3, 0.0, 1.0, 1};
    const auto report3 = trivial_embedding_compare(cfg3);
    CHECK(report3.trivial_kernel_dim == 8);
    CHECK(report3.minimal_kernel_dim == 4);
}

TEST_CASE("robust interaction family", "[scars]")
{
    const DenseOperator p = build_projector(ProjectorKind::spin_one_two_body);
    const DenseOperator ptriv = build_projector(ProjectorKind::spin_one_trivial);

    // each member is preserved exactly by the minimal projector
    const DenseOperator h_a = robust_interaction_family(1, 0, 0, 0, 0);
    CHECK(max_abs(p * h_a * p - h_a) == 0.0);
    const DenseOperator generic = robust_interaction_family(1, 1, 1, 1, 1);
    CHECK(max_abs(p * generic * p - generic) == 0.0);
    CHECK(hermiticity_defect(generic) == 0.0);

    // the trivial projector destroys it
    CHECK(max_abs(ptriv * generic * ptriv - generic) > 0.1);
}
