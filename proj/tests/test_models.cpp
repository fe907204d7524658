#include <catch2/catch_amalgamated.hpp>

#include "scarpst/models.hpp"

using namespace scarpst;

TEST_CASE("random hermitian draws", "[models]")
{
    GaussianStream stream(42);
    const DenseOperator h = random_hermitian(8, stream);
    CHECK(hermiticity_defect(h) <= 1e-14);

    // determinism: the same seed reproduces the matrix bit for bit
    GaussianStream a(7), b(7);
    const DenseOperator ha = random_hermitian(8, a);
    const DenseOperator hb = random_hermitian(8, b);
    CHECK(max_abs(ha - hb) == 0.0);
}

TEST_CASE("random hermitian off-diagonal second moment", "[models]")
{
    // Monte-Carlo oracle: h = (A + A^dag)/2 with unit-variance complex
    // entries gives E|h_ij|^2 = 1 off the diagonal
    GaussianStream stream(2024);
    const int draws = 10000;
    double sum = 0.0;
    long count = 0;
    for (int d = 0; d < draws; ++d) {
        const DenseOperator h = random_hermitian(8, stream);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                if (i != j) {
                    sum += std::norm(h(i, j));
                    ++count;
                }
    }
    CHECK(sum / count == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("engineered coupling profile", "[models]")
{
    ChainConfig cfg{12, 2, 0.0, 0.7, 1};
    const auto profile = CouplingProfile::engineered(cfg);
    REQUIRE(profile.lambdas.size() == 11);
    // mirror symmetry holds bit for bit
    for (int n = 1; n <= 11; ++n) CHECK(profile.lambdas[n - 1] == profile.lambdas[11 - n]);
    for (double l : profile.lambdas) CHECK(l > 0.0);
    CHECK(profile.lambdas[5] == 6.0 * 0.7);  // central coupling sqrt(6*6)
    CHECK(*std::max_element(profile.lambdas.begin(), profile.lambdas.end()) == profile.lambdas[5]);
}

TEST_CASE("engineered chain Hamiltonian", "[models]")
{
    // N=2, omega=0, lambda=1: a single hopping element between |01> and |10>
    ChainConfig cfg{2, 2, 0.0, 1.0, 1};
    const DenseOperator h = build_h_pst(cfg);
    DenseOperator expected = DenseOperator::Zero(4, 4);
    expected(1, 2) = expected(2, 1) = 1.0;
    CHECK(max_abs(h - expected) <= 1e-15);

    // the all-zeros state is an eigenstate at omega N / 2
    ChainConfig cfg8{8, 2, 0.4, 1.0, 1};
    const DenseOperator h8 = build_h_pst(cfg8);
    StateVector vac = StateVector::Zero(cfg8.dimension());
    vac(vacuum_index(cfg8)) = 1.0;
    CHECK((h8 * vac - 0.5 * cfg8.omega * 8 * vac).norm() <= 1e-12);

    CHECK(hermiticity_defect(h8) <= 1e-12);
    ChainConfig wrong{4, 3, 0.0, 1.0, 1};
    CHECK_THROWS_AS(build_h_pst(wrong), std::invalid_argument);
}

TEST_CASE("thermal chain construction", "[models]")
{
    RandomInteractionSpec spec{3, 9, true, 0.0};

    // N=3: exactly one window, so H_thermal - H_PST is one embedded draw
    ChainConfig cfg3{3, 2, 0.0, 1.0, 1};
    const DenseOperator delta = build_h_thermal(cfg3, spec) - build_h_pst(cfg3);
    GaussianStream stream(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::window_term), 0));
    const DenseOperator h_draw = random_hermitian(8, stream);
    CHECK(max_abs(delta - h_draw) <= 1e-15);

    // homogeneous: every window embeds the identical draw
    ChainConfig cfg6{6, 2, 0.0, 1.0, 1};
    DenseOperator manual = build_h_pst(cfg6);
    for (int k = 1; k <= 4; ++k) manual += embed_local(h_draw, k, cfg6);
    CHECK(max_abs(build_h_thermal(cfg6, spec) - manual) <= 1e-15);

    // the random interaction breaks the U(1) symmetry
    const DenseOperator h = build_h_thermal(cfg6, spec);
    const DenseOperator m = magnetization_operator(cfg6);
    CHECK(max_abs(h * m - m * h) > 0.01);
    CHECK(hermiticity_defect(h) <= 1e-12);

    ChainConfig too_short{2, 2, 0.0, 1.0, 1};
    CHECK_THROWS_AS(build_h_thermal(too_short, spec), std::invalid_argument);

    // inhomogeneous draws differ across windows
    RandomInteractionSpec fresh{3, 9, false, 0.0};
    const DenseOperator h_fresh = build_h_thermal(cfg6, fresh);
    CHECK(max_abs(h_fresh - h) > 0.01);
}

TEST_CASE("scarred chain construction", "[models]")
{
    ChainConfig cfg{6, 2, 0.0, 1.0, 1};
    RandomInteractionSpec spec{3, 9, true, 0.0};
    const DenseOperator h_pst = build_h_pst(cfg);
    const DenseOperator h_scar = build_h_scar(cfg, spec);
    const DenseOperator added = h_scar - h_pst;

    // the projected sum annihilates the vacuum and every single excitation
    StateVector vac = StateVector::Zero(cfg.dimension());
    vac(vacuum_index(cfg)) = 1.0;
    CHECK((added * vac).norm() <= 1e-12);
    for (int n = 1; n <= cfg.num_sites; ++n) {
        StateVector exc = StateVector::Zero(cfg.dimension());
        exc(single_excitation_index(n, cfg)) = 1.0;
        CHECK((added * exc).norm() <= 1e-12);
    }

    // same seed: the scarred chain is the thermal chain with projected draws
    GaussianStream stream(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::window_term), 0));
    const DenseOperator h_draw = random_hermitian(8, stream);
    const DenseOperator p = build_projector(ProjectorKind::spin_half_pxxp);
    DenseOperator manual = h_pst;
    const DenseOperator projected = p * h_draw * p;
    for (int k = 1; k <= 4; ++k) manual += embed_local(projected, k, cfg);
    CHECK(max_abs(h_scar - manual) <= 1e-15);

    CHECK(hermiticity_defect(h_scar) <= 1e-12);
}

TEST_CASE("local projectors", "[models]")
{
    const DenseOperator pxxp = build_projector(ProjectorKind::spin_half_pxxp);
    CHECK(pxxp.trace().real() == 4.0);  // rank 8 - 4
    CHECK(max_abs(pxxp * pxxp - pxxp) == 0.0);
    CHECK(hermiticity_defect(pxxp) == 0.0);
    // annihilated configurations: 000, 001, 010, 100
    for (long idx : {0L, 1L, 2L, 4L}) CHECK(pxxp(idx, idx).real() == 0.0);
    for (long idx : {3L, 5L, 6L, 7L}) CHECK(pxxp(idx, idx).real() == 1.0);

    const DenseOperator p1 = build_projector(ProjectorKind::spin_one_two_body);
    CHECK(p1.trace().real() == 6.0);
    StateVector pp = StateVector::Zero(9);
    pp(8) = 1.0;  // |+,+>
    CHECK((p1 * pp).norm() == 0.0);
    StateVector mm = StateVector::Zero(9);
    mm(0) = 1.0;  // |-,->
    CHECK((p1 * mm - mm).norm() == 0.0);

    const DenseOperator triv = build_projector(ProjectorKind::spin_one_trivial);
    CHECK(triv.trace().real() == 5.0);  // rank 9 - 4
    CHECK((triv * mm).norm() == 0.0);
}

TEST_CASE("spin-1 engineered chain embeds the qubit chain", "[models]")
{
    ChainConfig spin1{4, 3, 0.3, 1.0, 1};
    ChainConfig half{4, 2, 0.3, 1.0, 1};
    const DenseOperator h1 = build_h_pst_spin1(spin1);
    const DenseOperator h2 = build_h_pst(half);

    // qubit |0> maps to |+> (digit 2), |1> to |-> (digit 0)
    const auto embed_index = [&](long qubit_idx) {
        long out = 0;
        for (int site = 1; site <= half.num_sites; ++site) {
            const int digit = basis_digit(qubit_idx, site, half);
            out = out * 3 + (digit == 0 ? 2 : 0);
        }
        return out;
    };
    for (long i = 0; i < half.dimension(); ++i)
        for (long j = 0; j < half.dimension(); ++j)
            CHECK(std::abs(h1(embed_index(i), embed_index(j)) - h2(i, j)) <= 1e-15);

    // |+>^N eigenstate at omega N / 2
    StateVector plus = StateVector::Zero(spin1.dimension());
    plus(vacuum_index(spin1)) = 1.0;
    CHECK((h1 * plus - 0.5 * spin1.omega * 4 * plus).norm() <= 1e-12);

    // the per-site |0> population is conserved
    DenseOperator zero_proj = DenseOperator::Zero(3, 3);
    zero_proj(1, 1) = 1.0;
    for (int n = 1; n <= spin1.num_sites; ++n) {
        const DenseOperator proj = embed_local(zero_proj, n, spin1);
        CHECK(max_abs(h1 * proj - proj * h1) <= 1e-12);
    }
}

TEST_CASE("spin-1 pair interactions", "[models]")
{
    RandomInteractionSpec spec{2, 5, false, 3.0};

    // N=2: a single pair term with unit decay factor
    ChainConfig cfg2{2, 3, 0.0, 1.0, 1};
    const DenseOperator delta2 = build_h_thermal_spin1(cfg2, spec) - build_h_pst_spin1(cfg2);
    GaussianStream s12(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::pair_term), 1 * 256 + 2));
    const DenseOperator h12 = random_hermitian(9, s12);
    CHECK(max_abs(delta2 - h12) <= 1e-15);

    // N=3 with cubic decay: pair (1,3) enters scaled by 1/8
    ChainConfig cfg3{3, 3, 0.0, 1.0, 1};
    DenseOperator manual = build_h_pst_spin1(cfg3);
    int pair_count = 0;
    for (int n = 1; n <= 3; ++n)
        for (int m = n + 1; m <= 3; ++m) {
            GaussianStream s(derive_seed(spec.seed, static_cast<std::uint64_t>(TermKind::pair_term),
                                         static_cast<std::uint64_t>(n) * 256 + m));
            manual += embed_pair(DenseOperator(random_hermitian(9, s) / std::pow(m - n, 3.0)), n, m, cfg3);
            ++pair_count;
        }
    CHECK(pair_count == 3);  // N (N - 1) / 2
    CHECK(max_abs(build_h_thermal_spin1(cfg3, spec) - manual) <= 1e-15);
    CHECK(hermiticity_defect(manual) <= 1e-12);
}

TEST_CASE("spin-1 scarred chain leaves the transfer subspace alone", "[models]")
{
    ChainConfig cfg{4, 3, 0.0, 1.0, 1};
    RandomInteractionSpec spec{2, 5, false, 3.0};
    const DenseOperator added = build_h_scar_spin1(cfg, spec) - build_h_pst_spin1(cfg);

    StateVector plus = StateVector::Zero(cfg.dimension());
    plus(vacuum_index(cfg)) = 1.0;
    CHECK((added * plus).norm() <= 1e-12);
    for (int n = 1; n <= cfg.num_sites; ++n) {
        StateVector flipped = StateVector::Zero(cfg.dimension());
        flipped(single_excitation_index(n, cfg)) = 1.0;  // X_n |+...+>
        CHECK((added * flipped).norm() <= 1e-12);
    }
}

TEST_CASE("builders are deterministic", "[models]")
{
    ChainConfig cfg{5, 2, 0.1, 1.3, 2};
    RandomInteractionSpec spec{3, 77, false, 0.0};
    CHECK(max_abs(build_h_thermal(cfg, spec) - build_h_thermal(cfg, spec)) == 0.0);
    CHECK(max_abs(build_h_scar(cfg, spec) - build_h_scar(cfg, spec)) == 0.0);

    ChainConfig cfg1{3, 3, 0.1, 1.3, 2};
    RandomInteractionSpec spec1{2, 77, false, 3.0};
    CHECK(max_abs(build_h_scar_spin1(cfg1, spec1) - build_h_scar_spin1(cfg1, spec1)) == 0.0);
}
