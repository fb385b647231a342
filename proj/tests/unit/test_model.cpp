#include <doctest.h>

#include <algorithm>
#include <bit>

#include "oracle.hpp"
#include "spinchain/model.hpp"
#include "support.hpp"

using namespace spinchain;

TEST_SUITE("model") {

TEST_CASE("coupling matrix entries and kac constant") {
    SUBCASE("two sites") {
        const auto c = coupling_matrix(ModelSpec::power_law(2, 1.0, 2.0));
        CHECK(c(0, 1) == doctest::Approx(1.0));
        CHECK(c.kac == doctest::Approx(0.5));
    }
    SUBCASE("alpha zero is all-to-all") {
        const auto c = coupling_matrix(ModelSpec::power_law(4, 1.0, 0.0));
        for(int m = 0; m < 4; ++m)
            for(int n = 0; n < 4; ++n) CHECK(c(m, n) == doctest::Approx(m == n ? 0.0 : 1.0));
        CHECK(c.kac == doctest::Approx(1.5));
    }
    SUBCASE("nearest neighbour") {
        const auto c = coupling_matrix(ModelSpec::nearest_neighbour(4, 1.0));
        CHECK(c.kac == doctest::Approx(0.75));
        CHECK(c(0, 2) == 0.0);
        CHECK(c(2, 3) == 1.0);
    }
    SUBCASE("alpha one") {
        const auto c = coupling_matrix(ModelSpec::power_law(4, 1.0, 1.0));
        CHECK(c(0, 2) == doctest::Approx(0.5));
        CHECK(c(0, 3) == doctest::Approx(1.0 / 3.0));
        CHECK(c(3, 0) == c(0, 3));
    }
    SUBCASE("kac is the pair sum over N") {
        const int  n = 9;
        const auto c = coupling_matrix(ModelSpec::power_law(n, 0.7, 1.3));
        double     s = 0;
        for(int d = 1; d < n; ++d) s += (n - d) * 0.7 / std::pow(d, 1.3);
        CHECK(c.kac == doctest::Approx(s / n).epsilon(1e-14));
    }
}

TEST_CASE("model spec validation") {
    CHECK_THROWS_AS((void)ModelSpec::power_law(4, 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS((void)ModelSpec::power_law(4, 1.0, -0.5), ArgumentError);
    CHECK_THROWS_AS((void)ModelSpec::power_law(1, 1.0, 1.0), ArgumentError);
    CHECK_THROWS_AS((void)ModelSpec::power_law(kMaxSites + 1, 1.0, 1.0), ArgumentError);
    ModelSpec both{.n_sites = 4, .j0 = 1, .alpha = 1.0, .nn_limit = true};
    CHECK_THROWS_AS(both.validate(), ArgumentError);
    ModelSpec neither{.n_sites = 4};
    CHECK_THROWS_AS(neither.validate(), ArgumentError);
    CHECK(ModelSpec::nearest_neighbour(4, 1).alpha_label() == "nn");
    CHECK(ModelSpec::power_law(4, 1, 0.5).alpha_label() == "0.5");
}

TEST_CASE("sector dimensions") {
    CHECK(sector_dimension(20, 1) == 20);
    CHECK(sector_dimension(12, 6) == 924);
    CHECK(sector_dimension(4, 0) == 1);
    CHECK(sector_dimension(24, 12) == 2704156);
    CHECK_THROWS_AS((void)sector_dimension(4, 5), ArgumentError);
    CHECK_THROWS_AS((void)sector_dimension(4, -1), ArgumentError);
}

TEST_CASE("sector enumeration order and ranks") {
    const auto b = enumerate_sector(4, 2);
    const std::vector<Mask> want{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100};
    CHECK(std::vector<Mask>(b->states().begin(), b->states().end()) == want);
    CHECK(b->rank(0b0101) == 1);

    const auto b3 = enumerate_sector(3, 1);
    CHECK(std::vector<Mask>(b3->states().begin(), b3->states().end()) == std::vector<Mask>{1, 2, 4});

    // brute-force filter of 0..2^N-1 is the reference ordering
    for(int n : {1, 5, 9, 13}) {
        for(int k = 0; k <= n; ++k) {
            const auto s = enumerate_sector(n, k);
            std::vector<Mask> ref;
            for(Mask m = 0; m < (Mask{1} << n); ++m)
                if(std::popcount(m) == k) ref.push_back(m);
            REQUIRE(s->dim() == ref.size());
            for(std::size_t i = 0; i < ref.size(); ++i) {
                CHECK(s->state(i) == ref[i]);
                CHECK(s->rank(ref[i]) == i);
                CHECK(colex_rank(ref[i]) == i);
            }
        }
    }
}

TEST_CASE("sector capacity guard") { CHECK_THROWS_AS((void)enumerate_sector(40, 20), ArgumentError); }

TEST_CASE("neel and single-excitation states") {
    CHECK(neel_mask(4) == 0b1010);
    CHECK(neel_mask(6) == 0b101010);
    CHECK(neel_mask(5) == 0b01010);

    const auto b4  = enumerate_sector(4, 2);
    const auto psi = neel_state(b4);
    CHECK(psi.amplitudes[static_cast<Eigen::Index>(b4->rank(0b1010))] == cplx(1.0));
    CHECK(psi.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)neel_state(enumerate_sector(4, 1)), ArgumentError);

    const auto b5 = enumerate_sector(5, 1);
    const auto e  = single_excitation_state(b5, 2);
    CHECK(e.amplitudes[static_cast<Eigen::Index>(b5->rank(0b00100))] == cplx(1.0));
    CHECK(e.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)single_excitation_state(b5, 5), ArgumentError);
    CHECK_THROWS_AS((void)single_excitation_state(b5, -1), ArgumentError);
    CHECK_THROWS_AS((void)single_excitation_state(b4, 0), ArgumentError);
}

TEST_CASE("hamiltonian action") {
    SUBCASE("two sites from the Pauli form") {
        // X(x)X + Y(x)Y maps |01> <-> |10> with amplitude 2
        const auto c   = coupling_matrix(ModelSpec::power_law(2, 1.0, 3.7));
        const auto b   = enumerate_sector(2, 1);
        StateVector in{b, Eigen::VectorXcd::Zero(2)};
        in.amplitudes[0] = 1.0;
        const auto out   = apply_hamiltonian(c, *b, in);
        CHECK(std::abs(out.amplitudes[0]) < 1e-15);
        CHECK(out.amplitudes[1].real() == doctest::Approx(2.0));
    }
    SUBCASE("vacuum is annihilated") {
        const auto c = coupling_matrix(ModelSpec::power_law(6, 1.0, 0.5));
        const auto b = enumerate_sector(6, 0);
        StateVector v{b, Eigen::VectorXcd::Ones(1)};
        CHECK(apply_hamiltonian(c, *b, v).amplitudes.norm() == 0.0);
    }
    SUBCASE("basis mismatch") {
        const auto c = coupling_matrix(ModelSpec::power_law(6, 1.0, 0.5));
        const auto b = enumerate_sector(6, 3);
        const auto psi = neel_state(b);
        CHECK_THROWS_AS((void)apply_hamiltonian(c, *enumerate_sector(6, 2), psi), ArgumentError);
        CHECK_THROWS_AS((void)apply_hamiltonian(coupling_matrix(ModelSpec::power_law(8, 1.0, 0.5)), *b, psi), ArgumentError);
    }
    SUBCASE("matches the full-space Pauli Hamiltonian") {
        for(double alpha : {0.0, 0.5, 2.0, -1.0}) {
            const int  n = 10;
            const auto c = coupling_matrix(test::spec_for(n, alpha));
            const auto full = oracle::full_hamiltonian(c);
            for(int k : {1, 3, 5}) {
                const auto b   = enumerate_sector(n, k);
                const auto psi = oracle::random_state(b, 17u + static_cast<unsigned>(k));
                const auto got = apply_hamiltonian(c, *b, psi);
                const Eigen::VectorXcd want = oracle::restrict_to(full * oracle::embed(psi), *b);
                CHECK(test::max_abs_diff(got.amplitudes, want) < 1e-12);
            }
        }
    }
}

TEST_CASE("sector block is real symmetric and the cached path matches the matrix-free one") {
    const auto c = coupling_matrix(ModelSpec::power_law(10, 1.0, 0.8));
    const auto b = enumerate_sector(10, 5);
    const SectorHamiltonian cached(c, b);
    const SectorHamiltonian direct(c, b, 0);
    CHECK(cached.cached());
    CHECK_FALSE(direct.cached());
    const Eigen::MatrixXd h = cached.dense();
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.diagonal().cwiseAbs().maxCoeff() == 0.0);

    const auto       psi = oracle::random_state(b, 3);
    Eigen::VectorXcd x, y;
    cached.apply(psi.amplitudes, x);
    direct.apply(psi.amplitudes, y);
    CHECK(test::max_abs_diff(x, y) < 1e-13);
    CHECK(cached.energy(psi.amplitudes) == doctest::Approx(psi.amplitudes.dot(x).real()));
}

TEST_CASE("total excitation number commutes with the full Hamiltonian") {
    const auto c  = coupling_matrix(ModelSpec::power_law(8, 1.0, 0.3));
    const auto h  = oracle::full_hamiltonian(c);
    const auto z  = oracle::total_z(8);
    const Eigen::MatrixXcd zh = z.asDiagonal() * h;
    const Eigen::MatrixXcd hz = h * z.asDiagonal();
    CHECK((zh - hz).cwiseAbs().maxCoeff() == 0.0);
}

}
