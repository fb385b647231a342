#include <doctest.h>

#include <bit>
#include <random>

#include "oracle.hpp"
#include "spinchain/entropy.hpp"
#include "spinchain/propagate.hpp"
#include "support.hpp"

using namespace spinchain;

namespace {

StateVector quenched(int n, double alpha, double t) {
    const auto c = coupling_matrix(test::spec_for(n, alpha));
    const auto b = enumerate_sector(n, n / 2);
    return evolve_dense(c, b, neel_state(b), TimeGrid{{t}}).states[0];
}

} // namespace

TEST_SUITE("entropy") {

TEST_CASE("von Neumann entropy of simple spectra") {
    CHECK(von_neumann({{1.0}}) == 0.0);
    CHECK(von_neumann({{0.5, 0.5}}) == doctest::Approx(1.0));
    CHECK(von_neumann({{0.25, 0.25, 0.25, 0.25}}) == doctest::Approx(2.0));
    CHECK(von_neumann({{0.7, 0.2, 0.1}}) == doctest::Approx(test::shannon({0.7, 0.2, 0.1})));
}

TEST_CASE("Schmidt spectra") {
    SUBCASE("product state") {
        const auto b   = enumerate_sector(8, 4);
        const auto psi = neel_state(b);
        for(Mask a : {0b1u, 0b110u, 0b10101010u, 0b1111u}) {
            const auto s = subsystem_spectrum(psi, SiteSubset{a});
            CHECK(von_neumann(s) == 0.0);
            CHECK(s.weights.front() == doctest::Approx(1.0));
        }
        CHECK(subsystem_spectrum(psi, SiteSubset{}).weights == std::vector<double>{1.0});
    }
    SUBCASE("two-site Bell state") {
        const auto b = enumerate_sector(2, 1);
        StateVector psi{b, Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0))};
        const auto s = subsystem_spectrum(psi, SiteSubset::of({0}));
        REQUIRE(s.weights.size() >= 2);
        CHECK(s.weights[0] == doctest::Approx(0.5));
        CHECK(s.weights[1] == doctest::Approx(0.5));
        CHECK(entanglement_entropy(psi, SiteSubset::of({0})) == doctest::Approx(1.0));
    }
}

TEST_CASE("subset entropies match explicit partial traces") {
    for(int n : {6, 8}) {
        for(double alpha : {0.0, 0.5, -1.0}) {
            const auto psi  = quenched(n, alpha, 0.9);
            const auto full = oracle::embed(psi);
            const auto tab  = subset_entropy_table(psi);
            REQUIRE(tab.complete());
            for(Mask m = 0; m < (Mask{1} << n); ++m) CHECK(std::abs(tab(m) - oracle::entropy(full, n, m)) < 1e-10);
        }
    }
}

TEST_CASE("partial table and complete table agree") {
    const auto psi  = quenched(10, 0.4, 1.2);
    const auto full = subset_entropy_table(psi);
    std::vector<Mask> list{0b11, 0b1100, 0b111000000, 0b1010101010};
    const auto part = subset_entropy_table(psi, list);
    CHECK_FALSE(part.complete());
    for(Mask m : list) {
        CHECK(part(m) == doctest::Approx(full(m)).epsilon(1e-12));
        // complement fallback
        CHECK(part(full_mask(10) & ~m) == doctest::Approx(full(m)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)part(Mask{0b101}), ArgumentError);
    CHECK_THROWS_AS((void)subset_entropy_table(psi, 8), CapacityError);
}

TEST_CASE("product state table") {
    const auto b   = enumerate_sector(8, 4);
    const auto tab = subset_entropy_table(neel_state(b));
    REQUIRE(tab.entries().size() == 256);
    for(double s : tab.entries()) CHECK(s == 0.0);
    const auto a = SiteSubset::of({0, 1}), bb = SiteSubset::of({3}), c = SiteSubset::of({5, 6});
    CHECK(mutual_information(tab, a, bb) == 0.0);
    CHECK(tmi(tab, a, bb, c) == 0.0);
    CHECK(monogamy_gap(tab, a, bb, c) == 0.0);
}

TEST_CASE("Bell pair mutual information") {
    const auto b = enumerate_sector(2, 1);
    StateVector psi{b, Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0))};
    const auto tab = subset_entropy_table(psi);
    CHECK(mutual_information(tab, SiteSubset::of({0}), SiteSubset::of({1})) == doctest::Approx(2.0));
}

TEST_CASE("TMI and MI identities on quenched states") {
    const int  n   = 8;
    const auto psi = quenched(n, 0.3, 0.6);
    const auto tab = subset_entropy_table(psi);
    const auto a = SiteSubset::of({0, 1}), b = SiteSubset::of({2, 3}), c = SiteSubset::of({4, 5});
    const double i3 = tmi(tab, a, b, c);
    CHECK(monogamy_gap(tab, a, b, c) == doctest::Approx(-i3));
    CHECK(i3 == doctest::Approx(mutual_information(tab, a, b) + mutual_information(tab, a, c) - mutual_information(tab, a, b | c)));
    CHECK(tmi(tab, b, c, a) == doctest::Approx(i3));
    CHECK(tmi(tab, c, a, b) == doctest::Approx(i3));
    CHECK(tmi_lookup(tab.entries(), a.bits, b.bits, c.bits) == doctest::Approx(i3));
}

TEST_CASE("entropy bounds, complement symmetry and monotonicity on random states") {
    std::mt19937_64 rng(5);
    for(int k : {2, 3, 5}) {
        const int  n   = 10;
        const auto b   = enumerate_sector(n, k);
        const auto psi = oracle::random_state(b, 100u + static_cast<unsigned>(k));
        const auto tab = subset_entropy_table(psi);
        const Mask all = full_mask(n);
        for(Mask m = 0; m <= all; ++m) {
            const int sz = std::popcount(m);
            CHECK(tab(m) >= -1e-12);
            CHECK(tab(m) <= std::min(sz, n - sz) + 1e-12);
            CHECK(tab(m) == doctest::Approx(tab(all & ~m)).epsilon(1e-12));
        }
        std::uniform_int_distribution<int> who(0, 3);
        for(int trial = 0; trial < 200; ++trial) {
            Mask part[4] = {};
            for(int s = 0; s < n; ++s) part[who(rng)] |= Mask{1} << s;
            const Mask x = part[0], y = part[1], z = part[2];
            if(!x || !y || !z) continue;
            const SiteSubset a{x}, bb{y}, c{z};
            CHECK(mutual_information(tab, a, bb) >= -1e-9);
            CHECK(mutual_information(tab, a, bb | c) >= mutual_information(tab, a, bb) - 1e-9);
        }
    }
}

TEST_CASE("argument errors") {
    const auto tab = subset_entropy_table(neel_state(enumerate_sector(6, 3)));
    CHECK_THROWS_AS((void)mutual_information(tab, SiteSubset::of({0, 1}), SiteSubset::of({1})), ArgumentError);
    CHECK_THROWS_AS((void)mutual_information(tab, SiteSubset{}, SiteSubset::of({1})), ArgumentError);
    CHECK_THROWS_AS((void)tmi(tab, SiteSubset::of({0}), SiteSubset::of({1}), SiteSubset::of({1, 2})), ArgumentError);
    CHECK_THROWS_AS((void)SubsetEntropyTable(3, std::vector<double>(7)), ArgumentError);
}

}
