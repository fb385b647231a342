#include <doctest.h>

#include <bit>
#include <random>
#include <set>

#include "spinchain/partitions.hpp"
#include "support.hpp"

using namespace spinchain;

namespace {

// Every map site -> {A, B, C, D} with A, B, C nonempty, reduced to sorted
// mask triples.
std::set<std::array<Mask, 3>> brute_force_triples(int n) {
    std::set<std::array<Mask, 3>> out;
    std::size_t                   total = 1;
    for(int i = 0; i < n; ++i) total *= 4;
    for(std::size_t code = 0; code < total; ++code) {
        std::array<Mask, 4> parts{};
        std::size_t         c = code;
        for(int s = 0; s < n; ++s, c /= 4) parts[c % 4] |= Mask{1} << s;
        if(!parts[0] || !parts[1] || !parts[2]) continue;
        std::array<Mask, 3> t{parts[0], parts[1], parts[2]};
        std::sort(t.begin(), t.end());
        out.insert(t);
    }
    return out;
}

TmiSeries series_of(std::vector<double> t, std::vector<double> mins) {
    TmiSeries s;
    s.grid.times = std::move(t);
    for(double m : mins) s.extrema.push_back({m, {}, std::max(m, 0.0), {}});
    return s;
}

} // namespace

TEST_SUITE("partitions") {

TEST_CASE("canonical triples") {
    const auto p = PartitionTriple::canonical(0b100, 0b001, 0b010);
    CHECK(p == PartitionTriple{1, 2, 4});
    CHECK(p.is_canonical());
    CHECK(p.abc() == 7);
    CHECK_THROWS_AS((void)PartitionTriple::canonical(0, 1, 2), ArgumentError);
    CHECK_THROWS_AS((void)PartitionTriple::canonical(3, 1, 4), ArgumentError);
}

TEST_CASE("contiguous quarters") {
    const auto q = contiguous_quarters(20);
    CHECK(q.a == 0b11111u);
    CHECK(q.b == 0b11111u << 5);
    CHECK(q.c == 0b11111u << 10);
    const auto q12 = contiguous_quarters(12);
    CHECK(std::popcount(q12.a) == 3);
    CHECK(std::popcount(q12.c) == 3);
    CHECK_THROWS_AS((void)contiguous_quarters(10), ArgumentError);
}

TEST_CASE("AllAssignments against brute force") {
    for(int n = 3; n <= 8; ++n) {
        const auto ref  = brute_force_triples(n);
        const auto list = enumerate_partitions(n, AllAssignments{});
        CHECK(all_assignments_count(n) == ref.size());
        REQUIRE(list.size() == ref.size());
        std::set<std::array<Mask, 3>> got;
        for(const auto &p : list) {
            CHECK(p.is_canonical());
            got.insert({p.a, p.b, p.c});
        }
        CHECK(got == ref);
        CHECK(std::is_sorted(list.begin(), list.end()));
    }
    CHECK(all_assignments_count(4) == 10);
    CHECK(all_assignments_count(12) == (16777216ull - 3 * 531441ull + 3 * 4096ull - 1) / 6);
    CHECK_THROWS_AS((void)enumerate_partitions(17, AllAssignments{}), CapacityError);
}

TEST_CASE("FixedSizes and ContiguousBlocks") {
    CHECK(enumerate_partitions(4, FixedSizes{1, 1, 1}).size() == 4);
    // sizes as a multiset: choose A, B, C sizes {1, 2, 2} at N = 6
    std::size_t want = 0;
    for(const auto &t : brute_force_triples(6)) {
        std::array<int, 3> s{std::popcount(t[0]), std::popcount(t[1]), std::popcount(t[2])};
        std::sort(s.begin(), s.end());
        if(s == std::array<int, 3>{1, 2, 2}) ++want;
    }
    CHECK(enumerate_partitions(6, FixedSizes{2, 1, 2}).size() == want);
    CHECK_THROWS_AS((void)enumerate_partitions(4, FixedSizes{2, 2, 1}), ArgumentError);

    for(int n : {4, 7, 12}) {
        const auto list = enumerate_partitions(n, ContiguousBlocks{});
        CHECK(list.size() == binomial(n, 3));
        for(const auto &p : list) {
            // each block is a run of consecutive sites, in chain order
            for(Mask m : {p.a, p.b, p.c}) CHECK(std::has_single_bit((m >> std::countr_zero(m)) + 1));
            CHECK(std::countr_zero(p.b) == 32 - std::countl_zero(p.a));
            CHECK(std::countr_zero(p.c) == 32 - std::countl_zero(p.b));
        }
    }
    CHECK(describe(FixedSizes{1, 2, 3}) == "sizes:1,2,3");
    CHECK(describe(AllAssignments{}) == "all");
}

TEST_CASE("enumeration is idempotent under canonicalization") {
    const auto list = enumerate_partitions(7, AllAssignments{});
    std::vector<PartitionTriple> again;
    for(const auto &p : list) again.push_back(PartitionTriple::canonical(p.c, p.a, p.b));
    CHECK(again == list);
}

TEST_CASE("minmax over a list matches a serial scan") {
    const int n = 8;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 3);
    std::vector<double> raw(std::size_t{1} << n);
    for(auto &x : raw) x = u(rng);
    raw[0] = 0;
    const SubsetEntropyTable tab(n, raw);
    const auto list = enumerate_partitions(n, AllAssignments{});
    const auto e    = minmax_tmi(tab, list);
    double lo = INFINITY, hi = -INFINITY;
    PartitionTriple plo, phi;
    for(const auto &p : list) {
        const double v = raw[p.a] + raw[p.b] + raw[p.c] - raw[p.a | p.b] - raw[p.a | p.c] - raw[p.b | p.c] + raw[p.abc()];
        if(v < lo) lo = v, plo = p;
        if(v > hi) hi = v, phi = p;
    }
    CHECK(e.min == lo);
    CHECK(e.max == hi);
    CHECK(e.argmin == plo);
    CHECK(e.argmax == phi);

    const auto streamed = minmax_tmi(tab, PartitionStrategy{AllAssignments{}});
    CHECK(streamed.min == doctest::Approx(lo).epsilon(1e-14));
    CHECK(streamed.argmax == phi);

    CHECK_THROWS_AS((void)minmax_tmi(tab, std::span<const PartitionTriple>{}), ArgumentError);
}

TEST_CASE("product-state extrema are zero") {
    const SubsetEntropyTable tab(6, std::vector<double>(64, 0.0));
    const auto e = minmax_tmi(tab, enumerate_partitions(6, AllAssignments{}));
    CHECK(e.min == 0.0);
    CHECK(e.max == 0.0);
}

TEST_CASE("tau from the minimal-TMI track") {
    CHECK(*tau_sign_change(series_of({0, 0.1, 0.2}, {0, -0.5, -0.6})) == doctest::Approx(0.0));
    CHECK_FALSE(tau_sign_change(series_of({0, 0.1, 0.2}, {0, 0.1, 0.0})).has_value());
    // crossing between 0.2 and 0.3: 0.2 + 0.1 * 0.1 / 0.4
    CHECK(*tau_sign_change(series_of({0, 0.1, 0.2, 0.3}, {0, 0.2, 0.1, -0.3})) == doctest::Approx(0.225));
    // the threshold shifts the level being crossed
    CHECK_FALSE(tau_sign_change(series_of({0, 0.1}, {0, -1e-12}), 1e-10).has_value());
    CHECK(*tau_sign_change(series_of({0, 0.1}, {-1.0, -1.0})) == 0.0);

    auto bad = series_of({0, 0.1}, {0});
    CHECK_THROWS_AS((void)tau_sign_change(bad), ArgumentError);
    CHECK_THROWS_AS((void)tau_sign_change(series_of({0, 0.1}, {0, 0}), -1.0), ArgumentError);
    TmiSeries empty;
    empty.grid.times = {0.0};
    CHECK_THROWS_AS((void)tau_sign_change(empty), ArgumentError);
}

TEST_CASE("light-cone onset") {
    const auto spec20 = ModelSpec::power_law(20, 1.0, 2.0);
    CHECK(lightcone_onset(spec20, contiguous_quarters(20)) == doctest::Approx(6.0 / 4.0));
    CHECK(lightcone_onset(ModelSpec::nearest_neighbour(16, 1.0), contiguous_quarters(16)) == doctest::Approx(5.0 / 4.0));
    CHECK(lightcone_onset(ModelSpec::power_law(20, 2.0, 2.0), contiguous_quarters(20)) == doctest::Approx(6.0 / 8.0));
    // single sites 2, 5, 9: pairwise distances 3, 4, 7
    const PartitionTriple singles{Mask{1} << 2, Mask{1} << 5, Mask{1} << 9};
    CHECK(lightcone_onset(ModelSpec::power_law(12, 1.0, 1.0), singles) == doctest::Approx(7.0 / 4.0));
    CHECK(min_distance(0b1001, 0b0110) == 1);
    CHECK_THROWS_AS((void)min_distance(0, 1), ArgumentError);
}

}
