#include <doctest.h>

#include <random>

#include "spinchain/onebody.hpp"
#include "support.hpp"

using namespace spinchain;

TEST_SUITE("onebody") {

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.25) == doctest::Approx(test::shannon({0.25, 0.75})));
    CHECK(binary_entropy(0.25) == doctest::Approx(0.811278124459));
    CHECK(binary_entropy(-1e-13) == 0.0);
    CHECK_THROWS_AS((void)binary_entropy(-1e-6), ArgumentError);
    CHECK_THROWS_AS((void)binary_entropy(1.1), ArgumentError);
}

TEST_CASE("occupation weights") {
    std::vector<cplx> c(12, 0.0);
    c[1] = 1.0;
    const auto q = contiguous_quarters(12);
    auto       w = occupation_weights(c, SiteSubset{q.a}, SiteSubset{q.b}, SiteSubset{q.c});
    CHECK(w.p_a == 1.0);
    CHECK(w.p_b == 0.0);
    CHECK(w.p_c == 0.0);

    std::fill(c.begin(), c.end(), cplx(1.0 / std::sqrt(12.0)));
    w = occupation_weights(c, SiteSubset{q.a}, SiteSubset{q.b}, SiteSubset{q.c});
    CHECK(w.p_a == doctest::Approx(0.25));
    CHECK(w.p_b == doctest::Approx(0.25));
    CHECK(w.p_c == doctest::Approx(0.25));

    c[0] = 2.0;
    CHECK_THROWS_AS((void)occupation_weights(c, SiteSubset{q.a}, SiteSubset{q.b}, SiteSubset{q.c}), ArgumentError);
}

TEST_CASE("binary TMI") {
    const double peak = 4 * test::shannon({0.25, 0.75}) - 3;
    CHECK(tmi_binary({0.25, 0.25, 0.25}) == doctest::Approx(peak).epsilon(1e-12));
    CHECK(peak == doctest::Approx(0.245112).epsilon(1e-6));
    CHECK(tmi_binary({0.0, 0.3, 0.2}) == 0.0);
    CHECK(tmi_binary({0.3, 0.3, 0.4}) == 0.0);

    // direct evaluation through the four-outcome Shannon entropies
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for(int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const double s = a + b + c + d;
        a /= s, b /= s, c /= s, d /= s;
        const auto h = [](double p) { return test::shannon({p, 1 - p}); };
        const double want = h(a) + h(b) + h(c) + h(a + b + c) - h(a + b) - h(a + c) - h(b + c);
        CHECK(tmi_binary({a, b, c}) == doctest::Approx(want).epsilon(1e-12));
        CHECK(tmi_binary({a, b, c}) >= -1e-12);
    }
}

TEST_CASE("simplex scan") {
    double lo = INFINITY, hi = -INFINITY, arg_a = 0, arg_b = 0, arg_c = 0;
    for(int i = 0; i <= 100; ++i)
        for(int j = 0; i + j <= 100; ++j)
            for(int k = 0; i + j + k <= 100; ++k) {
                const double v = tmi_binary({i / 100.0, j / 100.0, k / 100.0});
                lo = std::min(lo, v);
                if(v > hi) hi = v, arg_a = i / 100.0, arg_b = j / 100.0, arg_c = k / 100.0;
            }
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(4 * test::shannon({0.25, 0.75}) - 3).epsilon(1e-12));
    CHECK(arg_a == 0.25);
    CHECK(arg_b == 0.25);
    CHECK(arg_c == 0.25);
}

TEST_CASE("onebody scan") {
    const auto c     = coupling_matrix(ModelSpec::power_law(8, 1.0, 0.5));
    const auto grid  = TimeGrid::uniform(2.0, 11);
    const auto parts = enumerate_partitions(8, AllAssignments{});
    const auto scan  = onebody_tmi_scan(c, 0, grid, parts);
    REQUIRE(scan.series.extrema.size() == grid.size());
    CHECK(scan.series.extrema[0].min == 0.0);
    CHECK(scan.series.extrema[0].max == 0.0);
    CHECK(scan.global_min >= -1e-10);
    CHECK(scan.occupations.size() == grid.size());
    for(const auto &occ : scan.occupations) {
        double s = 0;
        for(double p : occ) s += p;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)onebody_tmi_scan(c, 8, grid, parts), ArgumentError);
    CHECK_THROWS_AS((void)onebody_tmi_scan(c, 0, grid, {}), ArgumentError);
}

}
