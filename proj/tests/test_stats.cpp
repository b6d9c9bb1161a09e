#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "neatnc/common.hpp"
#include "neatnc/stats.hpp"

using namespace neatnc::stats;

namespace {

// Frozen from tests/oracles/gen_oracles.py (mpmath, 40 digits).
struct ChiRef {
    double x;
    int df;
    double sf;
};
const ChiRef kChi[] = {
    {0.5, 1, 0.47950012218695346232},       {3.84, 1, 0.050043521248705103189},
    {7.2, 2, 0.027323722447292558375},      {20.0, 1, 7.7442164310440836377e-6},
    {1.0, 3, 0.80125195690120080243},       {11.34, 3, 0.010022517616912462422},
    {50.0, 4, 3.6108654048906453546e-10},   {0.01, 5, 0.99999946997299573135},
    {30.0, 10, 0.00085664121077530039211},  {120.0, 7, 7.6612464633530202514e-23},
    {2.5, 29, 0.99999999997635115141},
};

struct NormRef {
    double z;
    double sf;
};
const NormRef kNorm[] = {
    {-3.0, 0.99865010196836990547}, {-1.0, 0.84134474606854294859},  {0.0, 0.5},
    {0.5, 0.30853753872598689636},  {1.959963984540054, 0.025000000000000010876},
    {2.5, 0.006209665325776135167}, {4.0, 0.000031671241833119921254}, {6.0, 9.865876450376981407e-10},
    {8.5, 9.4795348222033183542e-18},
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<SampleGroup> fixture() {
    return {{"a", {1, 2, 3}}, {"b", {4, 5, 6}}, {"c", {7, 8, 9}}};
}

std::vector<SampleGroup> tied_fixture() {
    return {{"a", {1, 2, 2, 3, 5}}, {"b", {2, 4, 4, 6}}, {"c", {5, 5, 7, 8, 9, 9}}};
}

}  // namespace

TEST_CASE("distribution tails against high-precision references") {
    for (const auto& r : kChi) {
        CAPTURE(r.x);
        CAPTURE(r.df);
        CHECK(rel(chi_square_sf(r.x, r.df), r.sf) <= 1e-8);
    }
    for (const auto& r : kNorm) {
        CAPTURE(r.z);
        CHECK(rel(normal_sf(r.z), r.sf) <= 1e-8);
    }
    CHECK(chi_square_sf(0.0, 3) == 1.0);
    CHECK(normal_sf(0.0) == 0.5);
    CHECK(std::abs(chi_square_sf(7.2, 2) - std::exp(-3.6)) <= 1e-15);
}

TEST_CASE("average ranks") {
    const std::vector<double> v{10, 20, 20, 5, 30, 20};
    const auto r = average_ranks(v);
    CHECK(r == std::vector<double>{2, 4, 4, 1, 6, 4});

    // Brute-force oracle: rank = (#less) + (#equal + 1) / 2.
    neatnc::Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(1 + rng.index(30));
        for (auto& e : x) e = static_cast<double>(rng.index(8));
        const auto ranks = average_ranks(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto less = std::count_if(x.begin(), x.end(), [&](double y) { return y < x[i]; });
            const auto eq = std::count(x.begin(), x.end(), x[i]);
            CHECK(ranks[i] == static_cast<double>(less) + (static_cast<double>(eq) + 1.0) / 2.0);
        }
    }
}

TEST_CASE("Kruskal-Wallis") {
    const auto g = fixture();
    const auto r = kruskal_wallis(g);
    CHECK(std::abs(r.statistic - 7.2) <= 1e-9);
    CHECK(r.degrees_of_freedom == 2);
    CHECK(std::abs(r.p_value - 0.02732) <= 1e-4);

    const auto t = kruskal_wallis(tied_fixture());
    CHECK(std::abs(t.statistic - 8.881090909090913) <= 1e-9);
    CHECK(rel(t.p_value, 0.011789506125916751) <= 1e-8);

    const std::vector<SampleGroup> same{{"x", {1, 2, 3}}, {"y", {1, 2, 3}}};
    const auto s = kruskal_wallis(same);
    CHECK(s.statistic == doctest::Approx(0.0));
    CHECK(s.p_value == doctest::Approx(1.0));

    const std::vector<SampleGroup> flat{{"x", {4, 4}}, {"y", {4, 4, 4}}};
    CHECK(kruskal_wallis(flat).statistic == 0.0);
    CHECK(kruskal_wallis(flat).p_value == 1.0);

    // Rank-based: permutation within groups and monotone transforms leave H unchanged.
    auto p = tied_fixture();
    std::reverse(p[2].values.begin(), p[2].values.end());
    for (auto& grp : p)
        for (auto& v : grp.values) v = std::exp(v) * 3.0 + 1.0;
    CHECK(std::abs(kruskal_wallis(p).statistic - t.statistic) <= 1e-9);
}

TEST_CASE("chi-square on success counts") {
    const std::vector<std::size_t> s{30, 15}, n{30, 30};
    const auto r = chi_square_success(s, n);
    CHECK(std::abs(r.statistic - 20.0) <= 1e-9);
    CHECK(r.degrees_of_freedom == 1);
    CHECK(rel(r.p_value, 7.7442164310440836377e-6) <= 1e-8);

    const std::vector<std::size_t> s3{12, 7, 3}, n3{15, 15, 10};
    const auto r3 = chi_square_success(s3, n3);
    CHECK(std::abs(r3.statistic - 6.734006734006735) <= 1e-9);
    CHECK(rel(r3.p_value, 0.03449284502601981) <= 1e-8);

    const std::vector<std::size_t> p3{3, 12, 7}, q3{10, 15, 15};
    CHECK(std::abs(chi_square_success(p3, q3).statistic - r3.statistic) <= 1e-9);

    const std::vector<std::size_t> eq{5, 10}, eqn{10, 20};
    CHECK(chi_square_success(eq, eqn).statistic == doctest::Approx(0.0));
    CHECK(chi_square_success(eq, eqn).p_value == doctest::Approx(1.0));

    const std::vector<std::size_t> all{10, 10}, alln{10, 10};
    CHECK_THROWS_AS(chi_square_success(all, alln), neatnc::ContractError);
}

TEST_CASE("Holm adjustment") {
    const std::vector<double> p{0.01, 0.04, 0.03, 0.5};
    const auto a = holm_adjust(p);
    CHECK(a[0] == doctest::Approx(0.04));
    CHECK(a[2] == doctest::Approx(0.09));
    CHECK(a[1] == doctest::Approx(0.09));  // monotone step-down
    CHECK(a[3] == doctest::Approx(0.5));
}

TEST_CASE("Dunn post-hoc") {
    SUBCASE("separated fixture") {
        const auto d = dunn_posthoc(fixture());
        CHECK(d.mean_ranks == std::vector<double>{2, 5, 8});
        CHECK(std::abs(d.z[0][1] + 1.3416407864998738) <= 1e-12);
        CHECK(std::abs(d.z[0][2] + 2.6832815729997477) <= 1e-12);
        CHECK(rel(d.p_raw[0][2], 0.007290358091535638) <= 1e-8);
        CHECK(rel(d.p_adjusted[0][2], 0.021871074274606914) <= 1e-8);
        CHECK(rel(d.p_adjusted[0][1], 0.3594249897579995) <= 1e-8);
        // extreme pair has the smallest adjusted p
        CHECK(d.p_adjusted[0][2] < d.p_adjusted[0][1]);
        CHECK(d.p_adjusted[0][2] < d.p_adjusted[1][2]);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(d.p_adjusted[i][i] == 1.0);
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(d.p_adjusted[i][j] == d.p_adjusted[j][i]);
                CHECK(d.p_raw[i][j] == d.p_raw[j][i]);
                CHECK(d.p_adjusted[i][j] >= 0.0);
                CHECK(d.p_adjusted[i][j] <= 1.0);
            }
        }
    }
    SUBCASE("ties") {
        const auto d = dunn_posthoc(tied_fixture());
        CHECK(std::abs(d.mean_ranks[0] - 4.2) <= 1e-12);
        CHECK(std::abs(d.mean_ranks[1] - 6.75) <= 1e-12);
        CHECK(std::abs(d.mean_ranks[2] - 12.0) <= 1e-12);
        CHECK(std::abs(d.z[0][1] + 0.8576924644861721) <= 1e-12);
        CHECK(rel(d.p_adjusted[0][1], 0.391062302122961) <= 1e-8);
        CHECK(rel(d.p_adjusted[0][2], 0.010968136903841505) <= 1e-8);
        CHECK(rel(d.p_adjusted[1][2], 0.13297816742468538) <= 1e-8);
    }
    SUBCASE("identical groups") {
        const std::vector<SampleGroup> same{{"x", {1, 2, 3, 4}}, {"y", {1, 2, 3, 4}}, {"z", {1, 2, 3, 4}}};
        const auto d = dunn_posthoc(same);
        for (const auto& row : d.p_adjusted)
            for (double p : row) CHECK(p == 1.0);
    }
    SUBCASE("rank order") {
        const std::vector<double> mr{2, 8, 5};
        CHECK(rank_order(mr, true) == std::vector<std::size_t>{1, 2, 0});
        CHECK(rank_order(mr, false) == std::vector<std::size_t>{0, 2, 1});
    }
}
