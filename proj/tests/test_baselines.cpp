#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "risia/baselines.hpp"
#include "risia/rng.hpp"

using namespace risia;

namespace {

LossMatrix random_symmetric(std::size_t K, std::uint64_t seed) {
    LossMatrix m;
    m.K = K;
    m.d.assign(K * K, 0.0);
    m.symmetrized = true;
    Rng rng(seed);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
            const double v = rng.canonical();
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

LossMatrix line_metric(std::size_t K) {
    LossMatrix m;
    m.K = K;
    m.d.assign(K * K, 0.0);
    m.symmetrized = true;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j)
            m.at(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
    return m;
}

} // namespace

TEST_CASE("natural order") {
    CHECK(natural_order(4) == Permutation{0, 1, 2, 3});
    CHECK(natural_order(1) == Permutation{0});
    CHECK_THROWS_AS(natural_order(0), std::invalid_argument);

    const LossMatrix m = random_symmetric(9, 4);
    double superdiag = 0.0;
    for (std::size_t i = 0; i + 1 < 9; ++i) superdiag += m.at(i, i + 1);
    CHECK(path_cost(m, natural_order(9)) == doctest::Approx(superdiag).epsilon(1e-12));
}

TEST_CASE("random order is seeded and uniform") {
    CHECK(random_order(6, 123) == random_order(6, 123));
    CHECK(random_order(1, 5) == Permutation{0});

    std::map<Permutation, int> freq;
    for (std::uint64_t s = 0; s < 6000; ++s) ++freq[random_order(3, s)];
    CHECK(freq.size() == 6);
    for (const auto& [perm, count] : freq)
        CHECK(std::abs(count / 6000.0 - 1.0 / 6.0) <= 0.02);
}

TEST_CASE("greedy nearest neighbor") {
    LossMatrix m;
    m.K = 3;
    m.d.assign(9, 0.0);
    m.symmetrized = true;
    auto set = [&](std::size_t i, std::size_t j, double v) {
        m.at(i, j) = v;
        m.at(j, i) = v;
    };
    set(0, 1, 0.1);
    set(0, 2, 0.2);
    set(1, 2, 0.05);
    CHECK(greedy_order(m, 0) == Permutation{0, 1, 2});
    CHECK(path_cost(m, greedy_order(m, 0)) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK_THROWS_AS(greedy_order(m, 3), std::invalid_argument);

    // Best-over-starts never loses to the default start.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const LossMatrix r = random_symmetric(8, seed);
        CHECK(path_cost(r, greedy_best_start(r)) <= path_cost(r, greedy_order(r, 0)) + 1e-12);
    }
}

TEST_CASE("greedy ties break to the lower index") {
    LossMatrix m;
    m.K = 3;
    m.d.assign(9, 0.5);
    for (std::size_t i = 0; i < 3; ++i) m.at(i, i) = 0.0;
    CHECK(greedy_order(m, 0) == Permutation{0, 1, 2});
}

TEST_CASE("2-opt improves and converges") {
    SUBCASE("already optimal path unchanged") {
        const LossMatrix m = line_metric(4);
        CHECK(two_opt(m, natural_order(4)) == natural_order(4));
    }
    SUBCASE("never worse than the input; idempotent") {
        Rng rng(9);
        for (int rep = 0; rep < 20; ++rep) {
            const LossMatrix m = random_symmetric(10, rng.next());
            const Permutation init = random_order(10, rng.next());
            const Permutation out = two_opt(m, init);
            CHECK(path_cost(m, out) <= path_cost(m, init) + 1e-12);
            CHECK(two_opt(m, out) == out);
        }
    }
    SUBCASE("invalid init rejected") {
        const LossMatrix m = random_symmetric(4, 2);
        CHECK_THROWS_AS(two_opt(m, Permutation{0, 1}), std::invalid_argument);
    }
}

TEST_CASE("3-opt improves and converges") {
    Rng rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        const LossMatrix m = random_symmetric(9, rng.next());
        const Permutation init = random_order(9, rng.next());
        const Permutation out = three_opt(m, init);
        CHECK(is_permutation_of_range(out, 9));
        CHECK(path_cost(m, out) <= path_cost(m, init) + 1e-12);
        CHECK(three_opt(m, out) == out);
    }
}

TEST_CASE("exact optimum via subset DP") {
    SUBCASE("K=2 is the only path") {
        const LossMatrix m = random_symmetric(2, 7);
        const auto [pi, cost] = exact_optimum(m);
        CHECK(cost == doctest::Approx(m.at(0, 1)).epsilon(1e-12));
    }
    SUBCASE("agrees with full enumeration at K=4..7") {
        Rng rng(55);
        for (std::size_t K = 4; K <= 7; ++K) {
            for (int rep = 0; rep < 8; ++rep) {
                const LossMatrix m = random_symmetric(K, rng.next());
                const auto [pi, cost] = exact_optimum(m);
                CHECK(path_cost(m, pi) == doctest::Approx(cost).epsilon(1e-12));
                Permutation all(K);
                std::iota(all.begin(), all.end(), 0);
                double best = path_cost(m, all);
                while (std::next_permutation(all.begin(), all.end()))
                    best = std::min(best, path_cost(m, all));
                CHECK(cost == doctest::Approx(best).epsilon(1e-12));
            }
        }
    }
    SUBCASE("constant matrix cost is (K-1)c") {
        LossMatrix m;
        m.K = 6;
        m.d.assign(36, 0.3);
        for (std::size_t i = 0; i < 6; ++i) m.at(i, i) = 0.0;
        CHECK(exact_optimum(m).second == doctest::Approx(5 * 0.3).epsilon(1e-12));
    }
    SUBCASE("refuses oversized instances") {
        const LossMatrix m = random_symmetric(14, 1);
        CHECK_THROWS_AS(exact_optimum(m), std::invalid_argument);
    }
}

TEST_CASE("exact optimum lower-bounds every other solver") {
    Rng rng(321);
    for (int rep = 0; rep < 10; ++rep) {
        const LossMatrix m = random_symmetric(8, rng.next());
        const double best = exact_optimum(m).second;
        CHECK(best <= path_cost(m, greedy_order(m, 0)) + 1e-12);
        CHECK(best <= path_cost(m, two_opt(m, random_order(8, rep))) + 1e-12);
        CHECK(best <= path_cost(m, three_opt(m, random_order(8, rep))) + 1e-12);
        CHECK(best <= path_cost(m, random_order(8, rep)) + 1e-12);
    }
}
