#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <numeric>
#include <set>

#include "risia/assignment.hpp"
#include "risia/baselines.hpp"
#include "risia/rng.hpp"

using namespace risia;

TEST_CASE("gray code sequence") {
    // First rows and last row of the 4-bit sequence.
    CHECK(gray_code(0, 4) == 0b0000);
    CHECK(gray_code(1, 4) == 0b0001);
    CHECK(gray_code(2, 4) == 0b0011);
    CHECK(gray_code(3, 4) == 0b0010);
    CHECK(gray_code(15, 4) == 0b1000);

    CHECK_THROWS_AS(gray_code(16, 4), std::invalid_argument);
    CHECK_THROWS_AS(gray_code(0, 0), std::invalid_argument);
}

TEST_CASE("consecutive gray codes differ in exactly one bit, all distinct") {
    for (unsigned m = 1; m <= 10; ++m) {
        const std::uint32_t count = 1u << m;
        std::set<std::uint32_t> seen;
        for (std::uint32_t k = 0; k < count; ++k) {
            const std::uint32_t g = gray_code(k, m);
            seen.insert(g);
            if (k + 1 < count)
                CHECK(std::popcount(g ^ gray_code(k + 1, m)) == 1);
        }
        CHECK(seen.size() == count);
    }
}

TEST_CASE("assign_from_path basics") {
    SUBCASE("K=2 reversed path") {
        const Assignment a = assign_from_path(Permutation{1, 0});
        CHECK(a.label_of[1] == 0);
        CHECK(a.label_of[0] == 1);
    }
    SUBCASE("identity path is the gray sequence") {
        const Assignment a = assign_from_path(natural_order(16));
        for (std::uint32_t k = 0; k < 16; ++k) CHECK(a.label_of[k] == gray_code(k, 4));
    }
    SUBCASE("path-adjacent codewords get Hamming-1 labels") {
        Rng rng(5);
        for (int rep = 0; rep < 50; ++rep) {
            Permutation pi(16);
            std::iota(pi.begin(), pi.end(), 0);
            rng.shuffle(pi.begin(), pi.end());
            const Assignment a = assign_from_path(pi);
            a.validate();
            for (std::size_t k = 0; k + 1 < 16; ++k) {
                const auto la = a.label_of[static_cast<std::size_t>(pi[k])];
                const auto lb = a.label_of[static_cast<std::size_t>(pi[k + 1])];
                CHECK(std::popcount(la ^ lb) == 1);
            }
        }
    }
    SUBCASE("non-power-of-two rejected") {
        CHECK_THROWS_AS(assign_from_path(Permutation{0, 1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(assign_from_path(Permutation{0, 0, 1, 1}), std::invalid_argument);
    }
}

TEST_CASE("natural and random assignments") {
    const Assignment nat = natural_assignment(8);
    for (std::uint32_t i = 0; i < 8; ++i) CHECK(nat.label_of[i] == i);

    const Assignment r1 = random_assignment(8, 99);
    const Assignment r2 = random_assignment(8, 99);
    CHECK(r1.label_of == r2.label_of);
    r1.validate();

    // All 24 bijections of K=4 occur across seeds.
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t seed = 0; seed < 2000 && seen.size() < 24; ++seed)
        seen.insert(random_assignment(4, seed).label_of);
    CHECK(seen.size() == 24);
}

TEST_CASE("remap_codebook") {
    const ChannelSet ch = generate_channels(8, 3, 1, 61);
    const Codebook cb = build_codebook(ch, 2, 62);

    SUBCASE("natural assignment is the identity") {
        const Codebook same = remap_codebook(cb, natural_assignment(8));
        CHECK(same.codewords == cb.codewords);
    }
    SUBCASE("an involution applied twice restores the codebook") {
        Assignment swap_pairs;
        swap_pairs.K = 8;
        swap_pairs.label_of = {1, 0, 3, 2, 5, 4, 7, 6};
        const Codebook once = remap_codebook(cb, swap_pairs);
        CHECK(once.codewords != cb.codewords);
        CHECK(remap_codebook(once, swap_pairs).codewords == cb.codewords);
    }
    SUBCASE("multiset of codewords is preserved") {
        const Assignment a = random_assignment(8, 5);
        const Codebook mapped = remap_codebook(cb, a);
        auto sorted = [](Codebook c) {
            std::sort(c.codewords.begin(), c.codewords.end(),
                      [](const Codeword& x, const Codeword& y) { return x.levels < y.levels; });
            return c.codewords;
        };
        CHECK(sorted(mapped) == sorted(cb));
    }
    SUBCASE("gray relabeling places path position k at slot gray(k)") {
        Rng rng(7);
        Permutation pi(8);
        std::iota(pi.begin(), pi.end(), 0);
        rng.shuffle(pi.begin(), pi.end());
        const Assignment a = assign_from_path(pi);
        const Codebook mapped = remap_codebook(cb, a);
        for (std::size_t k = 0; k < 8; ++k) {
            const auto slot = gray_code(static_cast<std::uint32_t>(k), 3);
            CHECK(mapped.codewords[slot] ==
                  cb.codewords[static_cast<std::size_t>(pi[k])]);
        }
    }
    SUBCASE("size mismatch rejected") {
        CHECK_THROWS_AS(remap_codebook(cb, natural_assignment(4)), std::invalid_argument);
    }
}

TEST_CASE("order_by_label inverts the labeling") {
    const Assignment a = random_assignment(16, 3);
    const Permutation pi = order_by_label(a);
    for (std::size_t pos = 0; pos < 16; ++pos)
        CHECK(a.label_of[static_cast<std::size_t>(pi[pos])] == pos);
}
