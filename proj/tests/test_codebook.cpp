#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "risia/codebook.hpp"
#include "risia/rng.hpp"

using namespace risia;

namespace {

ChannelSet scalar_channel(cplx g, cplx h, double P = 1.0, double sigma2 = 1.0) {
    ChannelSet ch;
    ch.num_users = 1;
    ch.num_units = 1;
    ch.num_antennas = 1;
    ch.bs_ris = {g};
    ch.ris_ue = {{h}};
    ch.tx_power = P;
    ch.noise_power = sigma2;
    return ch;
}

// Literal evaluation of the received SNR: build the diagonal reflection
// matrix, multiply G^T * Theta * h elementwise, and take P * ||h_eff||^2 /
// sigma^2. Kept deliberately separate from the library implementation.
double snr_reference(const ChannelSet& ch, const Codeword& cw, std::size_t ue) {
    const std::size_t N = ch.num_units, M = ch.num_antennas;
    std::vector<cplx> theta(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double step = 2.0 * std::numbers::pi / std::pow(2.0, cw.bits);
        theta[n] = std::exp(cplx(0.0, step * cw.levels[n]));
    }
    double power = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n < N; ++n) acc += ch.bs_ris[n * M + m] * theta[n] * ch.ris_ue[ue][n];
        power += std::norm(acc);
    }
    return ch.tx_power * power / ch.noise_power;
}

} // namespace

TEST_CASE("phase set enumerates the quantized constellation") {
    for (int b = 1; b <= 8; ++b) {
        const PhaseSet ps = PhaseSet::make(b);
        CHECK(ps.size() == (std::size_t{1} << b));
        CHECK(ps.values[0] == cplx{1.0, 0.0});
        for (const auto& v : ps.values) CHECK(std::abs(std::abs(v) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(PhaseSet::make(0), std::invalid_argument);
}

TEST_CASE("generate_channels shape contract and determinism") {
    const ChannelSet ch = generate_channels(2, 4, 2, 7);
    CHECK(ch.bs_ris.size() == 4 * 2);
    CHECK(ch.ris_ue.size() == 2);
    CHECK(ch.ris_ue[0].size() == 4);
    CHECK(ch.ris_ue[1].size() == 4);

    const ChannelSet again = generate_channels(2, 4, 2, 7);
    CHECK(ch.bs_ris == again.bs_ris);
    CHECK(ch.ris_ue == again.ris_ue);

    CHECK_THROWS_AS(generate_channels(0, 4, 2, 7), std::invalid_argument);
    CHECK_THROWS_AS(generate_channels(2, 0, 2, 7), std::invalid_argument);
    CHECK_THROWS_AS(generate_channels(2, 4, 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(generate_channels(2, 4, 2, 7, -1.0), std::invalid_argument);
}

TEST_CASE("bs_ris entries have unit empirical variance") {
    const ChannelSet ch = generate_channels(256, 256, 16, 1);
    double mean_sq = 0.0;
    for (const auto& e : ch.bs_ris) mean_sq += std::norm(e);
    mean_sq /= static_cast<double>(ch.bs_ris.size());
    CHECK(mean_sq == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("scalar codebook quantizes the aligning phase to the nearest level") {
    // Cascade channel with phase 170 deg; the aligning phase of -170 deg is
    // closer to 180 deg than to 0 deg, so the 1-bit level must be 1.
    const double phase = 170.0 * std::numbers::pi / 180.0;
    const ChannelSet ch = scalar_channel(cplx{1.0, 0.0}, std::polar(1.0, phase));
    const Codebook cb = build_codebook(ch, 1, 0);
    REQUIRE(cb.size() == 1);
    CHECK(cb.codewords[0].levels[0] == 1);
}

TEST_CASE("K=16 N=2 b=2 codebook is distinct with levels in the 2-bit set") {
    const ChannelSet ch = generate_channels(16, 2, 1, 11);
    const Codebook cb = build_codebook(ch, 2, 12);
    REQUIRE(cb.size() == 16);
    std::set<std::vector<std::uint16_t>> seen;
    for (const auto& cw : cb.codewords) {
        CHECK(cw.levels.size() == 2);
        for (auto l : cw.levels) CHECK(l < 4);
        seen.insert(cw.levels);
    }
    CHECK(seen.size() == 16);  // all 4^2 = 16 configurations, each used once
}

TEST_CASE("distinctness capacity check") {
    const ChannelSet ch = generate_channels(5, 1, 1, 3);
    CHECK_THROWS_AS(build_codebook(ch, 2, 3), std::invalid_argument);  // 5 > 2^2
    CHECK_NOTHROW(build_codebook(ch, 3, 3));
}

TEST_CASE("beam-steering codewords win on their own user most of the time") {
    std::size_t own_best = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ChannelSet ch = generate_channels(8, 4, 2, seed);
        const Codebook cb = build_codebook(ch, 3, seed + 1000);
        for (std::size_t k = 0; k < 8; ++k) {
            const double own = snr(ch, cb.codewords[k], k);
            bool best = true;
            for (std::size_t j = 0; j < 8; ++j) {
                if (j != k && snr(ch, cb.codewords[j], k) > own * (1.0 + 1e-12)) best = false;
            }
            own_best += best;
            ++total;
        }
    }
    CHECK(static_cast<double>(own_best) >= 0.9 * static_cast<double>(total));
}

TEST_CASE("snr trivial identities") {
    SUBCASE("all-zero user channel") {
        const ChannelSet ch = scalar_channel(cplx{1.0, 0.0}, cplx{0.0, 0.0});
        Codeword cw{1, {0}};
        CHECK(snr(ch, cw, 0) == 0.0);
    }
    SUBCASE("identity configuration") {
        const ChannelSet ch = scalar_channel(cplx{1.0, 0.0}, cplx{1.0, 0.0});
        Codeword cw{1, {0}};
        CHECK(snr(ch, cw, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("index bounds") {
        const ChannelSet ch = scalar_channel(cplx{1.0, 0.0}, cplx{1.0, 0.0});
        Codeword cw{1, {0}};
        CHECK_THROWS_AS(snr(ch, cw, 1), std::invalid_argument);
    }
}

TEST_CASE("snr matches a straight-line reimplementation") {
    const ChannelSet ch = generate_channels(4, 4, 2, 21);
    const Codebook cb = build_codebook(ch, 2, 22);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t j = 0; j < 4; ++j) {
            const double got = snr(ch, cb.codewords[j], k);
            const double want = snr_reference(ch, cb.codewords[j], k);
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
        }
}

TEST_CASE("snr is invariant under a common codeword phase rotation") {
    Rng rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        const std::uint64_t seed = rng.next();
        const ChannelSet ch = generate_channels(4, 6, 2, seed);
        const Codebook cb = build_codebook(ch, 3, seed + 1);
        const std::size_t k = rng.index(4);
        Codeword rotated = cb.codewords[k];
        const auto shift = static_cast<std::uint16_t>(rng.index(8));
        for (auto& l : rotated.levels) l = static_cast<std::uint16_t>((l + shift) % 8);
        const double a = snr(ch, cb.codewords[k], k);
        const double b = snr(ch, rotated, k);
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("snr scales exactly with transmit power") {
    ChannelSet ch = generate_channels(2, 4, 2, 5, 1.0, 1e-12);
    const Codebook cb = build_codebook(ch, 2, 6);
    const double base = snr(ch, cb.codewords[0], 0);
    ch.tx_power = 2.0;
    CHECK(snr(ch, cb.codewords[0], 0) == 2.0 * base);
}

TEST_CASE("build_codebook is deterministic in the seed") {
    const ChannelSet ch = generate_channels(8, 4, 2, 17);
    const Codebook a = build_codebook(ch, 3, 42);
    const Codebook b = build_codebook(ch, 3, 42);
    CHECK(a.codewords == b.codewords);
}
