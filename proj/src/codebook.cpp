#include "risia/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "risia/errors.hpp"
#include "risia/rng.hpp"

namespace risia {

namespace {

constexpr double kUeAreaSide = 50.0;      // m
constexpr double kPathLossRefDist = 1.0;  // m

cplx draw_cn01(Rng& rng) {
    // One complex circularly symmetric Gaussian entry of unit variance.
    const double re = rng.normal();
    const double im = rng.normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint16_t quantize_phase(double theta, int bits) {
    const double step = 2.0 * std::numbers::pi / static_cast<double>(1u << bits);
    const long long level = std::llround(theta / step);
    const long long size = 1ll << bits;
    return static_cast<std::uint16_t>(((level % size) + size) % size);
}

} // namespace

PhaseSet PhaseSet::make(int bits) {
    if (bits < 1 || bits > 16) throw std::invalid_argument("PhaseSet: bits must be in [1, 16]");
    PhaseSet ps;
    ps.bits = bits;
    const std::size_t count = std::size_t{1} << bits;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
    ps.values.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        ps.values.push_back(std::polar(1.0, step * static_cast<double>(m)));
    }
    ps.values[0] = cplx{1.0, 0.0};
    return ps;
}

cplx Codeword::phase(std::size_t n) const {
    const double step = 2.0 * std::numbers::pi / static_cast<double>(1u << bits);
    return std::polar(1.0, step * static_cast<double>(levels[n]));
}

ChannelSet generate_channels(std::size_t num_users, std::size_t num_units,
                             std::size_t num_antennas, std::uint64_t seed,
                             double tx_power, double noise_power) {
    if (num_users < 1 || num_units < 1 || num_antennas < 1)
        throw std::invalid_argument("generate_channels: dimensions must be >= 1");
    if (tx_power <= 0.0 || noise_power <= 0.0)
        throw std::invalid_argument("generate_channels: powers must be positive");

    ChannelSet ch;
    ch.num_users = num_users;
    ch.num_units = num_units;
    ch.num_antennas = num_antennas;
    ch.tx_power = tx_power;
    ch.noise_power = noise_power;
    ch.seed = seed;

    Rng rng = substream(seed, 0x9c1u);
    ch.bs_ris.resize(num_units * num_antennas);
    for (auto& e : ch.bs_ris) e = draw_cn01(rng);

    ch.ris_ue.resize(num_users);
    for (std::size_t k = 0; k < num_users; ++k) {
        const double x = kUeAreaSide * rng.canonical();
        const double y = kUeAreaSide * rng.canonical();
        const double dist = std::max(std::hypot(x, y), kPathLossRefDist);
        const double amp = kPathLossRefDist / dist;
        auto& h = ch.ris_ue[k];
        h.resize(num_units);
        for (auto& e : h) e = amp * draw_cn01(rng);
    }
    return ch;
}

std::vector<cplx> effective_channel(const ChannelSet& ch, const Codeword& cw, std::size_t ue) {
    if (ue >= ch.num_users) throw std::invalid_argument("effective_channel: user index out of range");
    if (cw.levels.size() != ch.num_units)
        throw std::invalid_argument("effective_channel: codeword length mismatch");
    std::vector<cplx> h(ch.num_antennas, cplx{0.0, 0.0});
    for (std::size_t n = 0; n < ch.num_units; ++n) {
        const cplx w = cw.phase(n) * ch.ris_ue[ue][n];
        for (std::size_t m = 0; m < ch.num_antennas; ++m) h[m] += w * ch.g(n, m);
    }
    return h;
}

double snr(const ChannelSet& ch, const Codeword& cw, std::size_t ue) {
    const auto h = effective_channel(ch, cw, ue);
    double power = 0.0;
    for (const auto& e : h) power += std::norm(e);
    return ch.tx_power * power / ch.noise_power;
}

namespace {

// Continuous per-unit phases maximizing ||sum_n phi_n a_n|| by alternating
// between phase alignment along a fixed direction and the maximum-ratio
// update of that direction. Monotone in the effective channel norm; exact
// for a single antenna.
std::vector<double> align_phases(const std::vector<std::vector<cplx>>& unit_vecs) {
    const std::size_t num_units = unit_vecs.size();
    const std::size_t num_antennas = unit_vecs.empty() ? 0 : unit_vecs[0].size();

    // Global phase of the direction is a free gauge; pin it by rotating the
    // largest component to the positive real axis. With one antenna the
    // direction becomes exactly 1 and the alignment reduces to -arg(a_n).
    auto canonicalize = [&](std::vector<cplx>& v) {
        double nn = 0.0;
        for (const auto& e : v) nn += std::norm(e);
        if (nn < 1e-300) {
            v.assign(num_antennas, cplx{0.0, 0.0});
            v[0] = cplx{1.0, 0.0};
            return;
        }
        std::size_t peak = 0;
        for (std::size_t m = 1; m < num_antennas; ++m) {
            if (std::abs(v[m]) > std::abs(v[peak])) peak = m;
        }
        const cplx rot = std::polar(1.0, -std::arg(v[peak])) / std::sqrt(nn);
        for (auto& e : v) e *= rot;
    };

    std::vector<cplx> dir(num_antennas, cplx{0.0, 0.0});
    for (const auto& a : unit_vecs)
        for (std::size_t m = 0; m < num_antennas; ++m) dir[m] += a[m];
    canonicalize(dir);

    std::vector<double> theta(num_units, 0.0);
    double prev_norm = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        for (std::size_t n = 0; n < num_units; ++n) {
            cplx proj{0.0, 0.0};
            for (std::size_t m = 0; m < num_antennas; ++m)
                proj += std::conj(dir[m]) * unit_vecs[n][m];
            theta[n] = (std::abs(proj) > 0.0) ? -std::arg(proj) : 0.0;
        }
        std::vector<cplx> h(num_antennas, cplx{0.0, 0.0});
        for (std::size_t n = 0; n < num_units; ++n) {
            const cplx w = std::polar(1.0, theta[n]);
            for (std::size_t m = 0; m < num_antennas; ++m) h[m] += w * unit_vecs[n][m];
        }
        double hn = 0.0;
        for (const auto& e : h) hn += std::norm(e);
        hn = std::sqrt(hn);
        if (hn <= prev_norm * (1.0 + 1e-12) || hn < 1e-300) break;
        prev_norm = hn;
        dir = std::move(h);
        canonicalize(dir);
    }
    return theta;
}

} // namespace

Codebook build_codebook(const ChannelSet& ch, int bits, std::uint64_t seed) {
    if (bits < 1) throw std::invalid_argument("build_codebook: bits must be >= 1");
    const std::size_t K = ch.num_users;
    const std::size_t N = ch.num_units;
    const double levels_per_unit = static_cast<double>(1u << bits);
    // Distinctness is impossible with more codewords than configurations.
    if (static_cast<double>(N) * std::log2(levels_per_unit) < 63.0) {
        const unsigned long long capacity = 1ull << (N * static_cast<std::size_t>(bits));
        if (K > capacity)
            throw std::invalid_argument("build_codebook: K exceeds 2^(N*b) distinct codewords");
    }

    Codebook cb;
    cb.num_units = N;
    cb.bits = bits;
    cb.codewords.reserve(K);

    Rng rng = substream(seed, 0xc0deu);
    const std::size_t num_levels = std::size_t{1} << bits;

    std::vector<std::vector<cplx>> unit_vecs(N, std::vector<cplx>(ch.num_antennas));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t m = 0; m < ch.num_antennas; ++m)
                unit_vecs[n][m] = ch.ris_ue[k][n] * ch.g(n, m);
        const auto theta = align_phases(unit_vecs);

        Codeword cw;
        cw.bits = bits;
        cw.levels.resize(N);
        for (std::size_t n = 0; n < N; ++n) cw.levels[n] = quantize_phase(theta[n], bits);

        auto duplicated = [&] {
            return std::any_of(cb.codewords.begin(), cb.codewords.end(),
                               [&](const Codeword& c) { return c == cw; });
        };
        std::size_t guard = 0;
        while (duplicated()) {
            cw.levels[rng.index(N)] = static_cast<std::uint16_t>(rng.index(num_levels));
            if (++guard > 1000000)
                throw DegenerateInstanceError("build_codebook: could not de-duplicate codewords");
        }
        cb.codewords.push_back(std::move(cw));
    }
    return cb;
}

} // namespace risia
