#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace risia {

using cplx = std::complex<double>;

// The 2^b allowed unit-modulus phase values of one reflecting unit,
// values[m] = exp(j * m * 2*pi / 2^b).
struct PhaseSet {
    int bits = 0;
    std::vector<cplx> values;

    static PhaseSet make(int bits);
    std::size_t size() const { return values.size(); }
};

// One RIS configuration: a per-unit quantization level in [0, 2^b).
struct Codeword {
    int bits = 0;
    std::vector<std::uint16_t> levels;

    cplx phase(std::size_t n) const;
    bool operator==(const Codeword&) const = default;
};

// Rayleigh channel realization shared by one instance: bs_ris is the N x M
// base-station-to-surface matrix (row-major, entry (n, m) at n*M + m) and
// ris_ue[k] the length-N surface-to-user vector for user k.
struct ChannelSet {
    std::size_t num_users = 0;  // K
    std::size_t num_units = 0;  // N
    std::size_t num_antennas = 0;  // M
    std::vector<cplx> bs_ris;
    std::vector<std::vector<cplx>> ris_ue;
    double tx_power = 1.0;
    double noise_power = 1e-12;
    std::uint64_t seed = 0;

    const cplx& g(std::size_t n, std::size_t m) const { return bs_ris[n * num_antennas + m]; }
};

struct Codebook {
    std::size_t num_units = 0;
    int bits = 0;
    std::vector<Codeword> codewords;

    std::size_t size() const { return codewords.size(); }
};

// i.i.d. unit-variance circularly symmetric Gaussian entries for both hops;
// user positions are drawn uniformly in a 50 m x 50 m square (surface at the
// origin corner) and each ris_ue vector is scaled by a free-space path-loss
// amplitude 1/max(d, 1 m). Pure function of (dimensions, seed).
ChannelSet generate_channels(std::size_t num_users, std::size_t num_units,
                             std::size_t num_antennas, std::uint64_t seed,
                             double tx_power = 1.0, double noise_power = 1e-12);

// One beam-steering codeword per user: the continuous phase configuration
// maximizing that user's effective channel power (transmit direction held at
// maximum ratio), quantized per unit to the nearest of the 2^b levels.
// Duplicates are re-quantized one random unit at a time until all distinct.
Codebook build_codebook(const ChannelSet& channels, int bits, std::uint64_t seed);

// Effective M-vector channel G^T diag(codeword) h for the given user.
std::vector<cplx> effective_channel(const ChannelSet& channels, const Codeword& codeword,
                                    std::size_t ue);

// Received SNR P * ||G^T diag(codeword) h||^2 / sigma^2 under maximum-ratio
// transmission on the effective channel.
double snr(const ChannelSet& channels, const Codeword& codeword, std::size_t ue);

} // namespace risia
