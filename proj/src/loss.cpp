#include "risia/loss.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "risia/errors.hpp"
#include "risia/parallel.hpp"
#include "risia/rng.hpp"

namespace risia {

LossMatrix LossMatrix::symmetrize() const {
    LossMatrix out = *this;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
            const double mean = 0.5 * (at(i, j) + at(j, i));
            out.at(i, j) = mean;
            out.at(j, i) = mean;
        }
    out.symmetrized = true;
    return out;
}

double ber_from_snr_db(double snr_db) {
    return 0.5 * std::erfc(std::sqrt(std::pow(10.0, snr_db / 10.0)));
}

BscModel BscModel::from_snr_db(double snr_db) {
    return BscModel{snr_db, ber_from_snr_db(snr_db)};
}

double mismatch_loss(const ChannelSet& ch, const Codebook& cb, std::size_t i, std::size_t j) {
    const std::size_t K = cb.size();
    if (i >= K || j >= K) throw std::invalid_argument("mismatch_loss: index out of range");
    const double snr_i = snr(ch, cb.codewords[i], i);
    if (snr_i <= 0.0)
        throw DegenerateInstanceError("mismatch_loss: reference SNR is zero; regenerate channels");
    if (i == j) return 0.0;
    const double snr_j = snr(ch, cb.codewords[j], i);
    return std::abs(1.0 - snr_j / snr_i);
}

LossMatrix build_loss_matrix(const ChannelSet& ch, const Codebook& cb, bool symmetrize,
                             unsigned threads) {
    const std::size_t K = cb.size();
    if (K == 0 || ch.num_users != K)
        throw std::invalid_argument("build_loss_matrix: instance dimensions inconsistent");
    LossMatrix m;
    m.K = K;
    m.d.assign(K * K, 0.0);
    m.source = "miso";
    m.seed = ch.seed;
    parallel_for(K, threads, [&](std::size_t i) {
        const double snr_i = snr(ch, cb.codewords[i], i);
        if (snr_i <= 0.0)
            throw DegenerateInstanceError(
                "build_loss_matrix: reference SNR is zero; regenerate channels");
        for (std::size_t j = 0; j < K; ++j) {
            if (j == i) continue;
            const double snr_j = snr(ch, cb.codewords[j], i);
            m.at(i, j) = std::abs(1.0 - snr_j / snr_i);
        }
    });
    return symmetrize ? m.symmetrize() : m;
}

double expected_loss(const LossMatrix& loss, const Assignment& a, double q) {
    if (a.K != loss.K) throw std::invalid_argument("expected_loss: size mismatch");
    a.validate();
    double total = 0.0;
    for (std::size_t i = 0; i < loss.K; ++i)
        for (std::size_t j = 0; j < loss.K; ++j) {
            if (std::popcount(a.label_of[i] ^ a.label_of[j]) == 1) total += loss.at(i, j);
        }
    return q * total / static_cast<double>(loss.K);
}

double path_cost(const LossMatrix& loss, std::span<const int> pi) {
    if (!is_permutation_of_range(pi, loss.K))
        throw std::invalid_argument("path_cost: not a permutation of 0..K-1");
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pi.size(); ++k)
        total += loss.at(static_cast<std::size_t>(pi[k]), static_cast<std::size_t>(pi[k + 1]));
    return total;
}

SynthDist synth_dist_from_name(const std::string& name) {
    if (name == "uniform") return SynthDist::Uniform;
    if (name == "clustered") return SynthDist::Clustered;
    if (name == "exploded") return SynthDist::Exploded;
    throw std::invalid_argument("unknown distribution: " + name);
}

std::string synth_dist_name(SynthDist dist) {
    switch (dist) {
        case SynthDist::Uniform: return "uniform";
        case SynthDist::Clustered: return "clustered";
        case SynthDist::Exploded: return "exploded";
    }
    throw std::invalid_argument("unknown distribution");
}

LossMatrix synth_matrix(SynthDist dist, std::size_t K, std::uint64_t seed) {
    if (K < 2) throw std::invalid_argument("synth_matrix: K must be >= 2");
    LossMatrix m;
    m.K = K;
    m.d.assign(K * K, 0.0);
    m.symmetrized = true;
    m.source = synth_dist_name(dist);
    m.seed = seed;
    Rng rng = substream(seed, 0x5d15u);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
            double w = 0.0;
            switch (dist) {
                case SynthDist::Uniform: w = rng.canonical(); break;
                case SynthDist::Clustered: {
                    const double mean = rng.canonical() < 0.9 ? 0.1 : 0.9;
                    w = std::max(mean + 0.02 * rng.normal(), 0.0);
                    break;
                }
                case SynthDist::Exploded: {
                    w = rng.canonical() < 0.9 ? 0.2 * rng.canonical()
                                              : 0.8 + 0.2 * rng.canonical();
                    break;
                }
            }
            m.at(i, j) = w;
            m.at(j, i) = w;
        }
    return m;
}

} // namespace risia
