#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "risia/assignment.hpp"
#include "risia/codebook.hpp"

namespace risia {

// K x K matrix of pairwise mismatch losses d(i, j) >= 0 with a zero
// diagonal. The raw matrix is directed; the symmetrized variant (entrywise
// mean with its transpose) is what path solvers consume.
struct LossMatrix {
    std::size_t K = 0;
    std::vector<double> d;
    bool symmetrized = false;
    std::string source;     // "miso", "uniform", "clustered", "exploded", ...
    std::uint64_t seed = 0;

    double& at(std::size_t i, std::size_t j) { return d[i * K + j]; }
    double at(std::size_t i, std::size_t j) const { return d[i * K + j]; }

    LossMatrix symmetrize() const;
};

// Feedback-channel operating point: bit error probability of BPSK over AWGN
// at the given SNR.
struct BscModel {
    double snr_db = 0.0;
    double q = 0.0;

    static BscModel from_snr_db(double snr_db);
};

double ber_from_snr_db(double snr_db);

// Relative SNR loss |1 - SNR_j / SNR_i| with both SNRs evaluated on user i's
// channel (codeword i is the configuration intended for user i). Throws
// DegenerateInstanceError when SNR_i is zero.
double mismatch_loss(const ChannelSet& channels, const Codebook& codebook, std::size_t i,
                     std::size_t j);

LossMatrix build_loss_matrix(const ChannelSet& channels, const Codebook& codebook,
                             bool symmetrize, unsigned threads = 1);

// Expected relative SNR loss under independent single-bit label errors:
// (1/K) * sum over label pairs at Hamming distance one of q * d(i, j).
// Evaluate on the raw (unsymmetrized) matrix.
double expected_loss(const LossMatrix& loss, const Assignment& assignment, double q);

// Open-path cost: sum of d(pi[k], pi[k+1]) without the closing edge.
double path_cost(const LossMatrix& loss, std::span<const int> pi);

enum class SynthDist { Uniform, Clustered, Exploded };

SynthDist synth_dist_from_name(const std::string& name);
std::string synth_dist_name(SynthDist dist);

// Symmetric zero-diagonal synthetic edge weights:
//   uniform   - i.i.d. U[0, 1]
//   clustered - N(0.1, 0.02^2) w.p. 0.9, else N(0.9, 0.02^2), truncated at 0
//   exploded  - U[0, 0.2] w.p. 0.9, else U[0.8, 1.0]
LossMatrix synth_matrix(SynthDist dist, std::size_t K, std::uint64_t seed);

} // namespace risia
