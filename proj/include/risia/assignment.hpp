#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "risia/codebook.hpp"

namespace risia {

using Permutation = std::vector<int>;

// Bijection from codeword index to binary feedback label; K must be a power
// of two so labels fill exactly log2(K) bits.
struct Assignment {
    std::size_t K = 0;
    std::vector<std::uint32_t> label_of;

    void validate() const;  // throws std::invalid_argument
    unsigned bits() const;
};

// Reflected binary Gray code of position k, k XOR (k >> 1).
std::uint32_t gray_code(std::uint32_t k, unsigned bits);

// Labels path position k with the k-th Gray code, so path-adjacent codewords
// always receive labels at Hamming distance one.
Assignment assign_from_path(std::span<const int> path);

Assignment natural_assignment(std::size_t K);
Assignment random_assignment(std::size_t K, std::uint64_t seed);

// New codebook in which slot label_of[i] holds codeword i.
Codebook remap_codebook(const Codebook& codebook, const Assignment& assignment);

// The codeword ordering implied by ascending label value (inverse label map).
Permutation order_by_label(const Assignment& assignment);

bool is_permutation_of_range(std::span<const int> pi, std::size_t K);

} // namespace risia
