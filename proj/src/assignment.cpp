#include "risia/assignment.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

#include "risia/rng.hpp"

namespace risia {

void Assignment::validate() const {
    if (K == 0 || !std::has_single_bit(K))
        throw std::invalid_argument("Assignment: K must be a power of two");
    if (label_of.size() != K) throw std::invalid_argument("Assignment: size mismatch");
    std::vector<bool> seen(K, false);
    for (auto label : label_of) {
        if (label >= K || seen[label])
            throw std::invalid_argument("Assignment: labels must form a bijection");
        seen[label] = true;
    }
}

unsigned Assignment::bits() const {
    return static_cast<unsigned>(std::bit_width(K) - 1);
}

std::uint32_t gray_code(std::uint32_t k, unsigned bits) {
    if (bits == 0 || bits > 31 || k >= (1u << bits))
        throw std::invalid_argument("gray_code: position out of range");
    return k ^ (k >> 1);
}

Assignment assign_from_path(std::span<const int> path) {
    const std::size_t K = path.size();
    if (K == 0 || !std::has_single_bit(K))
        throw std::invalid_argument("assign_from_path: K must be a power of two");
    if (!is_permutation_of_range(path, K))
        throw std::invalid_argument("assign_from_path: not a permutation");
    const unsigned bits = static_cast<unsigned>(std::bit_width(K) - 1);
    Assignment a;
    a.K = K;
    a.label_of.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        a.label_of[static_cast<std::size_t>(path[k])] =
            K == 1 ? 0 : gray_code(static_cast<std::uint32_t>(k), bits);
    }
    return a;
}

Assignment natural_assignment(std::size_t K) {
    Assignment a;
    a.K = K;
    a.label_of.resize(K);
    std::iota(a.label_of.begin(), a.label_of.end(), 0u);
    a.validate();
    return a;
}

Assignment random_assignment(std::size_t K, std::uint64_t seed) {
    Assignment a = natural_assignment(K);
    Rng rng = substream(seed, 0xa551u);
    rng.shuffle(a.label_of.begin(), a.label_of.end());
    return a;
}

Codebook remap_codebook(const Codebook& cb, const Assignment& a) {
    if (cb.size() != a.K) throw std::invalid_argument("remap_codebook: size mismatch");
    a.validate();
    Codebook out;
    out.num_units = cb.num_units;
    out.bits = cb.bits;
    out.codewords.resize(cb.size());
    for (std::size_t i = 0; i < cb.size(); ++i) out.codewords[a.label_of[i]] = cb.codewords[i];
    return out;
}

Permutation order_by_label(const Assignment& a) {
    a.validate();
    Permutation pi(a.K);
    for (std::size_t i = 0; i < a.K; ++i) pi[a.label_of[i]] = static_cast<int>(i);
    return pi;
}

bool is_permutation_of_range(std::span<const int> pi, std::size_t K) {
    if (pi.size() != K) return false;
    std::vector<bool> seen(K, false);
    for (int v : pi) {
        if (v < 0 || static_cast<std::size_t>(v) >= K || seen[static_cast<std::size_t>(v)])
            return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

} // namespace risia
