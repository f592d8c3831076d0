#pragma once

#include <cstdint>
#include <utility>

#include "risia/loss.hpp"

namespace risia {

Permutation natural_order(std::size_t K);

// Seed-deterministic Fisher-Yates shuffle of the identity.
Permutation random_order(std::size_t K, std::uint64_t seed);

// Nearest-neighbor construction from a fixed start; ties broken by index.
Permutation greedy_order(const LossMatrix& loss, std::size_t start = 0);

// Nearest-neighbor run from every start, keeping the cheapest path.
Permutation greedy_best_start(const LossMatrix& loss);

// Open-path local search by segment reversal (2-opt) or 3-edge reconnection
// (3-opt): first improvement, deterministic scan order, endpoint moves
// included, until a clean pass or max_passes.
Permutation two_opt(const LossMatrix& loss, Permutation init, int max_passes = 1000);
Permutation three_opt(const LossMatrix& loss, Permutation init, int max_passes = 1000);

// Exact minimum-cost open Hamiltonian path with free endpoints (Held-Karp
// over subsets). Refuses K > 13.
std::pair<Permutation, double> exact_optimum(const LossMatrix& loss);

} // namespace risia
