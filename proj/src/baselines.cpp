#include "risia/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "risia/rng.hpp"

namespace risia {

namespace {
constexpr double kImproveEps = 1e-15;  // keeps float noise from looping forever
}

Permutation natural_order(std::size_t K) {
    if (K < 1) throw std::invalid_argument("natural_order: K must be >= 1");
    Permutation pi(K);
    std::iota(pi.begin(), pi.end(), 0);
    return pi;
}

Permutation random_order(std::size_t K, std::uint64_t seed) {
    Permutation pi = natural_order(K);
    Rng rng = substream(seed, 0xf15e5u);
    rng.shuffle(pi.begin(), pi.end());
    return pi;
}

Permutation greedy_order(const LossMatrix& loss, std::size_t start) {
    const std::size_t K = loss.K;
    if (start >= K) throw std::invalid_argument("greedy_order: start out of range");
    Permutation pi;
    pi.reserve(K);
    std::vector<bool> visited(K, false);
    std::size_t current = start;
    pi.push_back(static_cast<int>(current));
    visited[current] = true;
    for (std::size_t step = 1; step < K; ++step) {
        std::size_t best = K;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < K; ++j) {
            if (!visited[j] && loss.at(current, j) < best_d) {
                best_d = loss.at(current, j);
                best = j;
            }
        }
        visited[best] = true;
        pi.push_back(static_cast<int>(best));
        current = best;
    }
    return pi;
}

Permutation greedy_best_start(const LossMatrix& loss) {
    Permutation best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < loss.K; ++s) {
        Permutation pi = greedy_order(loss, s);
        const double c = path_cost(loss, pi);
        if (c < best_cost) {
            best_cost = c;
            best = std::move(pi);
        }
    }
    return best;
}

Permutation two_opt(const LossMatrix& loss, Permutation pi, int max_passes) {
    const std::size_t K = loss.K;
    if (!is_permutation_of_range(pi, K)) throw std::invalid_argument("two_opt: invalid init");
    auto d = [&](int a, int b) { return loss.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i < K - 1; ++i) {
            for (std::size_t j = i + 1; j < K; ++j) {
                if (i == 0 && j == K - 1) continue;  // full reversal, zero delta
                double delta = 0.0;
                if (i > 0) delta += d(pi[i - 1], pi[j]) - d(pi[i - 1], pi[i]);
                if (j < K - 1) delta += d(pi[i], pi[j + 1]) - d(pi[j], pi[j + 1]);
                if (delta < -kImproveEps) {
                    std::reverse(pi.begin() + static_cast<long>(i),
                                 pi.begin() + static_cast<long>(j) + 1);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    return pi;
}

namespace {

// Segment boundaries for a 3-opt move: edges at positions p1 < p2 < p3 split
// the path into S0 = [0, p1], S1 = (p1, p2], S2 = (p2, p3], S3 = (p3, K).
// The seven non-identity reconnections reorder/reverse S1 and S2.
struct ThreeOptMove {
    bool swap_segments;
    bool rev_first;
    bool rev_second;
};

constexpr ThreeOptMove kThreeOptMoves[7] = {
    {false, true, false}, {false, false, true}, {false, true, true},
    {true, false, false}, {true, false, true},  {true, true, false},
    {true, true, true},
};

} // namespace

Permutation three_opt(const LossMatrix& loss, Permutation pi, int max_passes) {
    const std::size_t K = loss.K;
    if (!is_permutation_of_range(pi, K)) throw std::invalid_argument("three_opt: invalid init");
    if (K < 4) return pi;
    auto d = [&](int a, int b) { return loss.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };

    Permutation scratch;
    scratch.reserve(K);
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (std::size_t p1 = 0; p1 + 2 < K - 1; ++p1) {
            for (std::size_t p2 = p1 + 1; p2 + 1 < K - 1; ++p2) {
                for (std::size_t p3 = p2 + 1; p3 < K - 1; ++p3) {
                    const int a = pi[p1], b = pi[p1 + 1];
                    const int c = pi[p2], e = pi[p2 + 1];
                    const int f = pi[p3], g = pi[p3 + 1];
                    const double removed = d(a, b) + d(c, e) + d(f, g);
                    for (const auto& mv : kThreeOptMoves) {
                        const int h1 = mv.swap_segments ? (mv.rev_first ? f : e)
                                                        : (mv.rev_first ? c : b);
                        const int t1 = mv.swap_segments ? (mv.rev_first ? e : f)
                                                        : (mv.rev_first ? b : c);
                        const int h2 = mv.swap_segments ? (mv.rev_second ? c : b)
                                                        : (mv.rev_second ? f : e);
                        const int t2 = mv.swap_segments ? (mv.rev_second ? b : c)
                                                        : (mv.rev_second ? e : f);
                        const double added = d(a, h1) + d(t1, h2) + d(t2, g);
                        if (added - removed < -kImproveEps) {
                            scratch.assign(pi.begin(), pi.begin() + static_cast<long>(p1) + 1);
                            auto s1_begin = pi.begin() + static_cast<long>(p1) + 1;
                            auto s1_end = pi.begin() + static_cast<long>(p2) + 1;
                            auto s2_begin = s1_end;
                            auto s2_end = pi.begin() + static_cast<long>(p3) + 1;
                            auto append = [&](auto begin, auto end, bool rev) {
                                if (rev)
                                    scratch.insert(scratch.end(),
                                                   std::make_reverse_iterator(end),
                                                   std::make_reverse_iterator(begin));
                                else
                                    scratch.insert(scratch.end(), begin, end);
                            };
                            if (mv.swap_segments) {
                                append(s2_begin, s2_end, mv.rev_first);
                                append(s1_begin, s1_end, mv.rev_second);
                            } else {
                                append(s1_begin, s1_end, mv.rev_first);
                                append(s2_begin, s2_end, mv.rev_second);
                            }
                            scratch.insert(scratch.end(), s2_end, pi.end());
                            pi.swap(scratch);
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
        if (!improved) break;
    }
    return pi;
}

std::pair<Permutation, double> exact_optimum(const LossMatrix& loss) {
    const std::size_t K = loss.K;
    if (K < 1) throw std::invalid_argument("exact_optimum: empty matrix");
    if (K > 13) throw std::invalid_argument("exact_optimum: refusing K > 13 (exponential state)");
    if (K == 1) return {Permutation{0}, 0.0};

    const std::size_t full = (std::size_t{1} << K) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp((full + 1) * K, inf);
    std::vector<int> parent((full + 1) * K, -1);
    for (std::size_t v = 0; v < K; ++v) dp[(std::size_t{1} << v) * K + v] = 0.0;

    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t v = 0; v < K; ++v) {
            const double cur = dp[mask * K + v];
            if (cur == inf || !(mask & (std::size_t{1} << v))) continue;
            for (std::size_t u = 0; u < K; ++u) {
                if (mask & (std::size_t{1} << u)) continue;
                const std::size_t next = mask | (std::size_t{1} << u);
                const double cand = cur + loss.at(v, u);
                if (cand < dp[next * K + u]) {
                    dp[next * K + u] = cand;
                    parent[next * K + u] = static_cast<int>(v);
                }
            }
        }
    }

    std::size_t best_end = 0;
    double best = inf;
    for (std::size_t v = 0; v < K; ++v) {
        if (dp[full * K + v] < best) {
            best = dp[full * K + v];
            best_end = v;
        }
    }

    Permutation pi(K);
    std::size_t mask = full;
    std::size_t v = best_end;
    for (std::size_t pos = K; pos-- > 0;) {
        pi[pos] = static_cast<int>(v);
        const int p = parent[mask * K + v];
        mask &= ~(std::size_t{1} << v);
        if (p < 0) break;
        v = static_cast<std::size_t>(p);
    }
    return {pi, best};
}

} // namespace risia
