#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "risia/loss.hpp"
#include "risia/rng.hpp"

namespace risia {

// Edge-weight distribution shape, decided by a dip test on all off-diagonal
// weights: TypeI (unimodal, layered candidate restriction applies) or TypeII
// (irregular, every unvisited codeword stays a candidate).
enum class DistType { TypeI, TypeII };

enum class CountMode { Normal, UpperLimit, Intermediate };

struct SolverParams {
    int l1 = 0, l2 = 0, l3 = 0;      // neighbor layer sizes, l1 < l2 < l3 < K
    int f = 4;                       // exhaustive tail threshold
    long long n_shot = 0;            // routes sampled in the shotgun phase
    long long k_shot = 0;            // routes kept from the shotgun phase
    long long n_cate = 0;            // routes sampled per fuzzy iteration
    long long k_cate0 = 0;           // initial keep count per fuzzy iteration
    double mu0 = 0.5;                // initial perturbation coefficient
    double sigma = 0.01;             // mu decay per iteration
    double mu_min = 0.15;            // mu floor
    long long z = 0;                 // keep-count decay rate
    long long k_min = 200;           // keep-count floor
    int T = 0;                       // max fuzzy iterations
    std::uint64_t seed = 0;
    int stagnation_rounds = 3;       // non-improving iterations before a mode switch

    // Table defaults: l1 = round(sqrt(K)), l2 = round(2 sqrt(K)), l3 = K/3,
    // f = 4, n_shot = 3K^2, k_shot = 3K, n_cate = 200K, k_cate0 = 4K,
    // mu0 = 0.5, sigma = 0.01, mu_min = 0.15, z = K/20, k_min = 200,
    // T = ceil(sqrt(K)); layer sizes and floors clamped so the invariants
    // still hold at small K.
    static SolverParams defaults_for(std::size_t K);

    void validate(std::size_t K) const;
};

// Per codeword: the l1 nearest neighbors by symmetrized loss, the next l2,
// and the next l3, each sorted ascending by loss (ties by index).
struct NeighborLayers {
    std::size_t K = 0;
    std::vector<std::vector<int>> layer1, layer2, layer3;
};

// Symmetric zero-diagonal tally of how often each unordered codeword pair
// appeared adjacently in kept routes. Counts are reals: mode transforms cap
// or rescale them fractionally.
struct PairCounts {
    std::size_t K = 0;
    std::vector<double> delta;
    CountMode mode = CountMode::Normal;

    explicit PairCounts(std::size_t K = 0) : K(K), delta(K * K, 0.0) {}

    double at(std::size_t u, std::size_t v) const { return delta[u * K + v]; }
    void add(std::size_t u, std::size_t v, double w);
    void add_route(std::span<const int> route);
    double total() const;      // sum over unordered pairs
    double max_count() const;

    // UpperLimit caps every count at 5% of the pair total; Intermediate
    // rescales the 40-80%-of-max band by 0.3 when it holds at least 30% of
    // the nonzero pairs; Normal leaves counts untouched.
    void apply_mode_transform();
};

struct SolverReport {
    Permutation best_pi;
    double best_cost = 0.0;
    std::vector<double> cost_trace;  // best-so-far, one entry per iteration
    int iterations_run = 0;
    int mode_switches = 0;
    double wall_time_ms = 0.0;
};

struct ShotgunResult {
    std::vector<Permutation> routes;  // k_shot best, ascending cost
    std::vector<double> costs;
    PairCounts counts;
};

// TypeI iff the dip statistic of the off-diagonal weights, excluding the
// top 15% (rare large-loss outliers do not decide the shape), stays below
// the 5%-significance critical value. A constant matrix counts as TypeI.
DistType classify_distribution(const LossMatrix& loss);

NeighborLayers build_layers(const LossMatrix& loss, const SolverParams& params);

// TypeI: first nonempty of layer1/layer2/layer3 minus visited, else all
// unvisited. TypeII: all unvisited.
std::vector<int> candidate_set(int current, const std::vector<bool>& visited,
                               const NeighborLayers& layers, DistType dist_type);

// p_m proportional to 1 / (1 + (d(current, m) / (mu * dbar))^2) with dbar the
// mean loss to the candidates; uniform when dbar is zero.
std::vector<double> selection_probs(int current, std::span<const int> omega,
                                    const LossMatrix& loss, double mu);

// One stochastic route: biased sequential extension, historical pair-count
// reweighting when counts are given, and an exhaustive best ordering of the
// last f codewords.
Permutation sample_route(const LossMatrix& loss, const NeighborLayers& layers,
                         DistType dist_type, double mu, const PairCounts* counts, int f,
                         Rng& rng);

// Fuzzy-phase schedules: mu decays linearly from mu0 with floor mu_min; the
// keep count shrinks by z * t per iteration with floor k_min.
double mu_schedule(const SolverParams& params, int t);
long long k_cate_schedule(const SolverParams& params, long long previous, int t);

ShotgunResult shotgun_phase(const LossMatrix& loss, const NeighborLayers& layers,
                            DistType dist_type, const SolverParams& params,
                            unsigned threads = 1);

SolverReport fuzzy_phase(const LossMatrix& loss, const NeighborLayers& layers,
                         DistType dist_type, const SolverParams& params,
                         const ShotgunResult& init, unsigned threads = 1);

// classify -> layers -> shotgun -> fuzzy; K <= f + 1 falls back to exact
// enumeration.
SolverReport solve(const LossMatrix& loss, const SolverParams& params, unsigned threads = 1);

} // namespace risia
