#include "risia/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "risia/dip.hpp"
#include "risia/parallel.hpp"

namespace risia {

namespace {

constexpr double kCountEps = 1e-9;          // historical-weight denominator guard
constexpr std::uint64_t kTagShotgun = 0x5618u;
constexpr std::uint64_t kTagFuzzy = 0xf220u;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

SolverParams SolverParams::defaults_for(std::size_t K) {
    if (K < 2) throw std::invalid_argument("SolverParams: K must be >= 2");
    const double sq = std::sqrt(static_cast<double>(K));
    const auto k = static_cast<long long>(K);
    SolverParams p;
    p.l1 = std::max(1, static_cast<int>(std::lround(sq)));
    p.l2 = std::max(p.l1 + 1, static_cast<int>(std::lround(2.0 * sq)));
    p.l3 = std::max(p.l2 + 1, static_cast<int>(k / 3));
    if (K >= 4) {
        p.l3 = std::min<int>(p.l3, static_cast<int>(K) - 1);
        p.l2 = std::min(p.l2, p.l3 - 1);
        p.l1 = std::min(p.l1, p.l2 - 1);
    } else {
        p.l1 = 1;
        p.l2 = 2;
        p.l3 = 3;
    }
    p.f = 4;
    p.n_shot = 3 * k * k;
    p.k_shot = std::min(3 * k, p.n_shot);
    p.n_cate = 200 * k;
    p.k_cate0 = std::min(4 * k, p.n_cate);
    p.mu0 = 0.5;
    p.sigma = 0.01;
    p.mu_min = 0.15;
    p.z = k / 20;
    p.k_min = std::min<long long>(200, p.k_cate0);
    p.T = static_cast<int>(std::ceil(sq));
    return p;
}

void SolverParams::validate(std::size_t K) const {
    if (f < 2 || f > 8) throw std::invalid_argument("SolverParams: f must be in [2, 8]");
    if (!(mu_min > 0.0 && mu_min <= mu0 && mu0 <= 1.0))
        throw std::invalid_argument("SolverParams: need 0 < mu_min <= mu0 <= 1");
    if (sigma < 0.0) throw std::invalid_argument("SolverParams: sigma must be >= 0");
    if (static_cast<long long>(K) > f + 1) {
        if (!(1 <= l1 && l1 < l2 && l2 < l3 && l3 < static_cast<int>(K)))
            throw std::invalid_argument("SolverParams: need 1 <= l1 < l2 < l3 < K");
        if (n_shot < 1 || k_shot < 1 || k_shot > n_shot)
            throw std::invalid_argument("SolverParams: need 1 <= k_shot <= n_shot");
        if (n_cate < 1 || k_cate0 < 1 || k_cate0 > n_cate)
            throw std::invalid_argument("SolverParams: need 1 <= k_cate0 <= n_cate");
        if (k_min < 1 || k_min > k_cate0)
            throw std::invalid_argument("SolverParams: need 1 <= k_min <= k_cate0");
        if (z < 0) throw std::invalid_argument("SolverParams: z must be >= 0");
        if (T < 0) throw std::invalid_argument("SolverParams: T must be >= 0");
    }
    if (stagnation_rounds < 1)
        throw std::invalid_argument("SolverParams: stagnation_rounds must be >= 1");
}

void PairCounts::add(std::size_t u, std::size_t v, double w) {
    if (u == v) return;
    delta[u * K + v] += w;
    delta[v * K + u] += w;
}

void PairCounts::add_route(std::span<const int> route) {
    for (std::size_t k = 0; k + 1 < route.size(); ++k)
        add(static_cast<std::size_t>(route[k]), static_cast<std::size_t>(route[k + 1]), 1.0);
}

double PairCounts::total() const {
    double q = 0.0;
    for (std::size_t u = 0; u < K; ++u)
        for (std::size_t v = u + 1; v < K; ++v) q += delta[u * K + v];
    return q;
}

double PairCounts::max_count() const {
    double m = 0.0;
    for (const double v : delta) m = std::max(m, v);
    return m;
}

void PairCounts::apply_mode_transform() {
    if (mode == CountMode::Normal) return;
    if (mode == CountMode::UpperLimit) {
        const double cap = 0.05 * total();
        for (double& v : delta) v = std::min(v, cap);
        return;
    }
    // Intermediate: damp the mid-range band when it dominates.
    const double max_c = max_count();
    if (max_c <= 0.0) return;
    const double lo = 0.4 * max_c;
    const double hi = 0.8 * max_c;
    std::size_t nonzero = 0, in_band = 0;
    for (std::size_t u = 0; u < K; ++u)
        for (std::size_t v = u + 1; v < K; ++v) {
            const double c = delta[u * K + v];
            if (c > 0.0) {
                ++nonzero;
                if (c >= lo && c <= hi) ++in_band;
            }
        }
    if (nonzero == 0 || static_cast<double>(in_band) < 0.3 * static_cast<double>(nonzero)) return;
    for (double& v : delta) {
        if (v >= lo && v <= hi) v *= 0.3;
    }
}

namespace {
// Share of the largest weights excluded from the shape test. TypeI means the
// low-loss mass that actually forms neighborhoods is single-peaked; a small
// cluster of very large losses ("rare outliers") must not veto that.
constexpr double kClassifyOutlierTrim = 0.15;
} // namespace

DistType classify_distribution(const LossMatrix& loss) {
    const std::size_t K = loss.K;
    if (K < 4) throw std::invalid_argument("classify_distribution: K must be >= 4");
    bool symmetric = true;
    for (std::size_t i = 0; i < K && symmetric; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
            if (loss.at(i, j) != loss.at(j, i)) {
                symmetric = false;
                break;
            }
        }
    // A symmetric matrix contributes every weight twice; the dip statistic is
    // invariant under duplication, so work on the independent draws and
    // calibrate the null quantile at their count.
    std::vector<double> weights;
    weights.reserve(K * (K - 1));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = symmetric ? i + 1 : 0; j < K; ++j) {
            if (i != j) weights.push_back(loss.at(i, j));
        }
    std::sort(weights.begin(), weights.end());
    if (weights.back() - weights.front() <= 1e-12 * std::max(std::abs(weights.back()), 1.0))
        return DistType::TypeI;
    weights.resize(weights.size() - static_cast<std::size_t>(
                                        kClassifyOutlierTrim *
                                        static_cast<double>(weights.size())));
    const double dip = dip_statistic(weights);
    return dip < dip_critical_value(weights.size(), 0.05) ? DistType::TypeI : DistType::TypeII;
}

NeighborLayers build_layers(const LossMatrix& loss, const SolverParams& params) {
    const std::size_t K = loss.K;
    NeighborLayers layers;
    layers.K = K;
    layers.layer1.resize(K);
    layers.layer2.resize(K);
    layers.layer3.resize(K);
    std::vector<int> order(K - 1);
    for (std::size_t i = 0; i < K; ++i) {
        int w = 0;
        for (std::size_t j = 0; j < K; ++j) {
            if (j != i) order[static_cast<std::size_t>(w++)] = static_cast<int>(j);
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = loss.at(i, static_cast<std::size_t>(a));
            const double db = loss.at(i, static_cast<std::size_t>(b));
            return da != db ? da < db : a < b;
        });
        const auto take = [&](std::size_t from, std::size_t count) {
            from = std::min(from, order.size());
            const std::size_t to = std::min(from + count, order.size());
            return std::vector<int>(order.begin() + static_cast<long>(from),
                                    order.begin() + static_cast<long>(to));
        };
        layers.layer1[i] = take(0, static_cast<std::size_t>(params.l1));
        layers.layer2[i] = take(static_cast<std::size_t>(params.l1),
                                static_cast<std::size_t>(params.l2));
        layers.layer3[i] = take(static_cast<std::size_t>(params.l1 + params.l2),
                                static_cast<std::size_t>(params.l3));
    }
    return layers;
}

std::vector<int> candidate_set(int current, const std::vector<bool>& visited,
                               const NeighborLayers& layers, DistType dist_type) {
    std::vector<int> omega;
    const auto all_unvisited = [&] {
        omega.clear();
        for (std::size_t j = 0; j < visited.size(); ++j) {
            if (!visited[j]) omega.push_back(static_cast<int>(j));
        }
    };
    if (dist_type == DistType::TypeII) {
        all_unvisited();
        return omega;
    }
    const auto cur = static_cast<std::size_t>(current);
    for (const auto* layer :
         {&layers.layer1[cur], &layers.layer2[cur], &layers.layer3[cur]}) {
        omega.clear();
        for (int j : *layer) {
            if (!visited[static_cast<std::size_t>(j)]) omega.push_back(j);
        }
        if (!omega.empty()) return omega;
    }
    all_unvisited();
    return omega;
}

std::vector<double> selection_probs(int current, std::span<const int> omega,
                                    const LossMatrix& loss, double mu) {
    if (omega.empty()) throw std::invalid_argument("selection_probs: empty candidate set");
    if (mu <= 0.0) throw std::invalid_argument("selection_probs: mu must be > 0");
    const auto cur = static_cast<std::size_t>(current);
    std::vector<double> p(omega.size());
    double dbar = 0.0;
    for (int m : omega) dbar += loss.at(cur, static_cast<std::size_t>(m));
    dbar /= static_cast<double>(omega.size());
    double total = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (dbar <= 0.0) {
            p[k] = 1.0;
        } else {
            const double r = loss.at(cur, static_cast<std::size_t>(omega[k])) / (mu * dbar);
            p[k] = 1.0 / (1.0 + r * r);
        }
        total += p[k];
    }
    for (double& v : p) v /= total;
    return p;
}

namespace {

// Reused per-route buffers; one instance per worker thread.
struct RouteScratch {
    std::vector<bool> visited;
    std::vector<int> omega;
    std::vector<double> prob;
    std::vector<int> tail;
    std::vector<int> best_tail;
};

// Appends the cheapest ordering of the remaining codewords by enumerating
// all f! tails; ties resolve to the lexicographically smallest ordering.
void finish_tail_exhaustive(Permutation& route, const LossMatrix& loss, int current,
                            RouteScratch& s) {
    auto& tail = s.tail;
    tail.clear();
    for (std::size_t j = 0; j < s.visited.size(); ++j) {
        if (!s.visited[j]) tail.push_back(static_cast<int>(j));
    }
    double best = std::numeric_limits<double>::infinity();
    s.best_tail = tail;
    do {
        double c = 0.0;
        int prev = current;
        for (int node : tail) {
            if (prev >= 0)
                c += loss.at(static_cast<std::size_t>(prev), static_cast<std::size_t>(node));
            prev = node;
            if (c >= best) break;
        }
        if (c < best) {
            best = c;
            s.best_tail = tail;
        }
    } while (std::next_permutation(tail.begin(), tail.end()));
    for (int node : s.best_tail) {
        route.push_back(node);
        s.visited[static_cast<std::size_t>(node)] = true;
    }
}

void sample_route_into(Permutation& route, const LossMatrix& loss, const NeighborLayers& layers,
                       DistType dist_type, double mu, const PairCounts* counts, int f,
                       Rng& rng, RouteScratch& s) {
    const std::size_t K = loss.K;
    route.clear();
    route.reserve(K);
    s.visited.assign(K, false);
    std::size_t remaining = K;
    int current = -1;

    while (remaining > 0) {
        if (remaining == static_cast<std::size_t>(f)) {
            finish_tail_exhaustive(route, loss, current, s);
            return;
        }
        if (current < 0) {
            current = static_cast<int>(rng.index(K));
        } else {
            // Candidate set per the provision rules.
            auto& omega = s.omega;
            bool found = false;
            if (dist_type == DistType::TypeI) {
                const auto cur = static_cast<std::size_t>(current);
                for (const auto* layer :
                     {&layers.layer1[cur], &layers.layer2[cur], &layers.layer3[cur]}) {
                    omega.clear();
                    for (int j : *layer) {
                        if (!s.visited[static_cast<std::size_t>(j)]) omega.push_back(j);
                    }
                    if (!omega.empty()) {
                        found = true;
                        break;
                    }
                }
            }
            if (!found) {
                omega.clear();
                for (std::size_t j = 0; j < K; ++j) {
                    if (!s.visited[j]) omega.push_back(static_cast<int>(j));
                }
            }

            // Loss-biased selection probabilities, optionally reweighted by
            // the historical pair counts.
            auto& prob = s.prob;
            prob.resize(omega.size());
            const auto cur = static_cast<std::size_t>(current);
            double dbar = 0.0;
            for (int m : omega) dbar += loss.at(cur, static_cast<std::size_t>(m));
            dbar /= static_cast<double>(omega.size());
            for (std::size_t k = 0; k < omega.size(); ++k) {
                if (dbar <= 0.0) {
                    prob[k] = 1.0;
                } else {
                    const double r =
                        loss.at(cur, static_cast<std::size_t>(omega[k])) / (mu * dbar);
                    prob[k] = 1.0 / (1.0 + r * r);
                }
            }
            if (counts != nullptr) {
                double count_sum = 0.0;
                for (int m : omega) count_sum += counts->at(cur, static_cast<std::size_t>(m));
                if (count_sum > 0.0) {
                    for (std::size_t k = 0; k < omega.size(); ++k) {
                        prob[k] *= counts->at(cur, static_cast<std::size_t>(omega[k])) /
                                   (count_sum + kCountEps);
                    }
                }
                // All-zero counts leave the weights uniform, i.e. untouched.
            }
            double total = 0.0;
            for (const double v : prob) total += v;
            const double r = rng.canonical() * total;
            double acc = 0.0;
            std::size_t pick = omega.size() - 1;
            for (std::size_t k = 0; k < omega.size(); ++k) {
                acc += prob[k];
                if (r < acc) {
                    pick = k;
                    break;
                }
            }
            current = omega[pick];
        }
        route.push_back(current);
        s.visited[static_cast<std::size_t>(current)] = true;
        --remaining;
    }
}

struct SampledBatch {
    std::vector<long long> kept_idx;      // ascending (cost, index)
    std::vector<double> kept_cost;
    std::vector<Permutation> kept_route;
};

// Draws n routes on deterministic substreams and keeps the k cheapest (ties
// by sample index). Costs are computed in a first pass and only the winners
// are re-sampled, so memory stays O(n costs + k routes) and the result is
// independent of the thread count.
SampledBatch sample_top_k(const LossMatrix& loss, const NeighborLayers& layers,
                          DistType dist_type, double mu, const PairCounts* counts, int f,
                          std::uint64_t seed, std::uint64_t tag, std::uint64_t round,
                          long long n, long long k, unsigned threads) {
    std::vector<double> costs(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        thread_local RouteScratch scratch;
        thread_local Permutation route;
        Rng rng = substream(seed, tag, round, i);
        sample_route_into(route, loss, layers, dist_type, mu, counts, f, rng, scratch);
        costs[i] = path_cost(loss, route);
    });

    std::vector<long long> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0ll);
    const auto keep = static_cast<std::size_t>(std::min(k, n));
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(keep), idx.end(),
                      [&](long long a, long long b) {
                          const double ca = costs[static_cast<std::size_t>(a)];
                          const double cb = costs[static_cast<std::size_t>(b)];
                          return ca != cb ? ca < cb : a < b;
                      });
    idx.resize(keep);

    SampledBatch batch;
    batch.kept_idx = idx;
    batch.kept_cost.resize(keep);
    batch.kept_route.resize(keep);
    parallel_for(keep, threads, [&](std::size_t r) {
        thread_local RouteScratch scratch;
        Rng rng = substream(seed, tag, round, static_cast<std::uint64_t>(idx[r]));
        sample_route_into(batch.kept_route[r], loss, layers, dist_type, mu, counts, f, rng,
                          scratch);
        batch.kept_cost[r] = costs[static_cast<std::size_t>(idx[r])];
    });
    return batch;
}

} // namespace

Permutation sample_route(const LossMatrix& loss, const NeighborLayers& layers,
                         DistType dist_type, double mu, const PairCounts* counts, int f,
                         Rng& rng) {
    RouteScratch scratch;
    Permutation route;
    sample_route_into(route, loss, layers, dist_type, mu, counts, f, rng, scratch);
    return route;
}

ShotgunResult shotgun_phase(const LossMatrix& loss, const NeighborLayers& layers,
                            DistType dist_type, const SolverParams& params, unsigned threads) {
    SampledBatch batch =
        sample_top_k(loss, layers, dist_type, params.mu0, nullptr, params.f, params.seed,
                     kTagShotgun, 0, params.n_shot, params.k_shot, threads);
    ShotgunResult out{std::move(batch.kept_route), std::move(batch.kept_cost),
                      PairCounts(loss.K)};
    for (const auto& route : out.routes) out.counts.add_route(route);
    return out;
}

double mu_schedule(const SolverParams& params, int t) {
    return std::max(params.mu0 - params.sigma * t, params.mu_min);
}

long long k_cate_schedule(const SolverParams& params, long long previous, int t) {
    return std::max(previous - params.z * t, params.k_min);
}

SolverReport fuzzy_phase(const LossMatrix& loss, const NeighborLayers& layers,
                         DistType dist_type, const SolverParams& params,
                         const ShotgunResult& init, unsigned threads) {
    const auto start = Clock::now();
    if (init.routes.empty()) throw std::invalid_argument("fuzzy_phase: empty shotgun result");

    SolverReport report;
    report.best_pi = init.routes.front();
    report.best_cost = init.costs.front();
    report.cost_trace.push_back(report.best_cost);

    PairCounts counts = init.counts;
    long long k_cate = params.k_cate0;
    int no_improve = 0;
    int stagnant_modes = 0;

    for (int t = 1; t <= params.T; ++t) {
        const double mu = mu_schedule(params, t);
        k_cate = k_cate_schedule(params, k_cate, t);

        SampledBatch batch =
            sample_top_k(loss, layers, dist_type, mu, &counts, params.f, params.seed,
                         kTagFuzzy, static_cast<std::uint64_t>(t), params.n_cate, k_cate,
                         threads);
        for (const auto& route : batch.kept_route) counts.add_route(route);

        report.iterations_run = t;
        const bool improved = !batch.kept_cost.empty() && batch.kept_cost.front() < report.best_cost;
        if (improved) {
            report.best_cost = batch.kept_cost.front();
            report.best_pi = batch.kept_route.front();
            no_improve = 0;
            stagnant_modes = 0;
        } else {
            ++no_improve;
        }
        report.cost_trace.push_back(report.best_cost);

        if (!improved && no_improve >= params.stagnation_rounds) {
            ++stagnant_modes;
            if (stagnant_modes >= 3) break;  // every mode stagnated in turn
            switch (counts.mode) {
                case CountMode::Normal: counts.mode = CountMode::UpperLimit; break;
                case CountMode::UpperLimit: counts.mode = CountMode::Intermediate; break;
                case CountMode::Intermediate: counts.mode = CountMode::Normal; break;
            }
            ++report.mode_switches;
            no_improve = 0;
        }
        counts.apply_mode_transform();
    }

    report.wall_time_ms = elapsed_ms(start);
    return report;
}

SolverReport solve(const LossMatrix& loss, const SolverParams& params, unsigned threads) {
    const std::size_t K = loss.K;
    if (K < 2) throw std::invalid_argument("solve: K must be >= 2");
    const auto start = Clock::now();

    if (K <= static_cast<std::size_t>(params.f) + 1) {
        // Exhaustive regime: the tail search would cover the whole instance.
        Permutation nodes(K);
        std::iota(nodes.begin(), nodes.end(), 0);
        Permutation best = nodes;
        double best_cost = path_cost(loss, nodes);
        while (std::next_permutation(nodes.begin(), nodes.end())) {
            const double c = path_cost(loss, nodes);
            if (c < best_cost) {
                best_cost = c;
                best = nodes;
            }
        }
        SolverReport report;
        report.best_pi = std::move(best);
        report.best_cost = best_cost;
        report.cost_trace.push_back(best_cost);
        report.wall_time_ms = elapsed_ms(start);
        return report;
    }

    params.validate(K);
    const DistType dist_type = classify_distribution(loss);
    const NeighborLayers layers = build_layers(loss, params);
    const ShotgunResult shotgun = shotgun_phase(loss, layers, dist_type, params, threads);
    SolverReport report = fuzzy_phase(loss, layers, dist_type, params, shotgun, threads);
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

} // namespace risia
