#include "risia/dip.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "risia/rng.hpp"

namespace risia {

namespace {

// Distinct sample values with their cumulative counts: pre[g] observations
// lie strictly below value[g] and post[g] = pre[g] + multiplicity.
struct Grouped {
    std::vector<double> value;
    std::vector<double> pre;
    std::vector<double> post;
};

Grouped group_sorted(const std::vector<double>& xs) {
    Grouped g;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        g.value.push_back(xs[i]);
        g.pre.push_back(static_cast<double>(i));
        g.post.push_back(static_cast<double>(j));
        i = j;
    }
    return g;
}

// For each prefix 0..j of points (x, y) with x strictly increasing, the
// maximum of ref[g] - hull(x[g]) over g <= j, where hull is the greatest
// convex minorant (lower hull) of the prefix points, plus the same maximum
// with the newest point's own deviation excluded. Incremental lower hull
// with per-segment deviation maxima; segments are rescanned only when hull
// vertices are popped.
void hull_deviation_pass(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<double>& ref, std::vector<double>& dev_max,
                         std::vector<double>& dev_max_excl) {
    const std::size_t n = x.size();
    dev_max.assign(n, 0.0);
    dev_max_excl.assign(n, 0.0);
    std::vector<std::size_t> hull;        // vertex indices
    std::vector<double> seg_max;          // max dev over (hull[k-1], hull[k]]
    std::vector<double> cum_max;          // max dev over [0, hull[k]]
    hull.reserve(n);
    seg_max.reserve(n);
    cum_max.reserve(n);

    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (x[a] - x[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (x[b] - x[o]);
    };

    for (std::size_t j = 0; j < n; ++j) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), j) <= 0.0) {
            hull.pop_back();
            seg_max.pop_back();
            cum_max.pop_back();
        }
        double seg = ref[j] - y[j];  // the new vertex's own deviation
        double seg_excl = 0.0;
        if (!hull.empty()) {
            const std::size_t a = hull.back();
            const double slope = (y[j] - y[a]) / (x[j] - x[a]);
            for (std::size_t g = a + 1; g < j; ++g) {
                const double dev = ref[g] - (y[a] + slope * (x[g] - x[a]));
                seg = std::max(seg, dev);
                seg_excl = std::max(seg_excl, dev);
            }
        }
        const double prev = cum_max.empty() ? 0.0 : cum_max.back();
        hull.push_back(j);
        seg_max.push_back(seg);
        cum_max.push_back(std::max(prev, seg));
        dev_max[j] = cum_max.back();
        dev_max_excl[j] = std::max(prev, seg_excl);
    }
}

} // namespace

double dip_statistic(std::vector<double> sample) {
    const std::size_t n = sample.size();
    if (n < 2) return 0.0;
    std::sort(sample.begin(), sample.end());
    if (sample.front() == sample.back()) return 0.0;

    const Grouped g = group_sorted(sample);
    const std::size_t G = g.value.size();

    // Convex side: deviations of post counts above the lower hull of pre
    // counts, per prefix.
    std::vector<double> a_max, a_excl;
    hull_deviation_pass(g.value, g.pre, g.post, a_max, a_excl);

    // Concave side, mirrored into the same primitive: reflect x and negate,
    // so the least concave majorant of post becomes a lower hull and the
    // deviation M(v) - pre appears as ref - hull.
    std::vector<double> rx(G), ry(G), rref(G);
    for (std::size_t i = 0; i < G; ++i) {
        const std::size_t s = G - 1 - i;
        rx[i] = -g.value[s];
        ry[i] = -g.post[s];
        rref[i] = -g.pre[s];
    }
    std::vector<double> b_rev, b_excl_rev;
    hull_deviation_pass(rx, ry, rref, b_rev, b_excl_rev);
    std::vector<double> b_max(G), b_excl(G);
    for (std::size_t i = 0; i < G; ++i) {
        b_max[i] = b_rev[G - 1 - i];
        b_excl[i] = b_excl_rev[G - 1 - i];
    }

    // Mode strictly between groups s-1 and s (or outside the support).
    double best = std::min(b_max[0], a_max[G - 1]);
    for (std::size_t s = 1; s < G; ++s) best = std::min(best, std::max(a_max[s - 1], b_max[s]));
    // Mode exactly at a group value, where the CDF may jump.
    for (std::size_t v = 0; v < G; ++v) best = std::min(best, std::max(a_excl[v], b_excl[v]));

    return best / (2.0 * static_cast<double>(n));
}

double dip_critical_value(std::size_t n, double alpha) {
    if (n < 4) throw std::invalid_argument("dip_critical_value: need n >= 4");
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("dip_critical_value: alpha must be in (0, 1)");

    constexpr std::size_t kBootstrapCap = 8192;
    constexpr std::size_t kReplicates = 400;

    const std::size_t nb = std::min(n, kBootstrapCap);

    static std::mutex cache_mutex;
    static std::map<std::pair<std::size_t, long>, double> cache;
    const std::pair<std::size_t, long> key{nb, std::lround(alpha * 1e6)};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second * std::sqrt(static_cast<double>(nb) / static_cast<double>(n));
    }

    std::vector<double> dips(kReplicates);
    for (std::size_t r = 0; r < kReplicates; ++r) {
        Rng rng = substream(0xd1b0u, nb, r);
        std::vector<double> sample(nb);
        for (auto& v : sample) v = rng.canonical();
        dips[r] = dip_statistic(std::move(sample));
    }
    std::sort(dips.begin(), dips.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil((1.0 - alpha) * static_cast<double>(kReplicates)));
    const double crit = dips[std::min(rank, kReplicates) - 1];

    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(key, crit);
    }
    return crit * std::sqrt(static_cast<double>(nb) / static_cast<double>(n));
}

} // namespace risia
