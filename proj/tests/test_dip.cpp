#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "risia/dip.hpp"
#include "risia/rng.hpp"

using namespace risia;

namespace {

struct Groups {
    std::vector<double> v, pre, post;
};

Groups group(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    Groups g;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        g.v.push_back(xs[i]);
        g.pre.push_back(static_cast<double>(i));
        g.post.push_back(static_cast<double>(j));
        i = j;
    }
    return g;
}

double chord(double xa, double ya, double xb, double yb, double x) {
    return ya + (yb - ya) * (x - xa) / (xb - xa);
}

// Greatest convex minorant of points (x[lo..hi], y[lo..hi]) at x[i]: in one
// dimension the convex envelope at a point is the minimum over all chords
// spanning it (Caratheodory with two points).
double gcm_at(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
              std::size_t hi, std::size_t i) {
    double best = y[i];
    for (std::size_t a = lo; a <= i; ++a)
        for (std::size_t b = i; b <= hi; ++b) {
            if (a == b) continue;
            best = std::min(best, chord(x[a], y[a], x[b], y[b], x[i]));
        }
    return best;
}

double lcm_at(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
              std::size_t hi, std::size_t i) {
    double best = y[i];
    for (std::size_t a = lo; a <= i; ++a)
        for (std::size_t b = i; b <= hi; ++b) {
            if (a == b) continue;
            best = std::max(best, chord(x[a], y[a], x[b], y[b], x[i]));
        }
    return best;
}

// Definitional dip: minimize over every mode placement the larger of the
// convex-side and concave-side band violations, from the sup-distance
// characterization of unimodal fits to the empirical CDF.
double dip_bruteforce(std::vector<double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const Groups g = group(std::move(xs));
    const std::size_t G = g.v.size();
    if (G == 1) return 0.0;

    auto a_dev = [&](std::size_t lo, std::size_t hi, bool exclude_hi) {
        double worst = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (exclude_hi && i == hi) continue;
            worst = std::max(worst, g.post[i] - gcm_at(g.v, g.pre, lo, hi, i));
        }
        return worst;
    };
    auto b_dev = [&](std::size_t lo, std::size_t hi, bool exclude_lo) {
        double worst = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (exclude_lo && i == lo) continue;
            worst = std::max(worst, lcm_at(g.v, g.post, lo, hi, i) - g.pre[i]);
        }
        return worst;
    };

    double best = std::numeric_limits<double>::infinity();
    // Mode between groups s-1 and s (s = 0: everything concave; s = G:
    // everything convex).
    for (std::size_t s = 0; s <= G; ++s) {
        const double a = s == 0 ? 0.0 : a_dev(0, s - 1, false);
        const double b = s == G ? 0.0 : b_dev(s, G - 1, false);
        best = std::min(best, std::max(a, b));
    }
    // Mode exactly at a group, where the fitted CDF may jump.
    for (std::size_t m = 0; m < G; ++m) {
        const double a = a_dev(0, m, true);
        const double b = b_dev(m, G - 1, true);
        best = std::min(best, std::max(a, b));
    }
    return best / (2.0 * static_cast<double>(n));
}

} // namespace

TEST_CASE("dip of degenerate and tiny samples") {
    CHECK(dip_statistic({}) == 0.0);
    CHECK(dip_statistic({1.0}) == 0.0);
    CHECK(dip_statistic({2.0, 2.0, 2.0, 2.0}) == 0.0);
    CHECK(dip_statistic({0.0, 1.0}) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("dip of an equally spaced grid is the lower bound 1/(2n)") {
    for (std::size_t n : {3u, 5u, 10u, 64u, 257u}) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i);
        CHECK(dip_statistic(xs) ==
              doctest::Approx(1.0 / (2.0 * static_cast<double>(n))).epsilon(1e-12));
    }
}

TEST_CASE("dip of a balanced two-point sample is the maximum 1/4") {
    for (std::size_t half : {1u, 2u, 8u, 50u}) {
        std::vector<double> xs;
        for (std::size_t i = 0; i < half; ++i) {
            xs.push_back(0.0);
            xs.push_back(1.0);
        }
        CHECK(dip_statistic(xs) == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("dip matches the definitional brute force on random samples") {
    Rng rng(2024);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 2 + rng.index(28);
        std::vector<double> xs(n);
        const int flavor = static_cast<int>(rng.index(4));
        for (auto& v : xs) {
            switch (flavor) {
                case 0: v = rng.canonical(); break;
                case 1: v = rng.canonical() < 0.5 ? rng.normal() : 6.0 + rng.normal(); break;
                case 2: v = rng.normal(); break;
                default:
                    // Heavy ties: values on a coarse lattice.
                    v = std::floor(rng.canonical() * 5.0);
                    break;
            }
        }
        const double got = dip_statistic(xs);
        const double want = dip_bruteforce(xs);
        INFO("rep=", rep, " n=", n, " flavor=", flavor);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("dip bounds and invariances") {
    Rng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.index(40);
        std::vector<double> xs(n);
        for (auto& v : xs) v = rng.normal();
        if (xs.front() == xs.back()) continue;
        const double dip = dip_statistic(xs);
        CHECK(dip >= 1.0 / (2.0 * static_cast<double>(n)) - 1e-15);
        CHECK(dip <= 0.25 + 1e-15);

        // Duplicating every observation leaves the statistic unchanged.
        std::vector<double> doubled = xs;
        doubled.insert(doubled.end(), xs.begin(), xs.end());
        CHECK(dip_statistic(doubled) == doctest::Approx(dip).epsilon(1e-14));

        // Positive affine transforms leave it unchanged.
        std::vector<double> mapped(n);
        for (std::size_t i = 0; i < n; ++i) mapped[i] = 3.5 * xs[i] - 11.0;
        CHECK(dip_statistic(mapped) == doctest::Approx(dip).epsilon(1e-9));
    }
}

TEST_CASE("clearly unimodal samples fall under the critical value, separated mixtures above") {
    Rng rng(8);
    const std::size_t n = 1200;
    std::vector<double> unimodal(n), bimodal(n);
    for (std::size_t i = 0; i < n; ++i) {
        unimodal[i] = 0.5 + 0.05 * rng.normal();
        bimodal[i] = (i % 2 == 0) ? 0.1 + 0.02 * rng.normal() : 0.9 + 0.02 * rng.normal();
    }
    const double crit = dip_critical_value(n, 0.05);
    CHECK(crit > 0.0);
    CHECK(crit < 0.25);
    CHECK(dip_statistic(unimodal) < crit);
    CHECK(dip_statistic(bimodal) > crit);
}

TEST_CASE("critical value decreases with sample size and is cached deterministically") {
    const double c100 = dip_critical_value(100, 0.05);
    const double c1000 = dip_critical_value(1000, 0.05);
    const double c4032 = dip_critical_value(4032, 0.05);
    CHECK(c100 > c1000);
    CHECK(c1000 > c4032);
    CHECK(dip_critical_value(1000, 0.05) == c1000);
    // Beyond the bootstrap cap the 1/sqrt(n) extrapolation applies.
    const double c_big = dip_critical_value(4 * 8192, 0.05);
    CHECK(c_big == doctest::Approx(dip_critical_value(8192, 0.05) / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(dip_critical_value(2, 0.05), std::invalid_argument);
}
