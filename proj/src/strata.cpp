#include "stratkit/strata.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stratkit {

bool StratifiedScenario::less(int a, int b) const {
    return std::find(order.begin(), order.end(), std::make_pair(a, b)) != order.end();
}

std::vector<int> StratifiedScenario::dims_present() const {
    std::set<int> dims;
    for (const auto& s : strata) dims.insert(s.dim);
    return {dims.begin(), dims.end()};
}

const Stratum& StratifiedScenario::stratum(const std::string& id) const {
    return strata[static_cast<std::size_t>(stratum_index(id))];
}

int StratifiedScenario::stratum_index(const std::string& id) const {
    for (std::size_t i = 0; i < strata.size(); ++i)
        if (strata[i].id == id) return static_cast<int>(i);
    throw DomainError("unknown stratum id: " + id);
}

double StratifiedScenario::set_residual(const Vec& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : strata) best = std::min(best, s.residual_norm(p));
    return best;
}

bool OrderReport::all_pass() const {
    if (!transitive || !antisymmetric || !dims_monotone) return false;
    for (const auto& f : frontier)
        if (!f.pass) return false;
    return true;
}

OrderReport order_check(const StratifiedScenario& s, int samples, std::uint64_t seed) {
    OrderReport rep;
    const int n = static_cast<int>(s.strata.size());
    auto has = [&s](int a, int b) { return s.less(a, b); };

    rep.antisymmetric = true;
    rep.transitive = true;
    rep.dims_monotone = true;
    for (const auto& [a, b] : s.order) {
        if (has(b, a) || a == b) rep.antisymmetric = false;
        if (!(s.strata[static_cast<std::size_t>(a)].dim <
              s.strata[static_cast<std::size_t>(b)].dim))
            rep.dims_monotone = false;
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (has(a, b) && has(b, c) && !has(a, c)) rep.transitive = false;

    // Frontier spot-check on every declared pair X < Y: move Y-samples
    // toward X along the cone of an X-chart; the X-residual must shrink
    // toward zero with the scale.
    for (const auto& [a, b] : s.order) {
        const Stratum& X = s.strata[static_cast<std::size_t>(a)];
        const Stratum& Y = s.strata[static_cast<std::size_t>(b)];
        OrderPairResult pr;
        pr.lower = X.id;
        pr.higher = Y.id;
        if (X.charts.empty()) {
            pr.pass = false;
            pr.detail = "no chart on the lower stratum";
            rep.frontier.push_back(pr);
            continue;
        }
        const ConicalChart& chart = X.charts.front();
        auto rng = seeded_rng(seed, "order_check:" + X.id + "<" + Y.id);
        double worst = 0.0;
        int used = 0;
        for (int k = 0; k < samples; ++k) {
            const Vec y = Y.sampler(rng);
            if (!chart.in_domain(y)) continue;
            Vec cy = chart.theta(y);
            const double t = 1e-3;
            cy.tail(cy.size() - chart.split_k) *= t;
            const Vec back = chart.theta_inv(cy);
            // The scaled point sits on Y by conicality; its X-residual is
            // O(t) times the original scale.
            const double r0 = X.residual_norm(y);
            const double rt = X.residual_norm(back);
            worst = std::max(worst, rt / (t * (1.0 + r0)));
            ++used;
        }
        pr.worst_residual = worst;
        // Residual ratio bounded means the scaled points approach X linearly.
        pr.pass = used > 0 && worst <= 10.0;
        if (used == 0) {
            pr.pass = false;
            pr.detail = "no usable samples";
        }
        rep.frontier.push_back(pr);
    }
    return rep;
}

ConicalityReport chart_conicality_check(const ConicalChart& chart,
                                        const StratifiedScenario& s, int stratum_index,
                                        int samples, std::uint64_t seed) {
    ConicalityReport rep;
    const Stratum& X = s.strata[static_cast<std::size_t>(stratum_index)];
    constexpr double kTol = 1e-8;

    // Stratum samples must land in R^k x {0}.
    auto rng = seeded_rng(seed, "conicality:" + s.name + ":" + X.id);
    for (int k = 0; k < samples; ++k) {
        const Vec q = X.sampler(rng);
        if (!chart.in_domain(q)) {
            ++rep.skipped;
            continue;
        }
        const Vec cq = chart.theta(q);
        const double fib = chart.fiber_part(cq).norm();
        rep.worst_residual = std::max(rep.worst_residual, fib);
        ++rep.tested;
        if (fib > 1e-9) ++rep.failures;
    }

    // Higher-stratum samples: scaling the fiber coordinates keeps them on
    // their stratum.
    for (const auto& [a, b] : s.order) {
        if (a != stratum_index) continue;
        const Stratum& Y = s.strata[static_cast<std::size_t>(b)];
        auto rng_y = seeded_rng(seed, "conicality:" + s.name + ":" + X.id + ":" + Y.id);
        for (int k = 0; k < samples; ++k) {
            const Vec y = Y.sampler(rng_y);
            if (!chart.in_domain(y)) {
                ++rep.skipped;
                continue;
            }
            const Vec cy = chart.theta(y);
            auto it = chart.cone_membership.find(Y.id);
            if (it != chart.cone_membership.end() && !it->second(chart.fiber_part(cy))) {
                ++rep.tested;
                ++rep.failures;
                continue;
            }
            for (double t : {0.25, 0.5}) {
                Vec scaled = cy;
                scaled.tail(scaled.size() - chart.split_k) *= t;
                const Vec back = chart.theta_inv(scaled);
                const double res = Y.residual_norm(back);
                rep.worst_residual = std::max(rep.worst_residual, res);
                ++rep.tested;
                if (res > kTol) ++rep.failures;
            }
        }
    }
    return rep;
}

}  // namespace stratkit
