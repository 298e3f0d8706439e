#pragma once

#include "stratkit/fields.hpp"
#include "stratkit/group.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stratkit {

// A chart flattening a stratum: theta maps U_p diffeomorphically into
// R^k x R^{n-k} with the stratum landing in R^k x {0} and each higher
// stratum in R^k x C_Y for a cone C_Y in the fiber factor.
struct ConicalChart {
    Vec center;
    int split_k = 0;  // tangential dimension k
    std::function<Vec(const Vec&)> theta;
    std::function<Vec(const Vec&)> theta_inv;
    std::function<bool(const Vec&)> domain;  // empty = everywhere
    // Cone membership per higher stratum id, a predicate on the fiber factor.
    std::map<std::string, std::function<bool(const Vec&)>> cone_membership;

    bool in_domain(const Vec& p) const { return !domain || domain(p); }
    Vec fiber_part(const Vec& chart_point) const {
        return chart_point.tail(chart_point.size() - split_k);
    }
};

// One locally closed piece of the stratified set. Membership is encoded by a
// residual map vanishing on the closure plus an exclusion predicate carving
// out lower strata. `chart_project` is a nearest-point map valid close to
// the stratum; `fiber_coords(q, w)` reads normal coordinates at q, smooth in
// q, and is the reference frame for distance extraction.
struct Stratum {
    std::string id;
    int dim = 0;
    std::function<Vec(const Vec&)> residual;
    std::function<bool(const Vec&)> exclusion;
    std::function<Vec(std::mt19937_64&)> sampler;
    std::vector<ConicalChart> charts;
    std::function<Vec(const Vec&)> chart_project;
    std::function<Vec(const Vec&, const Vec&)> fiber_coords;

    double residual_norm(const Vec& p) const {
        const Vec r = residual(p);
        return r.size() == 0 ? 0.0 : r.norm();
    }
    bool on_stratum(const Vec& p, double tol = 1e-9) const {
        return residual_norm(p) <= tol && (!exclusion || exclusion(p));
    }
};

// Per-stratum data consumed by the tubular builder: the patched Euler-like
// raw field, the raw fiber distance used for the convenient cutoff, and the
// cutoff scale.
struct TubularIngredient {
    VectorField raw_field;
    ScalarField rho_raw;
    double delta = 3.0;
};

// Scheduled neighbourhood for one stratum, desk-scale stand-in for the W_X
// sets: the cutoff scale plus a free-text description of the guard geometry.
struct NeighborhoodSpec {
    double delta = 3.0;
    std::string description;
};

struct StratifiedScenario {
    std::string name;
    int ambient_dim = 0;
    std::vector<Stratum> strata;
    std::vector<std::pair<int, int>> order;  // (lower, higher) index pairs
    std::optional<GroupAction> action;
    std::vector<NeighborhoodSpec> schedule;
    std::vector<TubularIngredient> ingredients;
    std::string source_note;

    bool less(int a, int b) const;
    std::vector<int> comparable_pairs() const { return {}; }
    std::vector<int> dims_present() const;
    const Stratum& stratum(const std::string& id) const;
    int stratum_index(const std::string& id) const;

    // Smallest residual norm over strata whose exclusion accepts the point;
    // the stand-in for distance to the stratified set.
    double set_residual(const Vec& p) const;
};

struct OrderPairResult {
    std::string lower, higher;
    bool pass = false;
    double worst_residual = 0.0;
    std::string detail;
};

struct OrderReport {
    bool transitive = false;
    bool antisymmetric = false;
    bool dims_monotone = false;
    std::vector<OrderPairResult> frontier;
    bool all_pass() const;
};

// Transitivity/antisymmetry of the declared order, dim monotonicity, and the
// frontier spot-check: points scaled from higher-stratum samples toward the
// lower stratum along its chart cone must drive the lower residual to zero.
OrderReport order_check(const StratifiedScenario& s, int samples = 20,
                        std::uint64_t seed = 42);

struct ConicalityReport {
    int tested = 0;
    int skipped = 0;  // samples that left the chart domain
    int failures = 0;
    double worst_residual = 0.0;
    bool pass() const { return failures == 0 && tested > 0; }
};

// Samples higher-stratum points in the chart domain and verifies that
// scaling the fiber coordinates by t in {0.25, 0.5} keeps them on their
// stratum (residual <= 1e-8 after theta_inv).
ConicalityReport chart_conicality_check(const ConicalChart& chart,
                                        const StratifiedScenario& s, int stratum_index,
                                        int samples = 50, std::uint64_t seed = 42);

}  // namespace stratkit
