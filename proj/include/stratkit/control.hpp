#pragma once

#include "stratkit/scenarios.hpp"
#include "stratkit/tubular.hpp"

#include <memory>
#include <string>
#include <vector>

namespace stratkit {

// Residual summary for one verified property on one pair of strata.
struct PropertyResult {
    double max_residual = 0.0;
    int samples = 0;
    std::string status = "inconclusive";  // verified | failed | inconclusive

    void record(double r) {
        max_residual = std::max(max_residual, r);
        ++samples;
    }
    void finish(double tol, int min_samples) {
        if (samples < min_samples)
            status = "inconclusive";
        else
            status = max_residual <= tol ? "verified" : "failed";
    }
};

struct PairReport {
    std::string lower, higher;
    PropertyResult pc1, pc2;        // m_X^0 and rho_X unchanged by m_Y^t
    PropertyResult c1, c1_t0, c2;   // commutator, t = 0 case, rho_Y invariance
    PropertyResult tangential;      // Y-residual drift under m_X^s
};

struct ControlFlag {
    std::string status = "unset";  // unset | verified | failed | inconclusive
    double worst = 0.0;
};

// Full per-stratum collection plus verification flags.
struct ControlData {
    std::shared_ptr<const StratifiedScenario> scenario;
    std::vector<TubularData> tubulars;
    ControlFlag adjusted, tangential, precommutative, commutative, equivariant;

    const TubularData& tub(const std::string& id) const {
        return tubulars[static_cast<std::size_t>(scenario->stratum_index(id))];
    }
};

struct VerifyOptions {
    int samples = 200;
    double tol = 1e-5;
    std::uint64_t seed = 42;
    int min_samples = 10;  // below this a property is inconclusive
    FlowOptions flow;
};

// Ascending-dimension construction: per stratum the scenario's patched
// Euler-like ingredient (group-averaged when not already invariant), the
// convenient cutoff at the scheduled scale, then a shrink of every
// lower-dimensional tubular by h_{1/3,2/3}. Open strata get the identity
// tubular. Flags are left unset.
ControlData build_tangential(const StratifiedScenario& s, const FlowOptions& opts = {});

// Conjugation of the higher tubular by the lower one:
//   m~_Y^t = m_X^{f(rho_X)} o m_Y^t o m_X^{f(rho_X)^{-1}},
//   rho~_Y = rho_Y o m_X^{f(rho_X)^{-1}},
// with f = sqrt on (0,1/2], 1 on [1,inf), bump-blended between. Refuses
// (PrecommuteError) when the pair fails a pre-commutativity spot check.
ControlData conjugate(const ControlData& cd, const std::string& lower,
                      const std::string& higher, const VerifyOptions& opts = {});

// Descending-dimension loop: conjugate every comparable higher tubular
// against each dimension-d tubular, then shrink the dimension-d tubulars by
// h_{1/4,1/2}.
ControlData build_commutative(const StratifiedScenario& s, const FlowOptions& opts = {});

// Exact reference control data for FLAG3 in nested spherical coordinates
// p = r (cos th, sin th cos al, sin th sin al): m_X0 scales r, m_X1 scales
// th, m_X2 scales al; rho = r^2, th^2, al^2. Domains exclude the antipodal
// loci (th or |al| >= pi - 0.1).
ControlData analytic_flag_oracle();

// Deliberately non-pre-commutative FLAG3 data: rho_X0 = |p|^2 with linear
// fiber scaling m_X1^t(x,y,z) = (x, ty, tz). PC2 fails at (1,1,0).
ControlData naive_flag_control();

std::vector<PairReport> verify_precommute(ControlData& cd, const VerifyOptions& opts = {});
std::vector<PairReport> verify_commute(ControlData& cd, const VerifyOptions& opts = {});
std::vector<PairReport> verify_tangential(ControlData& cd, const VerifyOptions& opts = {});

struct AdjustedReport {
    PropertyResult ad1_overlap;   // overlaps only between comparable pairs
    PropertyResult ad2_incident;  // T_X meets Y only for X < Y
    PropertyResult ad3_disjoint;  // equal-dimension tubulars disjoint
    std::string ad4 = "verified (by construction)";
};

AdjustedReport verify_adjusted(ControlData& cd, const VerifyOptions& opts = {});

struct EquivariantReport {
    PropertyResult mult_equivariance;
    PropertyResult rho_invariance;
    bool applicable = false;
};

EquivariantReport verify_equivariant(ControlData& cd, const VerifyOptions& opts = {});

// Draws up to `count` points in T_X and T_Y; returns fewer when the overlap
// rejection budget runs out.
std::vector<Vec> overlap_samples(const ControlData& cd, int lower, int higher, int count,
                                 std::uint64_t seed);

}  // namespace stratkit
