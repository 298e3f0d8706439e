#pragma once

#include "stratkit/bump.hpp"
#include "stratkit/ode.hpp"
#include "stratkit/smoothcore.hpp"
#include "stratkit/strata.hpp"

#include <vector>

namespace stratkit {

// One stratum's tubular structure: the convenient Euler-like field, its
// induced fiberwise multiplication m^t, projection m^0, and distance rho.
// All closures are pure and share immutable state.
struct TubularData {
    int stratum_index = -1;
    VectorField field;
    std::function<bool(const Vec&)> membership;
    std::function<Vec(double, const Vec&)> mult;
    std::function<Vec(const Vec&)> project;
    std::function<double(const Vec&)> rho;  // +inf encodes "outside"
    std::vector<BumpSpec> bump_history;

    bool in_tube(const Vec& v) const { return membership(v); }
};

struct EulerResidualReport {
    std::vector<double> eps;
    std::vector<double> values;  // r(eps) = (f - L_X f)(q + eps u)
    std::vector<double> ratios;  // r(eps) / eps^2
    bool accepted = false;       // bounded ratio ladder (growth <= 2x)
};

// Order-2 criterion at q along unit normal u: computes r(eps) for each
// ladder entry and accepts when |ratio| does not grow by more than 2x step
// to step. `f` must vanish on the stratum.
EulerResidualReport euler_like_residual(const VectorField& field, const Stratum& stratum,
                                        const ScalarField& f, const Vec& q, const Vec& u,
                                        const std::vector<double>& eps_ladder = {1e-2, 1e-3,
                                                                                 1e-4});

// The fiber-scaling field of a chart: D(theta^{-1}) . (0, y) at theta(p).
VectorField euler_from_chart(const ConicalChart& chart);

// Rebuilds the chart so its leading coordinates are the components of f,
// following the submersion-adapted construction: permute tangential
// coordinates so an l x l block of Df is invertible, then compose
// Psi = (f, remaining tangential, fiber) with the old chart. The domain is
// restricted to a ball on which the Jacobian stays invertible (checked on a
// 3^n stencil).
ConicalChart adapt_chart_to_submersion(const ConicalChart& chart,
                                       const std::function<Vec(const Vec&)>& f, int l,
                                       const Vec& p);

// Convenient tubular neighbourhood: multiplies `field` by the extended
// cutoff h_spec(rho_raw / delta), realizes m^t by log-time flow, m^0 by the
// two-checkpoint limit through the stratum chart, and rho by the Euclidean
// norm of the extracted normal coordinates.
TubularData make_convenient(const VectorField& field, const Stratum& stratum,
                            const ScalarField& rho_raw, double delta,
                            BumpSpec spec = {1.0 / 3.0, 2.0 / 3.0},
                            const FlowOptions& opts = {});

// Identity tubular of an open stratum (fiber rank zero).
TubularData trivial_tubular(const Stratum& stratum, int index);

// Shrinking by h_spec on the current distance: same trajectories, new time
// parametrization exp_{h,s}, distance reparametrized by the backward
// asymptote of the same ODE.
TubularData shrink(const TubularData& tub, BumpSpec spec, const FlowOptions& opts = {});

// Solution of  d/dt y = h_spec(s y^2) y,  y(0) = 1.
double exp_h_s(BumpSpec spec, double s, double t, const FlowOptions& opts = {});

// lim_{t -> -inf} exp_{h,s}(t) e^{-t}; +inf when the backward plateau is not
// reached within the step budget (point effectively at the shrink boundary).
double exp_h_backward_asymptote(BumpSpec spec, double s, const FlowOptions& opts = {});

struct LevelsetPairResult {
    double rho_tilde_diff = 0.0;
    double rho_diff = 0.0;
    bool skipped = false;
};

struct ShrinkLevelsetReport {
    std::vector<LevelsetPairResult> pairs;
    int checked = 0;
    int failures = 0;
    double worst = 0.0;
    bool pass() const { return failures == 0 && checked > 0; }
};

// Same-fiber pairs with equal shrunk distance must have equal original
// distance (level sets of the shrunk rho refine the original ones).
ShrinkLevelsetReport shrink_levelset_check(const TubularData& tub, const TubularData& shrunk,
                                           int samples, std::uint64_t seed = 42);

}  // namespace stratkit
