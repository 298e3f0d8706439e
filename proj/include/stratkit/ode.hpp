#pragma once

#include "stratkit/common.hpp"
#include "stratkit/fields.hpp"

#include <cmath>
#include <functional>

namespace stratkit {

struct FlowOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    int max_steps = 200000;
    double tau_min = -13.815510557964274;  // log(1e-6), floor for t -> 0 limits

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw DomainError("FlowOptions: tolerances must be positive");
        if (max_steps < 1) throw DomainError("FlowOptions: max_steps >= 1");
        if (!(tau_min < 0.0)) throw DomainError("FlowOptions: tau_min must be negative");
    }
};

// Solution of p' = field(p), p(0) = p0, evaluated at time t. Adaptive
// Dormand-Prince 4(5) with deterministic step acceptance. Throws
// NonConvergenceError past max_steps and EscapeError when the trajectory
// leaves the field's domain (exit time bracketed to 1e-12 relative).
Vec flow(const VectorField& field, const Vec& p0, double t, const FlowOptions& opts = {});

// Same, invoking `observer(time, state)` at every accepted step (including
// the initial state). Used by convergence checks and trajectory dumps.
Vec flow_observed(const VectorField& field, const Vec& p0, double t, const FlowOptions& opts,
                  const std::function<void(double, const Vec&)>& observer);

// Scalar non-autonomous ODE y' = rhs(t, y) from (t0, y0) to t1.
double flow_scalar(const std::function<double(double, double)>& rhs, double t0, double y0,
                   double t1, const FlowOptions& opts = {});

}  // namespace stratkit
