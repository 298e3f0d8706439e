#pragma once

#include "stratkit/common.hpp"

namespace stratkit {

// Parameters of the monotone cutoff h_{a,b}: 1 on [0,a], 0 on [b,inf).
struct BumpSpec {
    double a = 1.0 / 3.0;
    double b = 2.0 / 3.0;

    void validate() const {
        if (!(0.0 < a && a < b)) throw DomainError("BumpSpec requires 0 < a < b");
    }
};

// Symmetric exponential blend: g(x) = exp(-1/x) on x > 0,
// h(t) = g((b-t)/(b-a)) / (g((b-t)/(b-a)) + g((t-a)/(b-a))).
// Exactly 1 for t <= a, exactly 0 for t >= b, C^inf, h((a+b)/2) = 1/2.
double bump(const BumpSpec& spec, double t);

// d/dt of the bump, closed form (used by analytic field jacobians).
double bump_derivative(const BumpSpec& spec, double t);

// Smooth monotone step on [0,1]: 0 on [0,lo], 1 on [hi,1].
double smooth_step(double t, double lo = 0.1, double hi = 0.9);

}  // namespace stratkit
