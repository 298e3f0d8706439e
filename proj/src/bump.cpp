#include "stratkit/bump.hpp"

#include <cmath>

namespace stratkit {

namespace {

double g(double x) {
    return x > 0.0 ? std::exp(-1.0 / x) : 0.0;
}

// g'(x) = exp(-1/x)/x^2 on x > 0, flat at 0.
double g_prime(double x) {
    return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0;
}

}  // namespace

double bump(const BumpSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw DomainError("bump: negative argument");
    if (t <= spec.a) return 1.0;
    if (t >= spec.b) return 0.0;
    const double w = spec.b - spec.a;
    const double gn = g((spec.b - t) / w);
    const double gd = g((t - spec.a) / w);
    return gn / (gn + gd);
}

double bump_derivative(const BumpSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw DomainError("bump_derivative: negative argument");
    if (t <= spec.a || t >= spec.b) return 0.0;
    const double w = spec.b - spec.a;
    const double x = (spec.b - t) / w;
    const double y = (t - spec.a) / w;
    const double gn = g(x), gd = g(y);
    const double dgn = -g_prime(x) / w;
    const double dgd = g_prime(y) / w;
    const double s = gn + gd;
    return (dgn * s - gn * (dgn + dgd)) / (s * s);
}

double smooth_step(double t, double lo, double hi) {
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    return 1.0 - bump({lo, hi}, t);
}

}  // namespace stratkit
