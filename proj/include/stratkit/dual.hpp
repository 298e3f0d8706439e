#pragma once

#include "stratkit/common.hpp"

#include <cmath>
#include <vector>

namespace stratkit {

// First-order multivariate dual number: value plus gradient w.r.t. the
// seeded input coordinates. Vector-mode forward differentiation; ambient
// dimensions here are tiny so the per-entry gradient vectors are cheap.
struct Dual {
    double v = 0.0;
    Vec g;

    Dual() = default;
    Dual(double value, Vec grad) : v(value), g(std::move(grad)) {}
    static Dual constant(double value, int n) { return {value, Vec::Zero(n)}; }
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.g + b.g}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.g - b.g}; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.g}; }
inline Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.g + b.v * a.g}; }
inline Dual operator*(double c, const Dual& a) { return {c * a.v, c * a.g}; }
inline Dual operator*(const Dual& a, double c) { return c * a; }
inline Dual operator+(const Dual& a, double c) { return {a.v + c, a.g}; }
inline Dual operator+(double c, const Dual& a) { return a + c; }
inline Dual operator-(const Dual& a, double c) { return {a.v - c, a.g}; }
inline Dual operator/(const Dual& a, const Dual& b) {
    return {a.v / b.v, (a.g * b.v - a.v * b.g) / (b.v * b.v)};
}
inline Dual operator/(const Dual& a, double c) { return {a.v / c, a.g / c}; }

inline Dual exp(const Dual& a) {
    const double e = std::exp(a.v);
    return {e, e * a.g};
}
inline Dual log(const Dual& a) { return {std::log(a.v), a.g / a.v}; }
inline Dual sqrt(const Dual& a) {
    const double s = std::sqrt(a.v);
    return {s, a.g / (2.0 * s)};
}
inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.g}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.g}; }

using DualVec = std::vector<Dual>;

// Seed p as dual inputs: x_i = (p_i, e_i).
inline DualVec dual_inputs(const Vec& p) {
    DualVec out(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) {
        Vec e = Vec::Zero(p.size());
        e[i] = 1.0;
        out[static_cast<std::size_t>(i)] = Dual(p[i], std::move(e));
    }
    return out;
}

inline Dual dual_squared_norm(const DualVec& x) {
    Dual acc = Dual::constant(0.0, static_cast<int>(x.empty() ? 0 : x[0].g.size()));
    for (const Dual& xi : x) acc = acc + xi * xi;
    return acc;
}

}  // namespace stratkit
