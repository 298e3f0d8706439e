#pragma once

#include "stratkit/common.hpp"
#include "stratkit/dual.hpp"

#include <functional>
#include <utility>

namespace stratkit {

// Scalar function on an open subset of R^n. `eval_dual`, when present, gives
// forward-mode gradients; opaque callables fall back to central differences.
struct ScalarField {
    std::function<double(const Vec&)> eval;
    std::function<bool(const Vec&)> domain;       // empty = everywhere
    std::function<Dual(const DualVec&)> eval_dual;  // optional

    double operator()(const Vec& p) const { return eval(p); }

    bool in_domain(const Vec& p) const { return !domain || domain(p); }

    void check_domain(const Vec& p) const {
        if (!in_domain(p)) throw DomainError("ScalarField: point outside domain");
    }

    // Gradient: dual-number forward mode when available, otherwise central
    // differences with step 1e-6 * (1 + |p|).
    Vec gradient(const Vec& p) const;
};

// Vector field p -> v(p) with a Jacobian contract. A missing `jac` means
// central finite differences of `eval`.
struct VectorField {
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jac;      // optional analytic Jacobian
    std::function<bool(const Vec&)> domain;  // empty = everywhere

    Vec operator()(const Vec& p) const { return eval(p); }

    bool in_domain(const Vec& p) const { return !domain || domain(p); }

    void check_domain(const Vec& p) const {
        if (!in_domain(p)) throw DomainError("VectorField: point outside domain");
    }

    Mat jacobian(const Vec& p) const;

    // Central-difference Jacobian, the cross-validation reference for `jac`.
    Mat fd_jacobian(const Vec& p, double step_scale = 1e-5) const;
};

ScalarField constant_field(double c);

// |p|^2 with a dual-mode evaluator.
ScalarField squared_norm_field();

// p[i] with a dual-mode evaluator.
ScalarField coordinate_field(int i);

// Linear field p -> A p with exact Jacobian.
VectorField linear_field(const Mat& A);

// The radial Euler field p -> p.
VectorField euler_field(int n);

VectorField zero_field(int n);

// Pointwise scalar * vector field. `factor` must be smooth where used.
VectorField scale_field(std::function<double(const Vec&)> factor, VectorField base);

}  // namespace stratkit
