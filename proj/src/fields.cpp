#include "stratkit/fields.hpp"

namespace stratkit {

Vec ScalarField::gradient(const Vec& p) const {
    check_domain(p);
    if (eval_dual) {
        return eval_dual(dual_inputs(p)).g;
    }
    const double h = 1e-6 * (1.0 + p.norm());
    Vec grad(p.size());
    Vec q = p;
    for (int i = 0; i < p.size(); ++i) {
        q[i] = p[i] + h;
        const double fp = eval(q);
        q[i] = p[i] - h;
        const double fm = eval(q);
        q[i] = p[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

Mat VectorField::jacobian(const Vec& p) const {
    check_domain(p);
    if (jac) return jac(p);
    return fd_jacobian(p);
}

Mat VectorField::fd_jacobian(const Vec& p, double step_scale) const {
    const double h = step_scale * (1.0 + p.norm());
    const int n = static_cast<int>(p.size());
    Mat J(n, n);
    Vec q = p;
    for (int j = 0; j < n; ++j) {
        q[j] = p[j] + h;
        const Vec fp = eval(q);
        q[j] = p[j] - h;
        const Vec fm = eval(q);
        q[j] = p[j];
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

ScalarField constant_field(double c) {
    ScalarField f;
    f.eval = [c](const Vec&) { return c; };
    f.eval_dual = [c](const DualVec& x) {
        return Dual::constant(c, x.empty() ? 0 : static_cast<int>(x[0].g.size()));
    };
    return f;
}

ScalarField squared_norm_field() {
    ScalarField f;
    f.eval = [](const Vec& p) { return p.squaredNorm(); };
    f.eval_dual = [](const DualVec& x) { return dual_squared_norm(x); };
    return f;
}

ScalarField coordinate_field(int i) {
    ScalarField f;
    f.eval = [i](const Vec& p) { return p[i]; };
    f.eval_dual = [i](const DualVec& x) { return x[static_cast<std::size_t>(i)]; };
    return f;
}

VectorField linear_field(const Mat& A) {
    VectorField f;
    f.eval = [A](const Vec& p) { return A * p; };
    f.jac = [A](const Vec&) { return A; };
    return f;
}

VectorField euler_field(int n) {
    return linear_field(Mat::Identity(n, n));
}

VectorField zero_field(int n) {
    VectorField f;
    f.eval = [n](const Vec&) { return Vec::Zero(n); };
    f.jac = [n](const Vec&) { return Mat::Zero(n, n); };
    return f;
}

VectorField scale_field(std::function<double(const Vec&)> factor, VectorField base) {
    VectorField f;
    f.domain = base.domain;
    f.eval = [factor, base](const Vec& p) -> Vec {
        const double c = factor(p);
        if (c == 0.0) return Vec::Zero(p.size());
        return c * base.eval(p);
    };
    return f;
}

}  // namespace stratkit
