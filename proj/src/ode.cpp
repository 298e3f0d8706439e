#include "stratkit/ode.hpp"

#include <algorithm>
#include <cmath>

namespace stratkit {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights for the embedded error estimate.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct StepResult {
    Vec y5;       // 5th-order solution
    double err;   // scaled error norm
};

template <typename F>
StepResult dp_step(const F& f, const Vec& y, const Vec& k1, double h, double rel, double abs) {
    const Vec k2 = f(y + h * (a21 * k1));
    const Vec k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(y5);
    Vec y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
        const double scale = abs + rel * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
    }
    return {std::move(y5), err};
}

template <typename F, typename Obs>
Vec integrate(const F& f, const std::function<bool(const Vec&)>& domain, Vec y, double t_end,
              const FlowOptions& opts, Obs&& observer) {
    if (t_end == 0.0) {
        observer(0.0, y);
        return y;
    }
    const double dir = t_end > 0.0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = dir * std::min(std::abs(t_end), 0.1);
    observer(0.0, y);
    for (int step = 0; step < opts.max_steps; ++step) {
        if (dir * (t + h) > dir * t_end) h = t_end - t;
        const Vec k1 = f(y);
        StepResult r = dp_step(f, y, k1, h, opts.rel_tol, opts.abs_tol);
        if (r.err <= 1.0) {
            // Accepted. Check the domain at the new state; bracket the exit
            // by bisecting the step if we left it.
            if (domain && !domain(r.y5)) {
                double lo = 0.0, hi = h;
                Vec y_lo = y;
                for (int it = 0; it < 60 && std::abs(hi - lo) > 1e-12 * std::abs(h); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    StepResult rm = dp_step(f, y, k1, mid, opts.rel_tol, opts.abs_tol);
                    if (domain(rm.y5)) {
                        lo = mid;
                        y_lo = std::move(rm.y5);
                    } else {
                        hi = mid;
                    }
                }
                throw EscapeError("flow: trajectory left the domain", t + lo);
            }
            t += h;
            y = std::move(r.y5);
            observer(t, y);
            if (t == t_end || std::abs(t_end - t) <= 1e-14 * std::abs(t_end)) return y;
        }
        const double factor =
            r.err > 0.0 ? 0.9 * std::pow(1.0 / r.err, 0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        const double h_min = 1e-14 * (1.0 + std::abs(t));
        if (std::abs(h) < h_min) h = dir * h_min;
    }
    throw NonConvergenceError("flow: max_steps exceeded");
}

}  // namespace

Vec flow(const VectorField& field, const Vec& p0, double t, const FlowOptions& opts) {
    opts.validate();
    field.check_domain(p0);
    if (t == 0.0) return p0;
    auto f = [&field](const Vec& y) { return field.eval(y); };
    return integrate(f, field.domain, p0, t, opts, [](double, const Vec&) {});
}

Vec flow_observed(const VectorField& field, const Vec& p0, double t, const FlowOptions& opts,
                  const std::function<void(double, const Vec&)>& observer) {
    opts.validate();
    field.check_domain(p0);
    auto f = [&field](const Vec& y) { return field.eval(y); };
    return integrate(f, field.domain, p0, t, opts, observer);
}

double flow_scalar(const std::function<double(double, double)>& rhs, double t0, double y0,
                   double t1, const FlowOptions& opts) {
    opts.validate();
    if (t1 == t0) return y0;
    // Reuse the vector integrator with state (y, s) where s tracks time,
    // making the system autonomous.
    Vec y(2);
    y << y0, t0;
    auto f = [&rhs](const Vec& v) {
        Vec d(2);
        d << rhs(v[1], v[0]), 1.0;
        return d;
    };
    Vec out = integrate(f, nullptr, y, t1 - t0, opts, [](double, const Vec&) {});
    return out[0];
}

}  // namespace stratkit
