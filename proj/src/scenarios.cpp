#include "stratkit/scenarios.hpp"

#include "stratkit/bump.hpp"

#include <cmath>

namespace stratkit {

namespace {

double unif(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

double rand_sign(std::mt19937_64& rng) {
    return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? -1.0 : 1.0;
}

Vec unit_dir(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = gauss(rng);
    const double nn = u.norm();
    return nn > 0 ? Vec(u / nn) : Vec(Vec::Unit(n, 0));
}

ConicalChart translated_chart(const Vec& center, int split_k,
                              std::function<bool(const Vec&)> domain) {
    ConicalChart c;
    c.center = center;
    c.split_k = split_k;
    c.theta = [center](const Vec& p) { return Vec(p - center); };
    c.theta_inv = [center](const Vec& y) { return Vec(y + center); };
    c.domain = std::move(domain);
    return c;
}

// ---------------------------------------------------------------------------
// FLAG3: {0} < x-axis\0 < xy-plane\axis in R^3.
// ---------------------------------------------------------------------------

// Angular offset of (p2, p3) from the nearest half-plane {p3 = 0}, measured
// on the branch selected by sign(p2). Only meaningful away from p2 == 0.
double plane_angle(const Vec& p) {
    const double s = p[1] >= 0.0 ? 1.0 : -1.0;
    return std::atan2(s * p[2], s * p[1]);
}

StratifiedScenario make_flag3() {
    StratifiedScenario s;
    s.name = "FLAG3";
    s.ambient_dim = 3;
    s.source_note = "linear flag in R^3";

    const double kAxisGuardA = 5.0, kAxisGuardB = 9.0;           // (r/x)^2 cone guard
    const double kPlaneGuardA = std::pow(M_PI / 6.0, 2);         // alpha^2 guard
    const double kPlaneGuardB = std::pow(M_PI / 4.0, 2);

    Stratum x0;
    x0.id = "X0";
    x0.dim = 0;
    x0.residual = [](const Vec& p) { return p; };
    x0.exclusion = [](const Vec&) { return true; };
    x0.sampler = [](std::mt19937_64&) { return vec3(0, 0, 0); };
    x0.chart_project = [](const Vec& p) { return Vec(Vec::Zero(p.size())); };
    x0.fiber_coords = [](const Vec&, const Vec& w) { return w; };
    {
        ConicalChart c = translated_chart(vec3(0, 0, 0), 0, nullptr);
        c.cone_membership["X1"] = [](const Vec& y) {
            const double n = y.norm();
            return n > 0 && std::hypot(y[1], y[2]) <= 1e-9 * n;
        };
        c.cone_membership["X2"] = [](const Vec& y) {
            return std::abs(y[1]) > 0 && std::abs(y[2]) <= 1e-9 * y.norm();
        };
        x0.charts.push_back(std::move(c));
    }

    Stratum x1;
    x1.id = "X1";
    x1.dim = 1;
    x1.residual = [](const Vec& p) { return vec2(p[1], p[2]); };
    x1.exclusion = [](const Vec& p) { return std::abs(p[0]) > 0; };
    x1.sampler = [](std::mt19937_64& rng) {
        return vec3(rand_sign(rng) * unif(rng, 0.3, 2.0), 0, 0);
    };
    x1.chart_project = [](const Vec& p) { return vec3(p[0], 0, 0); };
    x1.fiber_coords = [](const Vec&, const Vec& w) { return vec2(w[1], w[2]); };
    for (double side : {1.0, -1.0}) {
        ConicalChart c = translated_chart(vec3(side, 0, 0), 1,
                                          [side](const Vec& p) { return side * p[0] > 0; });
        c.cone_membership["X2"] = [](const Vec& y) {
            return std::abs(y[0]) > 0 && std::abs(y[1]) <= 1e-9 * y.norm();
        };
        x1.charts.push_back(std::move(c));
    }

    Stratum x2;
    x2.id = "X2";
    x2.dim = 2;
    x2.residual = [](const Vec& p) {
        Vec r(1);
        r << p[2];
        return r;
    };
    x2.exclusion = [](const Vec& p) { return std::abs(p[1]) > 0; };
    x2.sampler = [](std::mt19937_64& rng) {
        return vec3(unif(rng, -2.0, 2.0), rand_sign(rng) * unif(rng, 0.3, 2.0), 0);
    };
    x2.chart_project = [](const Vec& p) { return vec3(p[0], p[1], 0); };
    x2.fiber_coords = [](const Vec&, const Vec& w) {
        Vec f(1);
        f << w[2];
        return f;
    };
    for (double side : {1.0, -1.0}) {
        x2.charts.push_back(translated_chart(
            vec3(0, side, 0), 2, [side](const Vec& p) { return side * p[1] > 0; }));
    }

    s.strata = {x0, x1, x2};
    s.order = {{0, 1}, {0, 2}, {1, 2}};
    s.schedule = {{3.0, "ball around the origin"},
                  {3.0, "cone of slope 3 around the axis"},
                  {3.0, "wedge of half-angle pi/4 around the plane"}};

    // Ingredients. X0: the radial field. X1: sphere-preserving field pushing
    // onto the axis, guarded to a cone. X2: rotation about the axis scaled by
    // the angular offset, guarded in angle.
    TubularIngredient i0;
    i0.raw_field = euler_field(3);
    i0.raw_field.domain = nullptr;
    i0.rho_raw = squared_norm_field();
    i0.delta = 3.0;

    TubularIngredient i1;
    i1.raw_field.domain = [](const Vec& p) { return p.squaredNorm() > 0; };
    i1.raw_field.eval = [=](const Vec& p) -> Vec {
        const double r2 = p[1] * p[1] + p[2] * p[2];
        const double x2v = p[0] * p[0];
        if (x2v == 0.0) return Vec::Zero(3);
        const double g = bump({kAxisGuardA, kAxisGuardB}, r2 / x2v);
        if (g == 0.0) return Vec::Zero(3);
        return g * vec3(-r2 / p[0], p[1], p[2]);
    };
    i1.rho_raw.eval = [](const Vec& p) { return p[1] * p[1] + p[2] * p[2]; };
    i1.delta = 3.0;

    TubularIngredient i2;
    i2.raw_field.domain = [](const Vec& p) {
        return p[1] * p[1] + p[2] * p[2] > 0 || std::abs(p[0]) > 0;
    };
    i2.raw_field.eval = [=](const Vec& p) -> Vec {
        if (p[1] == 0.0 && p[2] == 0.0) return Vec::Zero(3);
        const double a = plane_angle(p);
        const double g = bump({kPlaneGuardA, kPlaneGuardB}, a * a);
        if (g == 0.0) return Vec::Zero(3);
        return g * a * vec3(0, -p[2], p[1]);
    };
    i2.rho_raw.eval = [](const Vec& p) {
        const double r2 = p[1] * p[1] + p[2] * p[2];
        if (r2 == 0.0) return 0.0;
        const double a = plane_angle(p);
        return r2 * a * a;
    };
    i2.delta = 3.0;

    s.ingredients = {i0, i1, i2};
    return s;
}

// ---------------------------------------------------------------------------
// CONE2: {0} < {x^2 + y^2 = z^2}\0 in R^3.
// ---------------------------------------------------------------------------

StratifiedScenario make_cone2() {
    StratifiedScenario s;
    s.name = "CONE2";
    s.ambient_dim = 3;
    s.source_note = "quadratic cone in R^3";

    const double kGuardA = 0.15, kGuardB = 0.35;  // nu^2 guard, nu = latitude offset

    Stratum x0;
    x0.id = "X0";
    x0.dim = 0;
    x0.residual = [](const Vec& p) { return p; };
    x0.exclusion = [](const Vec&) { return true; };
    x0.sampler = [](std::mt19937_64&) { return vec3(0, 0, 0); };
    x0.chart_project = [](const Vec& p) { return Vec(Vec::Zero(p.size())); };
    x0.fiber_coords = [](const Vec&, const Vec& w) { return w; };
    {
        ConicalChart c = translated_chart(vec3(0, 0, 0), 0, nullptr);
        c.cone_membership["X1"] = [](const Vec& y) {
            const double n2 = y.squaredNorm();
            return n2 > 0 &&
                   std::abs(y[0] * y[0] + y[1] * y[1] - y[2] * y[2]) <= 1e-9 * n2;
        };
        x0.charts.push_back(std::move(c));
    }

    Stratum x1;
    x1.id = "X1";
    x1.dim = 2;
    x1.residual = [](const Vec& p) {
        Vec r(1);
        r << p[0] * p[0] + p[1] * p[1] - p[2] * p[2];
        return r;
    };
    x1.exclusion = [](const Vec& p) { return p.squaredNorm() > 0; };
    x1.sampler = [](std::mt19937_64& rng) {
        const double r = unif(rng, 0.3, 2.0);
        const double phi = unif(rng, 0.0, 2.0 * M_PI);
        return vec3(r * std::cos(phi), r * std::sin(phi), rand_sign(rng) * r);
    };
    x1.chart_project = [](const Vec& p) {
        const double rxy = std::hypot(p[0], p[1]);
        const double sg = p[2] >= 0 ? 1.0 : -1.0;
        const double t = 0.5 * (rxy + sg * p[2]);
        if (rxy == 0.0) return vec3(t, 0, sg * t);
        return vec3(t * p[0] / rxy, t * p[1] / rxy, sg * t);
    };
    x1.fiber_coords = [](const Vec& q, const Vec& w) {
        const double rq = std::hypot(q[0], q[1]);
        const Vec nu = vec3(q[0], q[1], -q[2]) / (std::sqrt(2.0) * rq);
        Vec f(1);
        f << nu.dot(w - q);
        return f;
    };
    for (double side : {1.0, -1.0}) {
        ConicalChart c;
        c.center = vec3(0.8, 0, side * 0.8);
        c.split_k = 2;
        c.theta = [side](const Vec& p) {
            return vec3(p[0], p[1], p[2] - side * std::hypot(p[0], p[1]));
        };
        c.theta_inv = [side](const Vec& y) {
            return vec3(y[0], y[1], y[2] + side * std::hypot(y[0], y[1]));
        };
        c.domain = [side](const Vec& p) {
            return side * p[2] > 0 && p[0] * p[0] + p[1] * p[1] > 0;
        };
        x1.charts.push_back(std::move(c));
    }

    s.strata = {x0, x1};
    s.order = {{0, 1}};
    s.schedule = {{3.0, "ball around the origin"},
                  {3.0, "latitude band of half-width 0.6 around the cone"}};

    TubularIngredient i0;
    i0.raw_field = euler_field(3);
    i0.rho_raw = squared_norm_field();
    i0.delta = 3.0;

    TubularIngredient i1;
    i1.raw_field.domain = [](const Vec& p) { return p.squaredNorm() > 0; };
    i1.raw_field.eval = [=](const Vec& p) -> Vec {
        const double R = p.norm();
        const double rxy = std::hypot(p[0], p[1]);
        if (R == 0.0 || rxy == 0.0 || p[2] == 0.0) return Vec::Zero(3);
        const double lam = std::asin(std::clamp(p[2] / R, -1.0, 1.0));
        const double sg = p[2] >= 0 ? 1.0 : -1.0;
        const double nu = lam - sg * M_PI / 4.0;
        const double g = bump({kGuardA, kGuardB}, nu * nu);
        if (g == 0.0) return Vec::Zero(3);
        // d/d(lambda) at fixed longitude and radius.
        const Vec dlam = vec3(-std::sin(lam) * p[0] / rxy * R,
                              -std::sin(lam) * p[1] / rxy * R, std::cos(lam) * R);
        return Vec(g * nu * dlam / R);
    };
    i1.rho_raw.eval = [](const Vec& p) {
        const double R = p.norm();
        if (R == 0.0) return 0.0;
        const double lam = std::asin(std::clamp(p[2] / R, -1.0, 1.0));
        const double sg = p[2] >= 0 ? 1.0 : -1.0;
        const double nu = lam - sg * M_PI / 4.0;
        return R * R * nu * nu;
    };
    i1.delta = 3.0;

    s.ingredients = {i0, i1};
    return s;
}

// ---------------------------------------------------------------------------
// Weighted circle scenarios on C^2 = R^4: MOMZERO, CRIT11, custom.
// ---------------------------------------------------------------------------

double torus_mu(const std::vector<int>& w, double shift, const Vec& p) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const int i = 2 * static_cast<int>(j);
        acc += 0.5 * w[j] * (p[i] * p[i] + p[i + 1] * p[i + 1]);
    }
    return acc - shift;
}

Vec torus_grad_mu(const std::vector<int>& w, const Vec& p) {
    Vec g(p.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const int i = 2 * static_cast<int>(j);
        g[i] = w[j] * p[i];
        g[i + 1] = w[j] * p[i + 1];
    }
    return g;
}

StratifiedScenario make_torus_scenario(const std::string& name,
                                       const std::vector<int>& weights, double shift,
                                       bool crit_membership) {
    if (weights.size() != 2 || weights[0] == 0 || weights[1] == 0)
        throw BuildError(name + ": needs two nonzero circle weights");
    if (shift == 0.0 && weights[0] * weights[1] > 0)
        throw BuildError(name + ": zero level degenerates; weights must have opposite signs");

    StratifiedScenario s;
    s.name = name;
    s.ambient_dim = 4;
    s.action = circle_action(weights, shift);
    s.source_note = crit_membership ? "critical set of |mu|^2, circle action"
                                    : "momentum zero level, circle action";

    auto mu = [weights, shift](const Vec& p) { return torus_mu(weights, shift, p); };
    auto grad = [weights](const Vec& p) { return torus_grad_mu(weights, p); };
    auto newton_project = [mu, grad](const Vec& p) {
        Vec q = p;
        for (int it = 0; it < 4; ++it) {
            const Vec g = grad(q);
            const double g2 = g.squaredNorm();
            if (g2 == 0.0) break;
            q -= (mu(q) / g2) * g;
        }
        return q;
    };

    const bool two_strata = (shift == 0.0);

    Stratum x1;
    x1.id = "X1";
    x1.dim = 3;
    if (crit_membership) {
        x1.residual = [mu, grad](const Vec& p) { return Vec(2.0 * mu(p) * grad(p)); };
    } else {
        x1.residual = [mu](const Vec& p) {
            Vec r(1);
            r << mu(p);
            return r;
        };
    }
    x1.exclusion = [two_strata](const Vec& p) {
        return !two_strata || p.squaredNorm() > 0;
    };
    x1.sampler = [weights, shift](std::mt19937_64& rng) {
        // Solve w1 r1^2 + w2 r2^2 = 2 shift with both radii positive.
        double r1, r2;
        if (shift == 0.0) {
            const double r = unif(rng, 0.3, 1.5);
            const double ratio = std::sqrt(-static_cast<double>(weights[0]) / weights[1]);
            r1 = r;
            r2 = r * ratio;
        } else {
            r1 = unif(rng, 0.3, 1.5);
            const double rest = (2.0 * shift - weights[0] * r1 * r1) / weights[1];
            r2 = rest > 0.04 ? std::sqrt(rest) : 0.2;
            r1 = std::sqrt(std::max(0.04, (2.0 * shift - weights[1] * r2 * r2) / weights[0]));
        }
        const double t1 = unif(rng, 0.0, 2.0 * M_PI), t2 = unif(rng, 0.0, 2.0 * M_PI);
        return vec4(r1 * std::cos(t1), r1 * std::sin(t1), r2 * std::cos(t2),
                    r2 * std::sin(t2));
    };
    x1.chart_project = newton_project;
    x1.fiber_coords = [grad](const Vec& q, const Vec& w) {
        const Vec g = grad(q);
        Vec f(1);
        f << g.dot(w - q) / g.norm();
        return f;
    };
    {
        // Chart at a zero-level point: tangent frame plus mu itself as fiber.
        Vec c0;
        if (two_strata) {
            const double ratio = std::sqrt(-static_cast<double>(weights[0]) / weights[1]);
            c0 = vec4(0.7, 0, 0.7 * ratio, 0);
        } else {
            Vec probe = vec4(0.9, 0, 0.9, 0);
            c0 = newton_project(probe);
        }
        const Vec g0 = grad(c0);
        const Vec nu = g0 / g0.norm();
        Eigen::FullPivLU<Mat> lu(nu.transpose());
        Mat kernel = lu.kernel();  // 4x3
        Eigen::HouseholderQR<Mat> qr(kernel);
        Mat Q = qr.householderQ() * Mat::Identity(4, 3);
        ConicalChart ch;
        ch.center = c0;
        ch.split_k = 3;
        ch.domain = [c0](const Vec& p) { return (p - c0).norm() < 0.35 * c0.norm(); };
        ch.theta = [Q, c0, mu](const Vec& p) {
            Vec y(4);
            y.head(3) = Q.transpose() * (p - c0);
            y[3] = mu(p);
            return y;
        };
        ch.theta_inv = [Q, c0, nu, mu, grad](const Vec& y) {
            const Vec base = c0 + Q * y.head(3);
            // mu is quadratic; along nu from base solve mu(base + s nu) = y3
            // by two Newton steps (quadratic term along nu is negligible at
            // chart scale, and Newton is exact up to round-off here).
            double sv = 0.0;
            for (int it = 0; it < 3; ++it) {
                const Vec p = base + sv * nu;
                const double d = grad(p).dot(nu);
                sv -= (mu(p) - y[3]) / d;
            }
            return Vec(base + sv * nu);
        };
        x1.charts.push_back(std::move(ch));
    }

    TubularIngredient i1;
    i1.raw_field.domain = [two_strata](const Vec& p) {
        return !two_strata || p.squaredNorm() > 0;
    };
    if (two_strata) {
        i1.raw_field.eval = [mu, grad](const Vec& p) -> Vec {
            const double p2 = p.squaredNorm();
            if (p2 == 0.0) return Vec::Zero(4);
            const double m = mu(p);
            const Vec g = grad(p);
            const double g2 = g.squaredNorm();
            const double gp = g.dot(p);
            const double xi = gp * gp / (g2 * p2);
            const double guard = bump({0.4, 0.7}, xi);
            if (guard == 0.0) return Vec::Zero(4);
            const Vec u = g - (gp / p2) * p;
            return Vec(guard * m * u / (g2 * (1.0 - xi)));
        };
        i1.rho_raw.eval = [mu](const Vec& p) {
            const double p2 = p.squaredNorm();
            return p2 == 0.0 ? 0.0 : mu(p) * mu(p) / p2;
        };
    } else {
        i1.raw_field.eval = [mu, grad](const Vec& p) -> Vec {
            const double p2 = p.squaredNorm();
            if (p2 == 0.0) return Vec::Zero(4);
            const double m = mu(p);
            const double guard = bump({1.0, 4.0}, m * m / p2);
            if (guard == 0.0) return Vec::Zero(4);
            const Vec g = grad(p);
            return Vec(guard * m * g / g.squaredNorm());
        };
        i1.rho_raw.eval = [mu](const Vec& p) { return mu(p) * mu(p); };
    }
    i1.delta = 3.0;

    if (two_strata) {
        Stratum x0;
        x0.id = "X0";
        x0.dim = 0;
        x0.residual = [](const Vec& p) { return p; };
        x0.exclusion = [](const Vec&) { return true; };
        x0.sampler = [](std::mt19937_64&) { return vec4(0, 0, 0, 0); };
        x0.chart_project = [](const Vec& p) { return Vec(Vec::Zero(p.size())); };
        x0.fiber_coords = [](const Vec&, const Vec& w) { return w; };
        ConicalChart c = translated_chart(vec4(0, 0, 0, 0), 0, nullptr);
        c.cone_membership["X1"] = [mu](const Vec& y) {
            const double n2 = y.squaredNorm();
            return n2 > 0 && std::abs(mu(y)) <= 1e-9 * n2;
        };
        x0.charts.push_back(std::move(c));

        TubularIngredient i0;
        i0.raw_field = euler_field(4);
        i0.rho_raw = squared_norm_field();
        i0.delta = 3.0;

        s.strata = {x0, x1};
        s.order = {{0, 1}};
        s.schedule = {{3.0, "ball around the origin"},
                      {3.0, "relative-mu collar around the zero level"}};
        s.ingredients = {i0, i1};
    } else {
        s.strata = {x1};
        s.order = {};
        s.schedule = {{3.0, "mu collar around the level set"}};
        s.ingredients = {i1};
    }
    return s;
}

// ---------------------------------------------------------------------------
// D3RED: D3 acting on R^2, orbit-type strata; mu == 0 so Z = V.
// ---------------------------------------------------------------------------

double mirror_offset(const Vec& p, int* ray_out = nullptr) {
    const double theta = std::atan2(p[1], p[0]);
    const double sector = M_PI / 3.0;
    const int k = static_cast<int>(std::lround(theta / sector));
    if (ray_out) *ray_out = ((k % 6) + 6) % 6;
    return theta - k * sector;
}

StratifiedScenario make_d3red() {
    StratifiedScenario s;
    s.name = "D3RED";
    s.ambient_dim = 2;
    s.action = d3_action();
    s.source_note = "D3 on R^2, reduced via the Hilbert map";

    const double kGuardA = 0.09, kGuardB = 0.20;  // nu^2 guard, nu < pi/6

    auto mirror_residual = [](const Vec& p) {
        return 3.0 * p[0] * p[0] * p[1] - p[1] * p[1] * p[1];
    };

    Stratum x0;
    x0.id = "X0";
    x0.dim = 0;
    x0.residual = [](const Vec& p) { return p; };
    x0.exclusion = [](const Vec&) { return true; };
    x0.sampler = [](std::mt19937_64&) { return vec2(0, 0); };
    x0.chart_project = [](const Vec& p) { return Vec(Vec::Zero(p.size())); };
    x0.fiber_coords = [](const Vec&, const Vec& w) { return w; };
    {
        ConicalChart c = translated_chart(vec2(0, 0), 0, nullptr);
        c.cone_membership["X1"] = [mirror_residual](const Vec& y) {
            const double n = y.norm();
            return n > 0 && std::abs(mirror_residual(y)) <= 1e-9 * n * n * n;
        };
        c.cone_membership["X2"] = [mirror_residual](const Vec& y) {
            const double n = y.norm();
            return std::abs(mirror_residual(y)) > 1e-12 * n * n * n;
        };
        x0.charts.push_back(std::move(c));
    }

    Stratum x1;
    x1.id = "X1";
    x1.dim = 1;
    x1.residual = [mirror_residual](const Vec& p) {
        Vec r(1);
        r << mirror_residual(p);
        return r;
    };
    x1.exclusion = [](const Vec& p) { return p.squaredNorm() > 0; };
    x1.sampler = [](std::mt19937_64& rng) {
        const int k = std::uniform_int_distribution<int>(0, 5)(rng);
        const double r = unif(rng, 0.3, 2.0);
        const double th = k * M_PI / 3.0;
        return vec2(r * std::cos(th), r * std::sin(th));
    };
    x1.chart_project = [](const Vec& p) {
        int k = 0;
        mirror_offset(p, &k);
        const double th = k * M_PI / 3.0;
        const Vec m = vec2(std::cos(th), std::sin(th));
        return Vec(m.dot(p) * m);
    };
    x1.fiber_coords = [](const Vec& q, const Vec& w) {
        const double th = std::atan2(q[1], q[0]);
        const Vec n = vec2(-std::sin(th), std::cos(th));
        Vec f(1);
        f << n.dot(w - q);
        return f;
    };
    {
        ConicalChart c;
        c.center = vec2(1, 0);
        c.split_k = 1;
        c.theta = [](const Vec& p) { return vec2(p[0] - 1.0, p[1]); };
        c.theta_inv = [](const Vec& y) { return vec2(y[0] + 1.0, y[1]); };
        c.domain = [](const Vec& p) { return p[0] > 0.05 && std::abs(p[1]) < 0.5 * p[0]; };
        c.cone_membership["X2"] = [](const Vec& y) { return std::abs(y[0]) > 0; };
        x1.charts.push_back(std::move(c));
    }

    Stratum x2;
    x2.id = "X2";
    x2.dim = 2;
    x2.residual = [](const Vec&) { return Vec(0); };
    x2.exclusion = [mirror_residual](const Vec& p) {
        // Relative cutoff: ray samples carry round-off of order eps |p|^3.
        const double n = p.norm();
        return std::abs(mirror_residual(p)) > 1e-12 * n * n * n;
    };
    x2.sampler = [](std::mt19937_64& rng) {
        const int k = std::uniform_int_distribution<int>(0, 5)(rng);
        const double nu = rand_sign(rng) * unif(rng, 0.15, M_PI / 6.0 - 0.1);
        const double th = k * M_PI / 3.0 + nu;
        const double r = unif(rng, 0.3, 2.0);
        return vec2(r * std::cos(th), r * std::sin(th));
    };
    x2.chart_project = [](const Vec& p) { return p; };
    x2.fiber_coords = [](const Vec&, const Vec&) { return Vec(0); };
    {
        const double th = M_PI / 6.0;
        x2.charts.push_back(
            translated_chart(vec2(std::cos(th), std::sin(th)), 2, nullptr));
    }

    s.strata = {x0, x1, x2};
    s.order = {{0, 1}, {0, 2}, {1, 2}};
    s.schedule = {{3.0, "ball around the origin"},
                  {3.0, "angular wedge of half-width pi/12 around each ray"},
                  {3.0, "open stratum, trivial tubular"}};

    TubularIngredient i0;
    i0.raw_field = euler_field(2);
    i0.rho_raw = squared_norm_field();
    i0.delta = 3.0;

    TubularIngredient i1;
    i1.raw_field.domain = [](const Vec& p) { return p.squaredNorm() > 0; };
    i1.raw_field.eval = [=](const Vec& p) -> Vec {
        if (p.squaredNorm() == 0.0) return Vec::Zero(2);
        const double nu = mirror_offset(p);
        const double g = bump({kGuardA, kGuardB}, nu * nu);
        if (g == 0.0) return Vec::Zero(2);
        return Vec(g * nu * vec2(-p[1], p[0]));
    };
    i1.rho_raw.eval = [](const Vec& p) {
        const double r2 = p.squaredNorm();
        if (r2 == 0.0) return 0.0;
        const double nu = mirror_offset(p);
        return r2 * nu * nu;
    };
    i1.delta = 3.0;

    TubularIngredient i2;  // open stratum: trivial tubular marker
    i2.raw_field = zero_field(2);
    i2.rho_raw = constant_field(0.0);
    i2.delta = 3.0;

    s.ingredients = {i0, i1, i2};
    return s;
}

}  // namespace

StratifiedScenario make_scenario(const std::string& name) {
    if (name == "FLAG3") return make_flag3();
    if (name == "CONE2") return make_cone2();
    if (name == "MOMZERO") return make_torus_scenario("MOMZERO", {1, -1}, 0.0, false);
    if (name == "CRIT11") return make_torus_scenario("CRIT11", {1, -1}, 0.0, true);
    if (name == "D3RED") return make_d3red();
    throw DomainError("unknown scenario: " + name);
}

StratifiedScenario make_custom_torus(const std::vector<int>& weights, double shift) {
    return make_torus_scenario("CUSTOM_TORUS", weights, shift, false);
}

std::vector<ScenarioInfo> list_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const char* name : {"FLAG3", "CONE2", "MOMZERO", "D3RED", "CRIT11"}) {
        const StratifiedScenario s = make_scenario(name);
        ScenarioInfo info;
        info.name = s.name;
        info.ambient_dim = s.ambient_dim;
        info.stratum_count = static_cast<int>(s.strata.size());
        if (!s.action) {
            info.action = "none";
        } else if (s.action->kind == GroupAction::Kind::circle) {
            info.action = "circle";
        } else {
            info.action = "finite";
        }
        info.source = s.source_note;
        out.push_back(std::move(info));
    }
    return out;
}

bool is_known_scenario(const std::string& name) {
    for (const auto& info : list_scenarios())
        if (info.name == name) return true;
    return false;
}

Vec pair_overlap_candidate(const StratifiedScenario& s, int lower, int higher,
                           std::mt19937_64& rng) {
    const Stratum& X = s.strata[static_cast<std::size_t>(lower)];
    const Stratum& Y = s.strata[static_cast<std::size_t>(higher)];
    const std::string& name = s.name;

    if (name == "FLAG3") {
        if (X.id == "X0" && Y.id == "X1") {
            const double u = rand_sign(rng) * unif(rng, 0.12, 0.5);
            const double r = unif(rng, 0.05, 0.35) * std::abs(u);
            const double b = unif(rng, 0.0, 2.0 * M_PI);
            return vec3(u, r * std::cos(b), r * std::sin(b));
        }
        if (X.id == "X0" && Y.id == "X2") {
            const double sr = unif(rng, 0.12, 0.5);
            const double psi = rand_sign(rng) * unif(rng, 0.4, M_PI - 0.4);
            const double al = rand_sign(rng) * unif(rng, 0.02, 0.3);
            return vec3(sr * std::cos(psi), sr * std::sin(psi) * std::cos(al),
                        sr * std::sin(psi) * std::sin(al));
        }
        // (X1, X2)
        const double u = rand_sign(rng) * unif(rng, 0.35, 1.4);
        const double r = unif(rng, 0.08, 0.4) * std::abs(u);
        const double al = rand_sign(rng) * unif(rng, 0.02, 0.3);
        return vec3(u, r * std::cos(al), r * std::sin(al));
    }
    if (name == "CONE2") {
        const double sr = unif(rng, 0.12, 0.5);
        const double nu = rand_sign(rng) * unif(rng, 0.01, 0.22);
        const double sg = rand_sign(rng);
        const double lam = sg * (M_PI / 4.0 + nu);
        const double phi = unif(rng, 0.0, 2.0 * M_PI);
        return vec3(sr * std::cos(lam) * std::cos(phi), sr * std::cos(lam) * std::sin(phi),
                    sr * std::sin(lam));
    }
    if (name == "MOMZERO" || name == "CRIT11" || name == "CUSTOM_TORUS") {
        const double sr = unif(rng, 0.12, 0.5);
        const double eta = rand_sign(rng) * unif(rng, 0.002, 0.05) * sr * sr;
        const double t1 = unif(rng, 0.0, 2.0 * M_PI), t2 = unif(rng, 0.0, 2.0 * M_PI);
        const double a2 = 0.5 * sr * sr + eta, b2 = 0.5 * sr * sr - eta;
        const double ra = std::sqrt(std::max(a2, 1e-12)),
                     rb = std::sqrt(std::max(b2, 1e-12));
        return vec4(ra * std::cos(t1), ra * std::sin(t1), rb * std::cos(t2),
                    rb * std::sin(t2));
    }
    if (name == "D3RED") {
        if (Y.id == "X2" && X.id == "X0") {
            const double sr = unif(rng, 0.12, 0.5);
            const int k = std::uniform_int_distribution<int>(0, 5)(rng);
            const double nu = rand_sign(rng) * unif(rng, 0.15, M_PI / 6.0 - 0.1);
            const double th = k * M_PI / 3.0 + nu;
            return vec2(sr * std::cos(th), sr * std::sin(th));
        }
        const bool with_origin = (X.id == "X0");
        const double sr = with_origin ? unif(rng, 0.12, 0.5) : unif(rng, 0.3, 1.8);
        const int k = std::uniform_int_distribution<int>(0, 5)(rng);
        const double nu = rand_sign(rng) * unif(rng, 0.01, 0.2);
        const double th = k * M_PI / 3.0 + nu;
        return vec2(sr * std::cos(th), sr * std::sin(th));
    }
    // Fallback: higher-stratum sample pulled toward the lower stratum.
    Vec q = Y.sampler(rng);
    if (X.dim == 0) q *= unif(rng, 0.12, 0.5) / std::max(q.norm(), 1e-12);
    return Vec(q + 0.05 * unif(rng, 0.1, 1.0) * unit_dir(rng, s.ambient_dim));
}

Vec near_stratum_candidate(const StratifiedScenario& s, int stratum, double scale,
                           std::mt19937_64& rng) {
    const Stratum& X = s.strata[static_cast<std::size_t>(stratum)];
    if (X.dim == 0) {
        return Vec(unif(rng, 0.05, 0.55) * scale * unit_dir(rng, s.ambient_dim));
    }
    if (X.dim == s.ambient_dim) return X.sampler(rng);

    if (s.name == "FLAG3" && X.id == "X1") {
        const double u = rand_sign(rng) * unif(rng, 0.3, 1.5);
        const double r = unif(rng, 0.02, 0.45) * scale * std::abs(u);
        const double b = unif(rng, 0.0, 2.0 * M_PI);
        return vec3(u, r * std::cos(b), r * std::sin(b));
    }
    if (s.name == "FLAG3" && X.id == "X2") {
        const double r = unif(rng, 0.4, 2.0);
        const double psi = rand_sign(rng) * unif(rng, 0.4, M_PI - 0.4);
        const double al = rand_sign(rng) * unif(rng, 0.005, 0.35) * scale;
        return vec3(r * std::cos(psi), r * std::sin(psi) * std::cos(al),
                    r * std::sin(psi) * std::sin(al));
    }
    if (s.name == "CONE2") {
        const double sr = unif(rng, 0.3, 1.8);
        const double nu = rand_sign(rng) * unif(rng, 0.005, 0.25) * scale;
        const double sg = rand_sign(rng);
        const double lam = sg * (M_PI / 4.0 + nu);
        const double phi = unif(rng, 0.0, 2.0 * M_PI);
        return vec3(sr * std::cos(lam) * std::cos(phi), sr * std::cos(lam) * std::sin(phi),
                    sr * std::sin(lam));
    }
    if (s.name == "MOMZERO" || s.name == "CRIT11" || s.name == "CUSTOM_TORUS") {
        const Vec q = X.sampler(rng);
        const Vec g = torus_grad_mu(s.action->weights, q);
        const double off = rand_sign(rng) * unif(rng, 0.005, 0.3) * scale * q.norm();
        return Vec(q + off * g / std::max(g.norm(), 1e-12));
    }
    if (s.name == "D3RED" && X.id == "X1") {
        const int k = std::uniform_int_distribution<int>(0, 5)(rng);
        const double nu = rand_sign(rng) * unif(rng, 0.005, 0.2) * scale;
        const double th = k * M_PI / 3.0 + nu;
        const double r = unif(rng, 0.3, 1.8);
        return vec2(r * std::cos(th), r * std::sin(th));
    }
    const Vec q = X.sampler(rng);
    return Vec(q + 0.1 * scale * unit_dir(rng, s.ambient_dim));
}

}  // namespace stratkit
