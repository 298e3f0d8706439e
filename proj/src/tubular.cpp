#include "stratkit/tubular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace stratkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared state of a flow-realized tubular neighbourhood.
struct ConvenientCore {
    Stratum stratum;
    VectorField conv_field;
    FlowOptions opts;
    double on_stratum_tol = 1e-9;

    struct Resolved {
        Vec q;
        Vec u;
        double rho = 0.0;
    };

    // Backward flow to the log-time floor with two checkpoints and Richardson
    // extrapolation of both the base point and the normal coordinates.
    Resolved resolve(const Vec& v) const {
        Resolved out;
        if (stratum.on_stratum(v, on_stratum_tol)) {
            out.q = stratum.chart_project(v);
            out.u = Vec::Zero(stratum.fiber_coords(out.q, v).size());
            out.rho = 0.0;
            return out;
        }
        const double tau1 = opts.tau_min;
        const double tau2 = tau1 - std::log(2.0);
        const double eps1 = std::exp(tau1), eps2 = std::exp(tau2);
        const Vec w1 = flow(conv_field, v, tau1, opts);
        const Vec w2 = flow(conv_field, w1, tau2 - tau1, opts);
        const Vec q1 = stratum.chart_project(w1);
        const Vec q2 = stratum.chart_project(w2);
        out.q = 2.0 * q2 - q1;
        const Vec u1 = stratum.fiber_coords(out.q, w1) / eps1;
        const Vec u2 = stratum.fiber_coords(out.q, w2) / eps2;
        out.u = 2.0 * u2 - u1;
        out.rho = out.u.squaredNorm();
        return out;
    }
};

double safe_rho(const TubularData& tub, const Vec& v) {
    return tub.membership(v) ? tub.rho(v) : kInf;
}

}  // namespace

EulerResidualReport euler_like_residual(const VectorField& field, const Stratum& stratum,
                                        const ScalarField& f, const Vec& q, const Vec& u,
                                        const std::vector<double>& eps_ladder) {
    if (stratum.residual_norm(q) > 1e-9)
        throw DomainError("euler_like_residual: base point is not on the stratum");
    if (std::abs(f.eval(q)) > 1e-12)
        throw DomainError("euler_like_residual: f does not vanish on the stratum");
    EulerResidualReport rep;
    for (double eps : eps_ladder) {
        const Vec p = q + eps * u;
        const double r = f.eval(p) - lie_derivative(field, f, p);
        rep.eps.push_back(eps);
        rep.values.push_back(r);
        rep.ratios.push_back(r / (eps * eps));
    }
    rep.accepted = true;
    for (std::size_t i = 1; i < rep.ratios.size(); ++i) {
        const double prev = std::abs(rep.ratios[i - 1]);
        const double cur = std::abs(rep.ratios[i]);
        if (cur > 2.0 * std::max(prev, 1e-9)) rep.accepted = false;
    }
    return rep;
}

VectorField euler_from_chart(const ConicalChart& chart) {
    VectorField out;
    out.domain = chart.domain;
    const int k = chart.split_k;
    out.eval = [chart, k](const Vec& p) {
        if (!chart.in_domain(p)) throw DomainError("euler_from_chart: outside chart domain");
        Vec y = chart.theta(p);
        Vec dir = Vec::Zero(y.size());
        dir.tail(y.size() - k) = y.tail(y.size() - k);
        // D(theta_inv) at theta(p), applied to (0, y): central differences on
        // theta_inv along dir.
        const double h = 1e-6 * (1.0 + y.norm());
        const Vec fp = chart.theta_inv(y + h * dir);
        const Vec fm = chart.theta_inv(y - h * dir);
        return Vec((fp - fm) / (2.0 * h));
    };
    return out;
}

ConicalChart adapt_chart_to_submersion(const ConicalChart& chart,
                                       const std::function<Vec(const Vec&)>& f, int l,
                                       const Vec& p) {
    if (!chart.in_domain(p))
        throw DomainError("adapt_chart_to_submersion: point outside chart domain");
    const int n = static_cast<int>(p.size());
    const int k = chart.split_k;
    if (l < 1 || l > k)
        throw NotSubmersionError("adapt_chart_to_submersion: need 1 <= l <= split_k");

    // Work in chart coordinates: F(y) = f(theta_inv(y)).
    auto F = [&chart, &f](const Vec& y) { return f(chart.theta_inv(y)); };
    const Vec y0 = chart.theta(p);

    auto jac_at = [&F, n, l](const Vec& y) {
        Mat J(l, n);
        const double h = 1e-6 * (1.0 + y.norm());
        Vec yp = y;
        for (int j = 0; j < n; ++j) {
            yp[j] = y[j] + h;
            const Vec fp = F(yp);
            yp[j] = y[j] - h;
            const Vec fm = F(yp);
            yp[j] = y[j];
            J.col(j) = (fp - fm) / (2.0 * h);
        }
        return J;
    };

    const Mat J0 = jac_at(y0);
    const Mat Jt = J0.leftCols(k);  // restriction to the tangential directions

    // Greedy column pivoting: pick l tangential columns making the block
    // invertible with condition number <= 1e6.
    Eigen::ColPivHouseholderQR<Mat> qr(Jt);
    if (qr.rank() < l)
        throw NotSubmersionError("adapt_chart_to_submersion: rank-deficient on the stratum");
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = qr.colsPermutation().indices()[i];
    Mat block(l, l);
    for (int j = 0; j < l; ++j) block.col(j) = Jt.col(perm[static_cast<std::size_t>(j)]);
    Eigen::JacobiSVD<Mat> svd(block);
    const double cond = svd.singularValues()(0) / svd.singularValues()(l - 1);
    if (!(cond <= 1e6))
        throw NotSubmersionError("adapt_chart_to_submersion: block condition number too large");

    // Coordinate order: chosen l columns first, remaining tangential, fiber.
    std::vector<int> order = perm;
    auto psi = [F, order, k, n, l](const Vec& y) {
        const Vec fv = F(y);
        Vec out(n);
        for (int i = 0; i < l; ++i) out[i] = fv[i];
        for (int i = l; i < k; ++i) out[i] = y[order[static_cast<std::size_t>(i)]];
        out.tail(n - k) = y.tail(n - k);
        return out;
    };

    auto psi_jac = [psi, n](const Vec& y) {
        Mat J(n, n);
        const double h = 1e-6 * (1.0 + y.norm());
        Vec yp = y;
        for (int j = 0; j < n; ++j) {
            yp[j] = y[j] + h;
            const Vec fp = psi(yp);
            yp[j] = y[j] - h;
            const Vec fm = psi(yp);
            yp[j] = y[j];
            J.col(j) = (fp - fm) / (2.0 * h);
        }
        return J;
    };

    // Radius on which the Jacobian stays invertible, probed on a 3^n stencil.
    double radius = 0.5 * (1.0 + y0.norm());
    auto invertible_on_stencil = [&](double rad) {
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        const int total = static_cast<int>(std::pow(3, n));
        for (int c = 0; c < total; ++c) {
            int rem = c;
            Vec offset(n);
            for (int j = 0; j < n; ++j) {
                offset[j] = static_cast<double>(rem % 3 - 1);
                rem /= 3;
            }
            const Vec y = y0 + rad * offset;
            Eigen::FullPivLU<Mat> lu(psi_jac(y));
            if (!lu.isInvertible()) return false;
        }
        return true;
    };
    for (int it = 0; it < 12 && !invertible_on_stencil(radius); ++it) radius *= 0.5;
    if (!invertible_on_stencil(radius))
        throw NotSubmersionError("adapt_chart_to_submersion: no invertible neighbourhood");

    ConicalChart out;
    out.center = chart.center;
    out.split_k = k;
    out.cone_membership = chart.cone_membership;
    const Vec psi0 = psi(y0);
    out.domain = [chart, y0, radius](const Vec& q) {
        return chart.in_domain(q) && (chart.theta(q) - y0).norm() < radius;
    };
    out.theta = [chart, psi](const Vec& q) { return psi(chart.theta(q)); };
    out.theta_inv = [chart, psi, psi_jac, y0](const Vec& z) {
        // Newton inversion of psi from the chart base point.
        Vec y = y0;
        for (int it = 0; it < 40; ++it) {
            const Vec r = psi(y) - z;
            if (r.norm() < 1e-13 * (1.0 + z.norm())) break;
            y -= psi_jac(y).partialPivLu().solve(r);
        }
        return chart.theta_inv(y);
    };
    return out;
}

TubularData make_convenient(const VectorField& field, const Stratum& stratum,
                            const ScalarField& rho_raw, double delta, BumpSpec spec,
                            const FlowOptions& opts) {
    spec.validate();
    opts.validate();
    if (!(delta > 0.0)) throw DomainError("make_convenient: delta must be positive");

    auto core = std::make_shared<ConvenientCore>();
    core->stratum = stratum;
    core->opts = opts;

    // phi(v) = h(rho_raw(v) / delta), extended by zero where the raw field
    // itself vanishes; the product is the convenient field.
    VectorField conv;
    conv.domain = field.domain;
    conv.eval = [field, rho_raw, delta, spec](const Vec& p) -> Vec {
        const Vec base = field.eval(p);
        if (base.squaredNorm() == 0.0) return base;
        const double c = bump(spec, rho_raw.eval(p) / delta);
        if (c == 0.0) return Vec::Zero(p.size());
        return Vec(c * base);
    };
    core->conv_field = conv;

    TubularData tub;
    tub.field = conv;
    tub.bump_history = {};

    auto member = [core](const Vec& v) {
        return core->stratum.on_stratum(v, core->on_stratum_tol) ||
               core->conv_field.eval(v).squaredNorm() > 0.0;
    };
    tub.membership = member;
    tub.project = [core, member](const Vec& v) {
        if (!member(v)) throw DomainError("project: point outside the tubular");
        return core->resolve(v).q;
    };
    tub.rho = [core, member](const Vec& v) -> double {
        if (!member(v)) return kInf;
        return core->resolve(v).rho;
    };
    tub.mult = [core, member](double t, const Vec& v) -> Vec {
        if (t < 0.0) throw DomainError("mult: t must be >= 0");
        if (t == 1.0) return v;
        if (!member(v)) throw DomainError("mult: point outside the tubular");
        if (t <= std::exp(core->opts.tau_min)) return core->resolve(v).q;
        return flow(core->conv_field, v, std::log(t), core->opts);
    };
    return tub;
}

TubularData trivial_tubular(const Stratum& stratum, int index) {
    TubularData tub;
    tub.stratum_index = index;
    const int n = stratum.dim;  // open stratum: dim == ambient dimension
    tub.field = zero_field(n);
    auto st = std::make_shared<Stratum>(stratum);
    tub.membership = [st](const Vec& v) { return st->on_stratum(v, 1e-9) || st->exclusion(v); };
    tub.project = [](const Vec& v) { return v; };
    tub.rho = [](const Vec&) { return 0.0; };
    tub.mult = [](double t, const Vec& v) -> Vec {
        if (t < 0.0) throw DomainError("mult: t must be >= 0");
        return v;
    };
    return tub;
}

double exp_h_s(BumpSpec spec, double s, double t, const FlowOptions& opts) {
    spec.validate();
    if (!(s > 0.0)) throw DomainError("exp_h_s: s must be positive");
    if (t == 0.0) return 1.0;
    auto rhs = [spec, s](double, double y) { return bump(spec, s * y * y) * y; };
    return flow_scalar(rhs, 0.0, 1.0, t, opts);
}

double exp_h_backward_asymptote(BumpSpec spec, double s, const FlowOptions& opts) {
    spec.validate();
    if (!(s > 0.0)) throw DomainError("exp_h_backward_asymptote: s must be positive");
    if (s <= spec.a) return 1.0;  // already in the plateau, exact exponential
    if (s >= spec.b) return kInf;
    // Integrate backward in chunks until s y^2 enters the plateau; then the
    // remaining flow is exactly exponential and y e^{-tau} freezes.
    auto rhs = [spec, s](double, double y) { return bump(spec, s * y * y) * y; };
    double tau = 0.0, y = 1.0;
    const double chunk = 4.0;
    const double t_cap = 400.0;
    while (tau > -t_cap) {
        if (s * y * y <= spec.a) return y * std::exp(-tau);
        y = flow_scalar(rhs, tau, y, tau - chunk, opts);
        tau -= chunk;
    }
    return kInf;
}

TubularData shrink(const TubularData& tub, BumpSpec spec, const FlowOptions& opts) {
    spec.validate();
    opts.validate();
    auto base = std::make_shared<TubularData>(tub);
    auto sp = spec;
    auto op = opts;

    TubularData out;
    out.stratum_index = tub.stratum_index;
    out.bump_history = tub.bump_history;
    out.bump_history.push_back(spec);

    // New field: extended cutoff on the current distance times the old field.
    ScalarField cutoff;
    cutoff.eval = [base, sp](const Vec& v) { return bump(sp, base->rho(v)); };
    ScalarField ext = extend_by_constant(
        std::move(cutoff), 0.0, [base](const Vec& v) { return base->membership(v); });
    out.field.domain = tub.field.domain;
    out.field.eval = [base, ext](const Vec& p) -> Vec {
        const Vec f = base->field.eval(p);
        if (f.squaredNorm() == 0.0) return f;
        const double c = ext.eval(p);
        if (c == 0.0) return Vec::Zero(p.size());
        return Vec(c * f);
    };

    out.membership = [base, sp](const Vec& v) {
        return base->membership(v) && safe_rho(*base, v) < sp.b;
    };
    out.project = base->project;
    out.rho = [base, sp, op](const Vec& v) -> double {
        const double s = safe_rho(*base, v);
        if (s == 0.0) return 0.0;
        if (!(s < sp.b)) return kInf;
        const double ell = exp_h_backward_asymptote(sp, s, op);
        return s * ell * ell;
    };
    out.mult = [base, sp, op](double t, const Vec& v) -> Vec {
        if (t < 0.0) throw DomainError("mult: t must be >= 0");
        if (t == 1.0) return v;
        const double s = safe_rho(*base, v);
        if (!(s < sp.b)) throw DomainError("mult: point outside the shrunk tubular");
        if (s == 0.0) return v;  // on the stratum, fixed by every m^t
        if (t == 0.0 || t <= std::exp(op.tau_min)) return base->project(v);
        // Flow of the cut field along the old fiber: time-reparametrized old
        // multiplication.
        const double factor = exp_h_s(sp, s, std::log(t), op);
        return base->mult(factor, v);
    };
    return out;
}

ShrinkLevelsetReport shrink_levelset_check(const TubularData& tub, const TubularData& shrunk,
                                           int samples, std::uint64_t seed) {
    ShrinkLevelsetReport rep;
    auto rng = seeded_rng(seed, "shrink_levelset");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> urad(0.05, 0.75);
    for (int k = 0; k < samples; ++k) {
        // Two points with the same shrunk distance on the same fiber are
        // generated by rotating within the fiber: here the E-over-R^2 setup,
        // fiber = the whole plane, so equal radius means equal rho-tilde.
        const double r = std::sqrt(urad(rng));
        const double a1 = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng);
        const double a2 = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng);
        const Vec v = vec2(r * std::cos(a1), r * std::sin(a1));
        const Vec w = vec2(r * std::cos(a2), r * std::sin(a2));
        LevelsetPairResult pr;
        if (!shrunk.membership(v) || !shrunk.membership(w) ||
            (shrunk.project(v) - shrunk.project(w)).norm() > 1e-8) {
            pr.skipped = true;
            rep.pairs.push_back(pr);
            continue;
        }
        pr.rho_tilde_diff = std::abs(shrunk.rho(v) - shrunk.rho(w));
        if (pr.rho_tilde_diff > 1e-10) {
            pr.skipped = true;
            rep.pairs.push_back(pr);
            continue;
        }
        pr.rho_diff = std::abs(tub.rho(v) - tub.rho(w));
        rep.worst = std::max(rep.worst, pr.rho_diff);
        ++rep.checked;
        if (pr.rho_diff > 1e-6) ++rep.failures;
        rep.pairs.push_back(pr);
    }
    return rep;
}

}  // namespace stratkit
