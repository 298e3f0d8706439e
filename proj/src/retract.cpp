#include "stratkit/retract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stratkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rho_or_inf(const ControlData& cd, std::size_t i, const Vec& v) {
    const auto& tub = cd.tubulars[i];
    return tub.membership(v) ? tub.rho(v) : kInf;
}

// rho over the union of the dimension-d tubulars (at most one contains v).
double rho_dim(const ControlData& cd, int d, const Vec& v, int* which = nullptr) {
    for (std::size_t i = 0; i < cd.tubulars.size(); ++i) {
        if (cd.scenario->strata[i].dim != d) continue;
        const double r = rho_or_inf(cd, i, v);
        if (std::isfinite(r)) {
            if (which) *which = static_cast<int>(i);
            return r;
        }
    }
    if (which) *which = -1;
    return kInf;
}

}  // namespace

double phi_d(const ControlData& cd, int d, const Vec& v) {
    const double rd = rho_dim(cd, d, v);
    double w = std::isfinite(rd) ? bump({2.0, 3.0}, rd) : 0.0;
    if (w == 0.0) return 0.0;
    for (int i : cd.scenario->dims_present()) {
        if (i >= d) break;
        const double ri = rho_dim(cd, i, v);
        const double hi = std::isfinite(ri) ? bump({1.0, 2.0}, ri) : 0.0;
        w *= 1.0 - hi;
        if (w == 0.0) return 0.0;
    }
    return w;
}

Vec f_d(const ControlData& cd, int d, double t, const Vec& v) {
    const double w = phi_d(cd, d, v);
    if (w == 0.0 || t == 0.0) return v;
    int which = -1;
    rho_dim(cd, d, v, &which);
    if (which < 0) return v;
    return cd.tubulars[static_cast<std::size_t>(which)].mult(1.0 - t * w, v);
}

Vec Homotopy::eval(double t, const Vec& v) const {
    if (t < 0.0 || t > 1.0) throw DomainError("Homotopy: t must be in [0,1]");
    // Unrolled recursion over ascending dims d0 < ... < dm:
    //   F_{d_k}^t = F_{d_{k+1}}^{h'(2t)}           (t <= 1/2)
    //             = f_{d_k}^{h'(2t-1)} o F_{d_{k+1}}^1  (t >= 1/2).
    struct Frame {
        int dim;
        double s;  // local phase parameter for f_dim
    };
    std::vector<Frame> stages;  // applied top dimension first
    double loc = t;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        if (loc <= 0.5) {
            stages.push_back({dims[k], 0.0});
            loc = smooth_step(2.0 * loc);
        } else {
            stages.push_back({dims[k], smooth_step(2.0 * loc - 1.0)});
            loc = 1.0;
        }
    }
    stages.push_back({dims.empty() ? 0 : dims.back(), loc});

    Vec p = v;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        if (it->s == 0.0) continue;
        p = f_d(*cd, it->dim, it->s, p);
    }
    return p;
}

Homotopy build_homotopy(const ControlData& cd) {
    if (cd.commutative.status == "failed" || cd.precommutative.status == "failed")
        throw BuildError("build_homotopy: control data failed verification");
    Homotopy h;
    h.cd = std::make_shared<ControlData>(cd);
    h.dims = cd.scenario->dims_present();
    return h;
}

std::vector<Vec> neighbourhood_samples(const ControlData& cd, int count, std::uint64_t seed) {
    const auto& s = *cd.scenario;
    auto rng = seeded_rng(seed, "nbhd:" + s.name);
    std::vector<Vec> out;
    const int budget = 80 * count;
    int stratum = 0;
    for (int tries = 0; tries < budget && static_cast<int>(out.size()) < count; ++tries) {
        stratum = (stratum + 1) % static_cast<int>(s.strata.size());
        const double scale = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
        const Vec v = near_stratum_candidate(s, stratum, scale, rng);
        for (std::size_t i = 0; i < cd.tubulars.size(); ++i) {
            if (rho_or_inf(cd, i, v) < 1.0) {
                out.push_back(v);
                break;
            }
        }
    }
    return out;
}

RetractionMetrics retraction_metrics(const Homotopy& h, int samples, std::uint64_t seed) {
    RetractionMetrics m;
    const ControlData& cd = *h.cd;
    const auto& s = *cd.scenario;
    const std::vector<double> t_grid = {0.0, 0.25, 0.5, 0.75, 1.0};

    const auto pts = neighbourhood_samples(cd, samples, seed);
    m.samples = static_cast<int>(pts.size());
    std::vector<double> finals;

    int sample_id = 0;
    for (const Vec& v : pts) {
        std::vector<double> prev_rho(s.strata.size(), 0.0);
        bool first = true;
        for (double t : t_grid) {
            const Vec p = h.eval(t, v);
            TrajectoryRow row;
            row.sample_id = sample_id;
            row.t = t;
            row.point = p;
            bool in_nbhd = false;
            for (std::size_t i = 0; i < cd.tubulars.size(); ++i) {
                const double r = rho_or_inf(cd, i, p);
                row.rho.push_back(r);
                if (r < 1.0) in_nbhd = true;
                if (!first && std::isfinite(r) && std::isfinite(prev_rho[i]))
                    m.max_rho_increase =
                        std::max(m.max_rho_increase, (r - prev_rho[i]) / (1.0 + prev_rho[i]));
                prev_rho[i] = r;
            }
            row.c_residual = s.set_residual(p);
            m.trajectories.push_back(std::move(row));
            if (t == 0.0)
                m.max_identity_defect = std::max(m.max_identity_defect, (p - v).norm());
            if (t == 1.0) {
                finals.push_back(s.set_residual(p));
                m.max_final_residual = std::max(m.max_final_residual, finals.back());
            }
            if (!in_nbhd) m.neighbourhood_preserved = false;
            first = false;
        }
        ++sample_id;
    }
    if (!finals.empty()) {
        std::vector<double> sorted = finals;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t idx = static_cast<std::size_t>(
            std::min<double>(std::ceil(0.95 * static_cast<double>(sorted.size())),
                             static_cast<double>(sorted.size())) -
            1);
        m.final_residual_p95 = sorted[idx];
    }

    // Starts on the stratified set stay on it.
    auto rng = seeded_rng(seed, "onset:" + s.name);
    for (int k = 0; k < std::max(10, samples / 4); ++k) {
        const int idx =
            std::uniform_int_distribution<int>(0, static_cast<int>(s.strata.size()) - 1)(rng);
        const Vec q = s.strata[static_cast<std::size_t>(idx)].sampler(rng);
        for (double t : t_grid) {
            const Vec p = h.eval(t, q);
            m.max_on_set_drift = std::max(
                m.max_on_set_drift,
                s.strata[static_cast<std::size_t>(idx)].residual_norm(p) / (1.0 + q.norm()));
        }
    }

    // Equivariance along the homotopy when the scenario carries an action.
    if (s.action) {
        std::vector<Mat> gens;
        if (s.action->kind == GroupAction::Kind::finite)
            gens = s.action->generators;
        else
            gens = {s.action->circle_element(2.0 * M_PI / 7.0), s.action->circle_element(1.3)};
        int used = 0;
        for (const Vec& v : pts) {
            if (used++ >= std::max(20, samples / 4)) break;
            for (const Mat& g : gens) {
                for (double t : {0.5, 1.0}) {
                    const Vec a = g * h.eval(t, v);
                    const Vec b = h.eval(t, g * v);
                    m.max_equivariance_defect = std::max(
                        m.max_equivariance_defect, (a - b).norm() / (1.0 + v.norm()));
                }
            }
        }
    }
    return m;
}

}  // namespace stratkit
