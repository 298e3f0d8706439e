#include "stratkit/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace stratkit {

std::array<double, 2> hilbert_d3(const Vec& p) {
    const double x = p[0], y = p[1];
    return {x * x + y * y, x * x * x - 3.0 * x * y * y};
}

Vec HilbertModel::sigma(const Vec& p) const {
    Vec out(image_dim);
    for (std::size_t i = 0; i < generators.size(); ++i)
        out[static_cast<int>(i)] = generators[i](p);
    return out;
}

D3ImageReport d3_image_check(int samples, std::uint64_t seed) {
    D3ImageReport rep;
    const GroupAction d3 = d3_action();
    auto rng = seeded_rng(seed, "d3_image");
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int k = 0; k < samples; ++k) {
        const Vec p = vec2(coord(rng), coord(rng));
        const auto [s1, s2] = hilbert_d3(p);
        ++rep.samples;
        const double scale = 1e-10 * (1.0 + s1 * s1 * s1);
        if (s1 < -scale || s2 * s2 > s1 * s1 * s1 + scale) {
            ++rep.constraint_failures;
            rep.worst_gap_violation =
                std::max(rep.worst_gap_violation, s2 * s2 - s1 * s1 * s1);
        }
        // Boundary iff the gap s1^3 - s2^2 = y^2 (3x^2 - y^2)^2 vanishes,
        // which happens exactly on the mirror lines. The gap is homogeneous
        // of degree 6, so the threshold scales with s1^3.
        const double gap = s1 * s1 * s1 - s2 * s2;
        const bool on_boundary = gap <= 1e-9 * s1 * s1 * s1;
        const OrbitType ot = orbit_type(d3, p);
        const bool on_mirror = ot.order >= 2;  // reflection subgroup or the origin
        if (on_boundary != on_mirror) ++rep.boundary_mismatches;
    }
    return rep;
}

HilbertModel d3_hilbert_model() {
    HilbertModel m;
    m.upstairs_dim = 2;
    m.image_dim = 2;
    m.generators = {[](const Vec& p) { return p[0] * p[0] + p[1] * p[1]; },
                    [](const Vec& p) {
                        return p[0] * p[0] * p[0] - 3.0 * p[0] * p[1] * p[1];
                    }};
    m.weights = {2, 3};
    m.image_constraint = [](const Vec& w) {
        const double s1 = w[0], s2 = w[1];
        return s1 >= -1e-12 && s2 * s2 <= s1 * s1 * s1 + 1e-10 * (1.0 + s1 * s1 * s1);
    };
    m.representative = [](const Vec& w) {
        const double r = std::sqrt(std::max(w[0], 0.0));
        if (r == 0.0) return vec2(0, 0);
        const double c3 = std::clamp(w[1] / (r * r * r), -1.0, 1.0);
        const double th = std::acos(c3) / 3.0;
        return vec2(r * std::cos(th), r * std::sin(th));
    };
    return m;
}

HilbertModel momzero_hilbert_model() {
    HilbertModel m;
    m.upstairs_dim = 4;
    m.image_dim = 4;
    m.generators = {
        [](const Vec& z) { return z[0] * z[0] + z[1] * z[1]; },
        [](const Vec& z) { return z[2] * z[2] + z[3] * z[3]; },
        [](const Vec& z) { return z[0] * z[2] - z[1] * z[3]; },
        [](const Vec& z) { return z[0] * z[3] + z[1] * z[2]; },
    };
    m.weights = {2, 2, 2, 2};
    m.image_constraint = [](const Vec& w) {
        const double rel = w[2] * w[2] + w[3] * w[3] - w[0] * w[1];
        return w[0] >= -1e-12 && w[1] >= -1e-12 &&
               std::abs(rel) <= 1e-9 * (1.0 + w[0] * w[1]);
    };
    m.representative = [](const Vec& w) {
        const double u = std::max(w[0], 0.0);
        if (u == 0.0) return vec4(0, 0, 0, 0);
        const double r1 = std::sqrt(u);
        return vec4(r1, 0.0, w[2] / r1, w[3] / r1);
    };
    return m;
}

QuasiHomogReport quasi_homog_check(const HilbertModel& model,
                                   const std::function<bool(const Vec&)>& stratum_image,
                                   const std::function<Vec(std::mt19937_64&)>& image_sampler,
                                   int samples, const std::vector<double>& t_grid,
                                   std::uint64_t seed) {
    QuasiHomogReport rep;
    auto rng = seeded_rng(seed, "quasi_homog");
    for (int k = 0; k < samples; ++k) {
        const Vec w = image_sampler(rng);
        if (!stratum_image(w)) continue;
        for (double t : t_grid) {
            Vec scaled = w;
            for (int i = 0; i < scaled.size(); ++i)
                scaled[i] *= std::pow(t, model.weights[static_cast<std::size_t>(i)]);
            ++rep.tested;
            if (!stratum_image(scaled)) ++rep.failures;
        }
    }
    return rep;
}

std::vector<ReducedFiberedNbhd> reduce_control_data(const ControlData& cd,
                                                    const HilbertModel& model,
                                                    std::uint64_t seed) {
    const auto& s = *cd.scenario;
    if (cd.commutative.status != "verified" || cd.equivariant.status != "verified")
        throw BuildError("reduce_control_data: needs verified commutative equivariant data");
    if (!s.action) throw BuildError("reduce_control_data: scenario has no group action");

    // Well-definedness on orbit pairs: equal sigma-images must stay equal
    // under the pushed homothety.
    {
        std::vector<Mat> gens;
        if (s.action->kind == GroupAction::Kind::finite)
            gens = s.action->elements();
        else
            for (double th : {0.9, 2.0, 4.1}) gens.push_back(s.action->circle_element(th));
        auto rng = seeded_rng(seed, "reduce_welldef:" + s.name);
        for (std::size_t i = 0; i < s.strata.size(); ++i) {
            const auto& tub = cd.tubulars[i];
            int got = 0;
            for (int k = 0; k < 200 && got < 25; ++k) {
                const Vec p = near_stratum_candidate(s, static_cast<int>(i), 0.8, rng);
                if (!tub.membership(p)) continue;
                ++got;
                const std::size_t gi =
                    std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng);
                const Vec q = gens[gi] * p;
                if ((model.sigma(p) - model.sigma(q)).norm() > 1e-10 * (1.0 + p.norm()))
                    continue;
                if (!tub.membership(q)) continue;
                for (double t : {0.5, 2.0}) {
                    const Vec a = model.sigma(tub.mult(t, p));
                    const Vec b = model.sigma(tub.mult(t, q));
                    if ((a - b).norm() > 1e-7 * (1.0 + a.norm())) {
                        std::ostringstream msg;
                        msg << "reduce_control_data: homothety not well defined on orbits; "
                            << "witness p = [" << p.transpose() << "], q = [" << q.transpose()
                            << "], t = " << t;
                        throw BuildError(msg.str());
                    }
                }
            }
        }
    }

    std::vector<ReducedFiberedNbhd> out;
    for (std::size_t i = 0; i < s.strata.size(); ++i) {
        auto tub = std::make_shared<TubularData>(cd.tubulars[i]);
        auto rep = model.representative;
        ReducedFiberedNbhd rn;
        rn.stratum_id = s.strata[i].id;
        rn.membership = [tub, rep](const Vec& w) { return tub->membership(rep(w)); };
        rn.homothety = [tub, rep, model](double t, const Vec& w) {
            return model.sigma(tub->mult(t, rep(w)));
        };
        rn.rho_bar = [tub, rep](const Vec& w) { return tub->rho(rep(w)); };
        out.push_back(std::move(rn));
    }
    return out;
}

}  // namespace stratkit
