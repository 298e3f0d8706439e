#pragma once

#include "stratkit/control.hpp"

#include <map>
#include <memory>
#include <vector>

namespace stratkit {

// Weight of the dimension-d phase at v:
//   h_{2,3}(rho_d(v)) * prod_{i<d} (1 - h_{1,2}(rho_i(v)))
// with rho read as +inf outside the tubulars (constant extension).
double phi_d(const ControlData& cd, int d, const Vec& v);

// One phase: f_d(t, x) = m_d^{1 - t phi_d(x)}(x), the identity wherever
// phi_d vanishes.
Vec f_d(const ControlData& cd, int d, double t, const Vec& v);

// The descending composition F: F_top = f_top, and
//   F_d^t = F_{d+1}^{h'(2t)}        for t <= 1/2,
//   F_d^t = f_d^{h'(2t-1)} o F_{d+1}^1  for t >= 1/2,
// with h' a smooth step flat on [0, 0.1] and [0.9, 1].
struct Homotopy {
    std::shared_ptr<const ControlData> cd;
    std::vector<int> dims;  // ascending

    Vec eval(double t, const Vec& v) const;
};

Homotopy build_homotopy(const ControlData& cd);

struct TrajectoryRow {
    int sample_id;
    double t;
    Vec point;
    std::vector<double> rho;  // per stratum, +inf off-tubular
    double c_residual;
};

struct RetractionMetrics {
    int samples = 0;
    double max_final_residual = 0.0;       // C-residual of F(1, .)
    double final_residual_p95 = 0.0;       // 95th percentile
    double max_rho_increase = 0.0;         // over consecutive t, all strata
    double max_identity_defect = 0.0;      // F(0,.) = id check
    double max_on_set_drift = 0.0;         // residual along t for on-C starts
    double max_equivariance_defect = 0.0;  // only when the scenario has an action
    bool neighbourhood_preserved = true;   // F(t,.) stays in union {rho < 1}
    std::vector<TrajectoryRow> trajectories;
};

RetractionMetrics retraction_metrics(const Homotopy& h, int samples,
                                     std::uint64_t seed = 42);

// Points in the union of {rho_X < 1} over the strata, built constructively
// near the strata with membership rejection.
std::vector<Vec> neighbourhood_samples(const ControlData& cd, int count, std::uint64_t seed);

}  // namespace stratkit
