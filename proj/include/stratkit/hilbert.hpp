#pragma once

#include "stratkit/control.hpp"

#include <array>
#include <functional>
#include <vector>

namespace stratkit {

// The D3 Hilbert map on R^2: (x^2 + y^2, x^3 - 3 x y^2).
std::array<double, 2> hilbert_d3(const Vec& p);

struct D3ImageReport {
    int samples = 0;
    int constraint_failures = 0;      // sigma1 >= 0 or sigma2^2 <= sigma1^3 violated
    int boundary_mismatches = 0;      // boundary iff mirror-line orbit type
    double worst_gap_violation = 0.0;
    bool pass() const { return constraint_failures == 0 && boundary_mismatches == 0; }
};

// Image constraints of the D3 Hilbert map at random points, with the
// boundary case classified against the orbit type.
D3ImageReport d3_image_check(int samples, std::uint64_t seed = 42);

// Invariant-polynomial model of a linear quotient: generators, their
// degrees (the quasi-homogeneity weights), image constraints, and a
// representative lift from image coordinates.
struct HilbertModel {
    int upstairs_dim = 0;
    int image_dim = 0;
    std::vector<std::function<double(const Vec&)>> generators;
    std::vector<int> weights;
    std::function<bool(const Vec&)> image_constraint;      // on image points
    std::function<Vec(const Vec&)> representative;         // image -> upstairs

    Vec sigma(const Vec& p) const;
};

HilbertModel d3_hilbert_model();

// Invariants of the weight-(1,-1) circle on C^2: |z1|^2, |z2|^2, Re(z1 z2),
// Im(z1 z2); representatives gauge-fix the phase of z1.
HilbertModel momzero_hilbert_model();

struct QuasiHomogReport {
    int tested = 0;
    int failures = 0;
    bool pass() const { return failures == 0 && tested > 0; }
};

// Weighted scalings (y_i -> t^{d_i} y_i) of sampled image points must
// preserve the stratum-image predicate for every t in the grid.
QuasiHomogReport quasi_homog_check(const HilbertModel& model,
                                   const std::function<bool(const Vec&)>& stratum_image,
                                   const std::function<Vec(std::mt19937_64&)>& image_sampler,
                                   int samples, const std::vector<double>& t_grid,
                                   std::uint64_t seed = 42);

// Fibered neighbourhood on the quotient: homothety and distance in image
// coordinates, pushed through the Hilbert map.
struct ReducedFiberedNbhd {
    std::string stratum_id;
    std::function<bool(const Vec&)> membership;            // image coordinates
    std::function<Vec(double, const Vec&)> homothety;      // m-bar^t
    std::function<double(const Vec&)> rho_bar;
};

// Pushes each stratum's m^t and rho through the Hilbert chart:
// m-bar^t(sigma(p)) = sigma(m^t(p)), rho-bar(sigma(p)) = rho(p).
// Well-definedness is spot-checked on orbit pairs; a violation throws
// BuildError with the witness pair in the message. Requires verified
// equivariant and commutative control data.
std::vector<ReducedFiberedNbhd> reduce_control_data(const ControlData& cd,
                                                    const HilbertModel& model,
                                                    std::uint64_t seed = 42);

}  // namespace stratkit
