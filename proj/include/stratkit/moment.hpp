#pragma once

#include "stratkit/group.hpp"
#include "stratkit/ode.hpp"

#include <vector>

namespace stratkit {

// Weighted circle Hamiltonian on C^n = R^{2n} (interleaved coordinates):
// mu(z) = 1/2 sum a_j |z_j|^2 - c.
struct TorusHamiltonian {
    std::vector<int> weights;
    double shift = 0.0;

    int ambient_dim() const { return 2 * static_cast<int>(weights.size()); }
    double mu(const Vec& z) const;
    Vec grad_mu(const Vec& z) const;
};

double moment(const TorusHamiltonian& ham, const Vec& z);

// Flow of z' = -grad |mu|^2 (z) = -2 mu(z) grad mu(z) for time T.
Vec norm_sq_gradient_flow(const TorusHamiltonian& ham, const Vec& z, double T,
                          const FlowOptions& opts = {});

// |grad |mu|^2| = |2 mu grad mu|; zero exactly on Crit |mu|^2.
double crit_residual(const TorusHamiltonian& ham, const Vec& z);

// Quadratic momentum map of a linear symplectic action: per generator xi,
// <Q(z), xi> = 1/2 omega(xi z, z) with the standard form on interleaved
// coordinates. Generators must be infinitesimally symplectic.
Vec quadratic_moment(const std::vector<Mat>& generators, const Vec& z);

// |Q(z)| + |xi_beta z|: zero exactly on the local critical-set model
// Q^{-1}(0) intersected with the fixed space of the beta direction. An empty
// (zero) beta generator reduces to |Q(z)|.
double cv_residual(const std::vector<Mat>& generators, const Mat& beta_generator,
                   const Vec& z);

// Standard symplectic structure helpers on R^{2m}.
Mat standard_symplectic_matrix(int m);
bool is_infinitesimally_symplectic(const Mat& xi, double tol = 1e-10);

// Circle-weight generator as a matrix: block-diagonal a_j J_2.
Mat circle_weight_generator(const std::vector<int>& weights);

}  // namespace stratkit
