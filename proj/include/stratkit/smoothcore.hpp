#pragma once

#include "stratkit/bump.hpp"
#include "stratkit/fields.hpp"
#include "stratkit/ode.hpp"

#include <vector>

namespace stratkit {

// Directional derivative L_X f (p) = grad f(p) . X(p).
double lie_derivative(const VectorField& field, const ScalarField& f, const Vec& p);

// Normalized bump weights over a cover of balls. Each raw weight is
// bump(|p - center|^2 / radius^2) with the h_{1/2,1} profile, so the support
// is exactly the open ball. Evaluating where every raw weight vanishes
// throws DomainError.
std::vector<ScalarField> partition_of_unity(
    const std::vector<std::pair<Vec, double>>& covers);

// f on the region, the constant c outside. Smoothness is the caller's
// hypothesis (f == c near the region boundary).
ScalarField extend_by_constant(ScalarField f, double c,
                               std::function<bool(const Vec&)> closed_region);

}  // namespace stratkit
