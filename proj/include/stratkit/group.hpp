#pragma once

#include "stratkit/fields.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stratkit {

// Compact symmetry at desk scale: either a finite orthogonal matrix group
// given by generators (closure enumerated, order capped at 48) or a weighted
// circle acting on C^m identified with R^{2m}, coordinates interleaved as
// (x1, y1, x2, y2, ...).
struct GroupAction {
    enum class Kind { finite, circle };

    Kind kind = Kind::finite;
    std::vector<Mat> generators;  // finite only, orthogonal
    std::vector<int> weights;     // circle only, one per complex coordinate
    double shift = 0.0;           // momentum-level shift, carried for scenarios

    int ambient_dim() const;

    // Full element list for a finite group. Throws InvalidActionError if a
    // generator is not orthogonal or the closure exceeds the cap.
    std::vector<Mat> elements() const;

    // Rotation by angle theta for the circle kind.
    Mat circle_element(double theta) const;

    void validate() const;
};

// Finite groups: exact average (1/|G|) sum g^{-1} field(g p).
// Circle: 64-point trapezoidal quadrature in theta.
VectorField group_average(const VectorField& field, const GroupAction& action);

// Stabilizer descriptor up to conjugacy.
struct OrbitType {
    std::string label;      // canonical conjugacy label
    int order = 1;          // subgroup order; 0 encodes the full circle
    bool full_group = false;

    bool operator==(const OrbitType& o) const { return label == o.label; }
};

OrbitType orbit_type(const GroupAction& action, const Vec& p);

// D3 acting on R^2: rotation by 2pi/3 and the reflection across the x-axis.
GroupAction d3_action();

GroupAction circle_action(std::vector<int> weights, double shift = 0.0);

}  // namespace stratkit
