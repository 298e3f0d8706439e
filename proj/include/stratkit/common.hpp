#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stratkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation outside a declared domain.
struct DomainError : Error {
    using Error::Error;
};

// Adaptive integrator ran out of steps.
struct NonConvergenceError : Error {
    using Error::Error;
};

// Trajectory left the field's domain; carries the exit time.
struct EscapeError : Error {
    double exit_time;
    EscapeError(const std::string& what, double t) : Error(what), exit_time(t) {}
};

struct BuildError : Error {
    using Error::Error;
};

struct InvalidActionError : Error {
    using Error::Error;
};

struct NotSubmersionError : Error {
    using Error::Error;
};

struct PrecommuteError : Error {
    using Error::Error;
};

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Suite-local generator: one master seed, stable per-tag streams.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view tag) {
    return std::mt19937_64(seed ^ fnv1a(tag));
}

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

inline Vec vec4(double x, double y, double z, double w) {
    Vec v(4);
    v << x, y, z, w;
    return v;
}

inline bool all_finite(const Vec& v) {
    return v.allFinite();
}

}  // namespace stratkit
