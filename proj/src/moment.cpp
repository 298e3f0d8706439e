#include "stratkit/moment.hpp"

namespace stratkit {

double TorusHamiltonian::mu(const Vec& z) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const int i = 2 * static_cast<int>(j);
        acc += 0.5 * weights[j] * (z[i] * z[i] + z[i + 1] * z[i + 1]);
    }
    return acc - shift;
}

Vec TorusHamiltonian::grad_mu(const Vec& z) const {
    Vec g(z.size());
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const int i = 2 * static_cast<int>(j);
        g[i] = weights[j] * z[i];
        g[i + 1] = weights[j] * z[i + 1];
    }
    return g;
}

double moment(const TorusHamiltonian& ham, const Vec& z) {
    if (z.size() != ham.ambient_dim())
        throw DomainError("moment: dimension mismatch");
    return ham.mu(z);
}

Vec norm_sq_gradient_flow(const TorusHamiltonian& ham, const Vec& z, double T,
                          const FlowOptions& opts) {
    if (T < 0.0) throw DomainError("norm_sq_gradient_flow: T must be >= 0");
    VectorField f;
    f.eval = [ham](const Vec& p) { return Vec(-2.0 * ham.mu(p) * ham.grad_mu(p)); };
    return flow(f, z, T, opts);
}

double crit_residual(const TorusHamiltonian& ham, const Vec& z) {
    return (2.0 * ham.mu(z) * ham.grad_mu(z)).norm();
}

Mat standard_symplectic_matrix(int m) {
    Mat J = Mat::Zero(2 * m, 2 * m);
    for (int j = 0; j < m; ++j) {
        J(2 * j, 2 * j + 1) = -1.0;
        J(2 * j + 1, 2 * j) = 1.0;
    }
    return J;
}

bool is_infinitesimally_symplectic(const Mat& xi, double tol) {
    const int m = static_cast<int>(xi.rows()) / 2;
    const Mat J = standard_symplectic_matrix(m);
    return (xi.transpose() * J + J * xi).cwiseAbs().maxCoeff() <= tol;
}

Vec quadratic_moment(const std::vector<Mat>& generators, const Vec& z) {
    if (generators.empty()) throw InvalidActionError("quadratic_moment: no generators");
    const int m = static_cast<int>(z.size()) / 2;
    const Mat J = standard_symplectic_matrix(m);
    Vec out(static_cast<int>(generators.size()));
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const Mat& xi = generators[k];
        if (!is_infinitesimally_symplectic(xi))
            throw InvalidActionError("quadratic_moment: generator is not symplectic");
        // omega(u, v) = u . (J v) with the standard form on (x1,y1,x2,y2,...).
        out[static_cast<int>(k)] = 0.5 * (xi * z).dot(J * z);
    }
    return out;
}

double cv_residual(const std::vector<Mat>& generators, const Mat& beta_generator,
                   const Vec& z) {
    double res = quadratic_moment(generators, z).norm();
    if (beta_generator.size() > 0 && beta_generator.cwiseAbs().maxCoeff() > 0.0)
        res += (beta_generator * z).norm();
    return res;
}

Mat circle_weight_generator(const std::vector<int>& weights) {
    const int m = static_cast<int>(weights.size());
    Mat xi = Mat::Zero(2 * m, 2 * m);
    for (int j = 0; j < m; ++j) {
        xi(2 * j, 2 * j + 1) = -weights[static_cast<std::size_t>(j)];
        xi(2 * j + 1, 2 * j) = weights[static_cast<std::size_t>(j)];
    }
    return xi;
}

}  // namespace stratkit
