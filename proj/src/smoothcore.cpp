#include "stratkit/smoothcore.hpp"

namespace stratkit {

double lie_derivative(const VectorField& field, const ScalarField& f, const Vec& p) {
    field.check_domain(p);
    f.check_domain(p);
    return f.gradient(p).dot(field.eval(p));
}

std::vector<ScalarField> partition_of_unity(
    const std::vector<std::pair<Vec, double>>& covers) {
    const BumpSpec profile{0.5, 1.0};
    auto raw = [profile, covers](std::size_t i, const Vec& p) {
        const auto& [center, radius] = covers[i];
        return bump(profile, (p - center).squaredNorm() / (radius * radius));
    };
    auto total = [raw, n = covers.size()](const Vec& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += raw(i, p);
        return s;
    };
    std::vector<ScalarField> fields;
    fields.reserve(covers.size());
    for (std::size_t i = 0; i < covers.size(); ++i) {
        ScalarField phi;
        phi.eval = [raw, total, i](const Vec& p) {
            const double s = total(p);
            if (s <= 0.0) throw DomainError("partition_of_unity: uncovered point");
            return raw(i, p) / s;
        };
        phi.domain = [total](const Vec& p) { return total(p) > 0.0; };
        fields.push_back(std::move(phi));
    }
    return fields;
}

ScalarField extend_by_constant(ScalarField f, double c,
                               std::function<bool(const Vec&)> closed_region) {
    ScalarField out;
    out.eval = [f = std::move(f), c, region = std::move(closed_region)](const Vec& p) {
        return region(p) ? f.eval(p) : c;
    };
    return out;
}

}  // namespace stratkit
