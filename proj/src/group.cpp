#include "stratkit/group.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

namespace stratkit {

namespace {

constexpr int kGroupOrderCap = 48;
constexpr double kMatchTol = 1e-9;

bool same_matrix(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff() <= kMatchTol;
}

int find_element(const std::vector<Mat>& elems, const Mat& g) {
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (same_matrix(elems[i], g)) return static_cast<int>(i);
    return -1;
}

int element_order(const Mat& g) {
    Mat p = g;
    const Mat id = Mat::Identity(g.rows(), g.cols());
    for (int k = 1; k <= kGroupOrderCap; ++k) {
        if (same_matrix(p, id)) return k;
        p = p * g;
    }
    return 0;
}

}  // namespace

int GroupAction::ambient_dim() const {
    if (kind == Kind::finite) {
        if (generators.empty()) throw InvalidActionError("finite action without generators");
        return static_cast<int>(generators[0].rows());
    }
    return 2 * static_cast<int>(weights.size());
}

void GroupAction::validate() const {
    if (kind == Kind::finite) {
        if (generators.empty()) throw InvalidActionError("finite action without generators");
        for (const Mat& g : generators) {
            if (g.rows() != g.cols() || g.rows() != generators[0].rows())
                throw InvalidActionError("generator dimension mismatch");
            const Mat gtg = g.transpose() * g;
            if (!same_matrix(gtg, Mat::Identity(g.rows(), g.cols())))
                throw InvalidActionError("generator is not orthogonal");
        }
        elements();  // enforces the order cap
    } else {
        if (weights.empty()) throw InvalidActionError("circle action without weights");
    }
}

std::vector<Mat> GroupAction::elements() const {
    if (kind != Kind::finite) throw InvalidActionError("elements(): finite actions only");
    const int n = static_cast<int>(generators[0].rows());
    for (const Mat& g : generators) {
        const Mat gtg = g.transpose() * g;
        if (!same_matrix(gtg, Mat::Identity(n, n)))
            throw InvalidActionError("generator is not orthogonal");
    }
    std::vector<Mat> elems{Mat::Identity(n, n)};
    // Closure by repeated multiplication.
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            for (const Mat& g : generators) {
                Mat prod = elems[i] * g;
                if (find_element(elems, prod) < 0) {
                    if (static_cast<int>(elems.size()) >= kGroupOrderCap)
                        throw InvalidActionError("group order exceeds the desk-scale cap");
                    elems.push_back(std::move(prod));
                    grew = true;
                }
            }
        }
    }
    return elems;
}

Mat GroupAction::circle_element(double theta) const {
    const int m = static_cast<int>(weights.size());
    Mat g = Mat::Zero(2 * m, 2 * m);
    for (int j = 0; j < m; ++j) {
        const double a = weights[static_cast<std::size_t>(j)] * theta;
        g(2 * j, 2 * j) = std::cos(a);
        g(2 * j, 2 * j + 1) = -std::sin(a);
        g(2 * j + 1, 2 * j) = std::sin(a);
        g(2 * j + 1, 2 * j + 1) = std::cos(a);
    }
    return g;
}

VectorField group_average(const VectorField& field, const GroupAction& action) {
    action.validate();
    VectorField out;
    out.domain = field.domain;
    if (action.kind == GroupAction::Kind::finite) {
        auto elems = std::make_shared<std::vector<Mat>>(action.elements());
        out.eval = [field, elems](const Vec& p) {
            Vec acc = Vec::Zero(p.size());
            for (const Mat& g : *elems) acc += g.transpose() * field.eval(g * p);
            return Vec(acc / static_cast<double>(elems->size()));
        };
    } else {
        constexpr int kNodes = 64;
        auto rots = std::make_shared<std::vector<Mat>>();
        for (int k = 0; k < kNodes; ++k)
            rots->push_back(action.circle_element(2.0 * M_PI * k / kNodes));
        out.eval = [field, rots](const Vec& p) {
            Vec acc = Vec::Zero(p.size());
            for (const Mat& g : *rots) acc += g.transpose() * field.eval(g * p);
            return Vec(acc / static_cast<double>(rots->size()));
        };
    }
    return out;
}

OrbitType orbit_type(const GroupAction& action, const Vec& p) {
    if (!all_finite(p)) throw DomainError("orbit_type: point must be finite");
    constexpr double kFixTol = 1e-10;
    if (action.kind == GroupAction::Kind::circle) {
        // Stabilizer of z under theta . z = (e^{i a_j theta} z_j): full circle
        // iff every weighted coordinate vanishes, else the cyclic group of
        // order gcd over the nonzero coordinates.
        std::vector<int> active;
        for (std::size_t j = 0; j < action.weights.size(); ++j) {
            const double r2 = p[2 * static_cast<int>(j)] * p[2 * static_cast<int>(j)] +
                              p[2 * static_cast<int>(j) + 1] * p[2 * static_cast<int>(j) + 1];
            if (r2 > kFixTol * kFixTol && action.weights[j] != 0)
                active.push_back(std::abs(action.weights[j]));
        }
        if (active.empty()) return {"S1", 0, true};
        int g = 0;
        for (int a : active) g = std::gcd(g, a);
        return {"Z" + std::to_string(g), g, false};
    }

    const auto elems = action.elements();
    std::vector<int> stab;
    for (std::size_t i = 0; i < elems.size(); ++i)
        if ((elems[i] * p - p).norm() <= kFixTol) stab.push_back(static_cast<int>(i));

    if (stab.size() == elems.size()) return {"G", static_cast<int>(elems.size()), true};

    // Canonical conjugacy label: the lexicographically smallest index set
    // among all conjugates of the stabilizer, brute force over the group.
    std::vector<int> best = stab;
    for (const Mat& g : elems) {
        std::vector<int> conj;
        for (int idx : stab) {
            const Mat h = g * elems[static_cast<std::size_t>(idx)] * g.transpose();
            conj.push_back(find_element(elems, h));
        }
        std::sort(conj.begin(), conj.end());
        if (conj < best) best = conj;
    }
    std::vector<int> orders;
    for (int idx : best) orders.push_back(element_order(elems[static_cast<std::size_t>(idx)]));
    std::sort(orders.begin(), orders.end());
    std::ostringstream label;
    label << "H" << stab.size() << "{";
    for (std::size_t i = 0; i < best.size(); ++i) label << (i ? "," : "") << best[i];
    label << "}";
    return {label.str(), static_cast<int>(stab.size()), false};
}

GroupAction d3_action() {
    GroupAction a;
    a.kind = GroupAction::Kind::finite;
    Mat rot(2, 2), refl(2, 2);
    const double c = std::cos(2.0 * M_PI / 3.0), s = std::sin(2.0 * M_PI / 3.0);
    rot << c, -s, s, c;
    refl << 1, 0, 0, -1;
    a.generators = {rot, refl};
    return a;
}

GroupAction circle_action(std::vector<int> weights, double shift) {
    GroupAction a;
    a.kind = GroupAction::Kind::circle;
    a.weights = std::move(weights);
    a.shift = shift;
    return a;
}

}  // namespace stratkit
