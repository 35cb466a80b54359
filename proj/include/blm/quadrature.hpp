#pragma once

#include <functional>
#include <vector>

namespace blm {

// Gauss-Legendre rule mapped to [0,1]. Nodes/weights are computed once per
// order by Newton iteration on the standard Legendre recurrence and cached.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendre& rule(int order);

    double integrate(const std::function<double(double)>& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }

    // tensor rule over the unit square
    double integrate2d(const std::function<double(double, double)>& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < nodes.size(); ++j) row += weights[j] * f(nodes[i], nodes[j]);
            s += weights[i] * row;
        }
        return s;
    }
};

// Integrates with the given order and re-checks at double the order.
// Throws std::runtime_error if the two results differ by more than tol.
double integrate2d_checked(const std::function<double(double, double)>& f, int order = 64,
                           double tol = 1e-7);

}  // namespace blm
