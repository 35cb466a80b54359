#include "blm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace blm {
namespace {

GaussLegendre build_rule(int order) {
    if (order < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
    GaussLegendre r;
    r.nodes.resize(static_cast<std::size_t>(order));
    r.weights.resize(static_cast<std::size_t>(order));
    const int n = order;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess for the i-th root on [-1,1]
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        // map [-1,1] -> [0,1]
        r.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        r.weights[static_cast<std::size_t>(i)] = 0.5 * w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
    return r;
}

}  // namespace

const GaussLegendre& GaussLegendre::rule(int order) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

double integrate2d_checked(const std::function<double(double, double)>& f, int order, double tol) {
    const double coarse = GaussLegendre::rule(order).integrate2d(f);
    const double fine = GaussLegendre::rule(2 * order).integrate2d(f);
    if (std::abs(coarse - fine) > tol)
        throw std::runtime_error("quadrature refinement check failed: result not converged");
    return fine;
}

}  // namespace blm
