#include "blm/legendre.hpp"

#include <array>
#include <cstdint>
#include <mutex>
#include <stdexcept>

namespace blm {
namespace {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

std::vector<double> build_coeffs(int k) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1);
    for (int l = 0; l <= k; ++l) {
        // p_{k,l} = (-1)^{k+l} (k+l)! / ((l!)^2 (k-l)!) = (-1)^{k+l} C(k,l) C(k+l,l)
        const std::int64_t mag = binomial(k, l) * binomial(k + l, l);
        c[static_cast<std::size_t>(l)] = ((k + l) % 2 == 0) ? static_cast<double>(mag)
                                                            : -static_cast<double>(mag);
    }
    return c;
}

void check_degree(int k) {
    if (k < 0 || k > ShiftedLegendre::kMaxDegree)
        throw std::invalid_argument("ShiftedLegendre: degree out of range [0,20]");
}

void check_domain(double u) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("ShiftedLegendre: argument outside [0,1]");
}

}  // namespace

const std::vector<double>& ShiftedLegendre::coeffs(int k) {
    check_degree(k);
    static std::array<std::vector<double>, kMaxDegree + 1> table;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int d = 0; d <= kMaxDegree; ++d) table[static_cast<std::size_t>(d)] = build_coeffs(d);
    });
    return table[static_cast<std::size_t>(k)];
}

double ShiftedLegendre::eval(int k, double u) {
    check_domain(u);
    const auto& c = coeffs(k);
    double v = 0.0;
    for (int l = k; l >= 0; --l) v = v * u + c[static_cast<std::size_t>(l)];
    return v;
}

double ShiftedLegendre::eval_derivative(int k, double u) {
    check_domain(u);
    const auto& c = coeffs(k);
    double v = 0.0;
    for (int l = k; l >= 1; --l) v = v * u + l * c[static_cast<std::size_t>(l)];
    return v;
}

}  // namespace blm
