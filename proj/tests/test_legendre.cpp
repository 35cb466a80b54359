#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blm/legendre.hpp"
#include "blm/quadrature.hpp"

using blm::GaussLegendre;
using blm::ShiftedLegendre;

TEST_CASE("low-degree coefficient tables") {
    CHECK(ShiftedLegendre::coeffs(0) == std::vector<double>{1.0});
    CHECK(ShiftedLegendre::coeffs(1) == std::vector<double>{-1.0, 2.0});
    CHECK(ShiftedLegendre::coeffs(2) == std::vector<double>{1.0, -6.0, 6.0});
    CHECK(ShiftedLegendre::coeffs(3) == std::vector<double>{-1.0, 12.0, -30.0, 20.0});
}

TEST_CASE("endpoint values are exact") {
    for (int k = 0; k <= 10; ++k) {
        CHECK(ShiftedLegendre::eval(k, 1.0) == 1.0);
        CHECK(ShiftedLegendre::eval(k, 0.0) == (k % 2 == 0 ? 1.0 : -1.0));
    }
}

TEST_CASE("orthogonality on [0,1]") {
    const auto& rule = GaussLegendre::rule(32);
    for (int j = 0; j <= 6; ++j)
        for (int k = 0; k <= 6; ++k) {
            const double ip = rule.integrate(
                [&](double u) { return ShiftedLegendre::eval(j, u) * ShiftedLegendre::eval(k, u); });
            const double expect = j == k ? 1.0 / (2.0 * k + 1.0) : 0.0;
            CHECK(std::abs(ip - expect) < 1e-10);
        }
}

TEST_CASE("derivative matches a finite difference") {
    const double h = 1e-6;
    for (int k = 1; k <= 8; ++k)
        for (double u : {0.1, 0.3, 0.5, 0.77, 0.9}) {
            const double fd =
                (ShiftedLegendre::eval(k, u + h) - ShiftedLegendre::eval(k, u - h)) / (2.0 * h);
            CHECK(ShiftedLegendre::eval_derivative(k, u) ==
                  doctest::Approx(fd).epsilon(1e-5));
        }
}

TEST_CASE("degree and domain validation") {
    CHECK_THROWS_AS(ShiftedLegendre::coeffs(-1), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedLegendre::coeffs(21), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedLegendre::eval(2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedLegendre::eval(2, -0.1), std::invalid_argument);
}
