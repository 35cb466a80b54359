#pragma once

#include <vector>

namespace blm {

// Shifted Legendre polynomials P_k on [0,1], orthogonal with
// \int_0^1 P_j P_k = delta_{jk}/(2k+1), normalized so P_k(1) = 1.
//
// Coefficients are assembled in exact integer arithmetic
// (p_{k,l} = (-1)^{k+l} C(k,l) C(k+l,l)) and converted to double once.
class ShiftedLegendre {
public:
    static constexpr int kMaxDegree = 20;

    // monomial coefficients of P_k, index l = coefficient of u^l
    static const std::vector<double>& coeffs(int k);

    static double eval(int k, double u);
    static double eval_derivative(int k, double u);
};

}  // namespace blm
