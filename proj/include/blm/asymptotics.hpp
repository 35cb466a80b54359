#pragma once

#include <cstdint>
#include <vector>

#include "blm/copula.hpp"

namespace blm {

using Matrix = std::vector<std::vector<double>>;

// A0^-1 Sigma0 A0^-T pieces of the estimator's limiting covariance
struct SandwichCov {
    Matrix a0;
    Matrix sigma0;
    Matrix sigma2;
};

// Jacobian of the expected score map for the one- and two-parameter FGM
// families (constant in the parameters); determinant 1/2160 in the 2x2 case
Matrix a0_fgm(Family f);

// closed-form influence covariance for the two-parameter FGM family
Matrix sigma0_fgm2(double alpha, double beta);

// closed-form limiting covariance for the same family, kept verbatim as a
// cross-check target (see README on the off-diagonal sign)
Matrix sigma2_fgm2_published(double alpha, double beta);

// A0^{-1} Sigma0 A0^{-T} by direct solves; throws on singular A0
Matrix sandwich_cov(const Matrix& a0, const Matrix& sigma0);

SandwichCov sandwich_fgm2(double alpha, double beta);

// limiting variance of the one-parameter FGM estimate, as published;
// the numeric influence oracle is the ground truth when they disagree
double asymptotic_var_fgm1(double alpha0);

// Monte Carlo influence covariance: draws from the model, evaluates the
// influence vector with the rank-correction integrals precomputed on a
// quadrature grid, returns the sample covariance. Independent oracle for
// the closed forms above.
Matrix influence_cov_numeric(const CopulaModel& m, int r, std::size_t mc_n, std::uint64_t seed);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// estimate_k +/- z_{(1+level)/2} sqrt(cov_kk / n)
std::vector<Interval> wald_ci(const std::vector<double>& estimate, const Matrix& cov,
                              std::size_t n, double level);

// inverse standard normal cdf (Acklam's rational approximation, |err| < 1.2e-9)
double normal_quantile(double p);

}  // namespace blm
