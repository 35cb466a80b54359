#include "blm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "blm/dependence.hpp"
#include "blm/legendre.hpp"
#include "blm/quadrature.hpp"
#include "blm/rng.hpp"

namespace blm {
namespace {

Matrix zeros(std::size_t r) { return Matrix(r, std::vector<double>(r, 0.0)); }

// Gaussian elimination solve for the r <= 3 matrices used here
std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const std::size_t r = b.size();
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < r; ++i)
            if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
        if (std::abs(a[piv][col]) < 1e-300) throw std::runtime_error("singular matrix");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t i = col + 1; i < r; ++i) {
            const double m = a[i][col] / a[col][col];
            for (std::size_t j = col; j < r; ++j) a[i][j] -= m * a[col][j];
            b[i] -= m * b[col];
        }
    }
    std::vector<double> x(r);
    for (std::size_t ii = r; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < r; ++j) s -= a[ii][j] * x[j];
        x[ii] = s / a[ii][ii];
    }
    return x;
}

double det(const Matrix& a) {
    const std::size_t r = a.size();
    if (r == 1) return a[0][0];
    if (r == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (r == 3)
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    throw std::invalid_argument("det: only r <= 3 supported");
}

}  // namespace

Matrix a0_fgm(Family f) {
    if (f == Family::FGM1) return {{-1.0 / 18.0}};
    if (f == Family::FGMIter1)
        return {{-1.0 / 18.0, -1.0 / 72.0}, {0.0, -1.0 / 120.0}};
    throw std::invalid_argument("a0_fgm: closed form available for the FGM families only");
}

Matrix sigma0_fgm2(double a, double b) {
    Matrix s = zeros(2);
    s[0][0] = a * a / 270.0 + a * b / 540.0 + b * b / 3780.0 + 1.0 / 5.0;
    s[0][1] = b * b / 8640.0 + a * b / 2160.0;
    s[1][0] = s[0][1];
    s[1][1] = a * a / 105.0 + a * b / 252.0 + 17.0 * b * b / 21000.0 + 1.0 / 15.0;
    return s;
}

Matrix sigma2_fgm2_published(double a, double b) {
    Matrix s = zeros(2);
    s[0][0] = 342.0 * a * a / 35.0 + 327.0 * a * b / 70.0 + 263.0 * b * b / 280.0 + 624.0 / 5.0;
    s[0][1] = 240.0 * a * a / 7.0 + 107.0 * a * b / 7.0 + 443.0 * b * b / 140.0 + 240.0;
    s[1][0] = s[0][1];
    s[1][1] = 960.0 * a * a / 7.0 + 400.0 * a * b / 7.0 + 408.0 * b * b / 35.0 + 960.0;
    return s;
}

Matrix sandwich_cov(const Matrix& a0, const Matrix& sigma0) {
    const std::size_t r = a0.size();
    if (sigma0.size() != r) throw std::invalid_argument("sandwich_cov: dimension mismatch");
    if (std::abs(det(a0)) <= 1e-14) throw std::runtime_error("sandwich_cov: singular Jacobian");
    // B = A0^{-1} Sigma0, column by column
    Matrix b = zeros(r);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<double> col(r);
        for (std::size_t i = 0; i < r; ++i) col[i] = sigma0[i][j];
        const auto x = solve_linear(a0, col);
        for (std::size_t i = 0; i < r; ++i) b[i][j] = x[i];
    }
    // Sigma2 = B A0^{-T}: solve A0 z = row_i(B), giving row_i(Sigma2)
    Matrix out = zeros(r);
    for (std::size_t i = 0; i < r; ++i) {
        const auto z = solve_linear(a0, b[i]);
        out[i] = z;
    }
    return out;
}

SandwichCov sandwich_fgm2(double alpha, double beta) {
    SandwichCov sc;
    sc.a0 = a0_fgm(Family::FGMIter1);
    sc.sigma0 = sigma0_fgm2(alpha, beta);
    sc.sigma2 = sandwich_cov(sc.a0, sc.sigma0);
    return sc;
}

double asymptotic_var_fgm1(double alpha0) {
    if (std::abs(alpha0) > 1.0)
        throw std::invalid_argument("asymptotic_var_fgm1: |alpha| <= 1 required");
    return alpha0 * alpha0 / 270.0 + 1.0 / 5.0;
}

Matrix influence_cov_numeric(const CopulaModel& m, int r, std::size_t mc_n, std::uint64_t seed) {
    if (r < 1 || r > ShiftedLegendre::kMaxDegree)
        throw std::invalid_argument("influence_cov_numeric: bad dimension");
    if (mc_n < 2) throw std::invalid_argument("influence_cov_numeric: need at least 2 draws");
    require_valid(m);
    const std::size_t R = static_cast<std::size_t>(r);
    const CopulaEval eval(m);

    // quadrature grid for the rank-correction integrals
    const auto& rule = GaussLegendre::rule(64);
    const std::size_t q = rule.nodes.size();
    std::vector<double> dens(q * q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            dens[i * q + j] = eval.density(rule.nodes[i], rule.nodes[j]);

    // first correction: int P_k(u2) (1{xi1<=u1} - u1) dC  ->  suffix sums in u1
    // second correction: int u1 P_k'(u2) (1{xi2<=u2} - u2) dC -> suffix sums in u2
    std::vector<std::vector<double>> suf1(R, std::vector<double>(q + 1, 0.0));
    std::vector<std::vector<double>> suf2(R, std::vector<double>(q + 1, 0.0));
    std::vector<double> mean1(R, 0.0), mean2(R, 0.0), delta(R, 0.0);
    for (std::size_t k = 0; k < R; ++k) {
        const int kk = static_cast<int>(k) + 1;
        std::vector<double> g(q, 0.0), h(q, 0.0);
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j) {
                const double wc = rule.weights[j] * dens[i * q + j];
                g[i] += wc * ShiftedLegendre::eval(kk, rule.nodes[j]);
            }
        for (std::size_t j = 0; j < q; ++j)
            for (std::size_t i = 0; i < q; ++i)
                h[j] += rule.weights[i] * rule.nodes[i] * dens[i * q + j];
        for (std::size_t j = 0; j < q; ++j)
            h[j] *= ShiftedLegendre::eval_derivative(kk, rule.nodes[j]);
        for (std::size_t i = q; i-- > 0;) {
            suf1[k][i] = suf1[k][i + 1] + rule.weights[i] * g[i];
            suf2[k][i] = suf2[k][i + 1] + rule.weights[i] * h[i];
            mean1[k] += rule.weights[i] * rule.nodes[i] * g[i];
            mean2[k] += rule.weights[i] * rule.nodes[i] * h[i];
        }
        delta[k] = has_closed_form_delta(m.family, kk)
                       ? closed_form_delta_fgm(m, kk)
                       : delta_quadrature(eval, kk, Direction::D12, 64);
    }

    const auto first_at_or_above = [&](double x) {
        return static_cast<std::size_t>(
            std::lower_bound(rule.nodes.begin(), rule.nodes.end(), x) - rule.nodes.begin());
    };

    // chunked draws with derived seeds: deterministic combine regardless of
    // the number of threads
    constexpr std::size_t kChunk = 65536;
    const std::size_t n_chunks = (mc_n + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> chunk_sum(n_chunks, std::vector<double>(R, 0.0));
    std::vector<std::vector<double>> chunk_outer(n_chunks, std::vector<double>(R * R, 0.0));

    const CopulaSampler sampler(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t cs = 0; cs < static_cast<std::ptrdiff_t>(n_chunks); ++cs) {
        const std::size_t c = static_cast<std::size_t>(cs);
        Rng rng(Rng::derive_seed(seed, c));
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(mc_n, lo + kChunk);
        std::vector<double> infl(R);
        for (std::size_t t = lo; t < hi; ++t) {
            const auto xi = sampler.draw(rng);
            const std::size_t i1 = first_at_or_above(xi[0]);
            const std::size_t i2 = first_at_or_above(xi[1]);
            for (std::size_t k = 0; k < R; ++k) {
                const int kk = static_cast<int>(k) + 1;
                infl[k] = xi[0] * ShiftedLegendre::eval(kk, xi[1]) - delta[k] +
                          (suf1[k][i1] - mean1[k]) + (suf2[k][i2] - mean2[k]);
            }
            for (std::size_t a = 0; a < R; ++a) {
                chunk_sum[c][a] += infl[a];
                for (std::size_t b = 0; b < R; ++b) chunk_outer[c][a * R + b] += infl[a] * infl[b];
            }
        }
    }

    std::vector<double> s(R, 0.0);
    Matrix outer = zeros(R);
    for (std::size_t c = 0; c < n_chunks; ++c)
        for (std::size_t a = 0; a < R; ++a) {
            s[a] += chunk_sum[c][a];
            for (std::size_t b = 0; b < R; ++b) outer[a][b] += chunk_outer[c][a * R + b];
        }
    const double n = static_cast<double>(mc_n);
    Matrix cov = zeros(R);
    for (std::size_t a = 0; a < R; ++a)
        for (std::size_t b = 0; b < R; ++b)
            cov[a][b] = (outer[a][b] - s[a] * s[b] / n) / (n - 1.0);
    return cov;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1) required");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double qv = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * qv + c[1]) * qv + c[2]) * qv + c[3]) * qv + c[4]) * qv + c[5]) /
            ((((d[0] * qv + d[1]) * qv + d[2]) * qv + d[3]) * qv + 1.0);
    } else if (p <= phigh) {
        const double qv = p - 0.5;
        const double rr = qv * qv;
        x = (((((a[0] * rr + a[1]) * rr + a[2]) * rr + a[3]) * rr + a[4]) * rr + a[5]) * qv /
            (((((b[0] * rr + b[1]) * rr + b[2]) * rr + b[3]) * rr + b[4]) * rr + 1.0);
    } else {
        const double qv = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * qv + c[1]) * qv + c[2]) * qv + c[3]) * qv + c[4]) * qv + c[5]) /
            ((((d[0] * qv + d[1]) * qv + d[2]) * qv + d[3]) * qv + 1.0);
    }
    // one Halley step against erfc sharpens to near machine precision
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::vector<Interval> wald_ci(const std::vector<double>& estimate, const Matrix& cov,
                              std::size_t n, double level) {
    if (!(level >= 0.0 && level < 1.0))
        throw std::invalid_argument("wald_ci: level in [0,1) required");
    if (cov.size() != estimate.size()) throw std::invalid_argument("wald_ci: dimension mismatch");
    const double z = level == 0.0 ? 0.0 : normal_quantile(0.5 * (1.0 + level));
    std::vector<Interval> out(estimate.size());
    for (std::size_t k = 0; k < estimate.size(); ++k) {
        const double v = cov[k][k];
        if (v < 0.0) throw std::invalid_argument("wald_ci: negative variance");
        const double hw = z * std::sqrt(v / static_cast<double>(n));
        out[k] = {estimate[k] - hw, estimate[k] + hw};
    }
    return out;
}

}  // namespace blm
