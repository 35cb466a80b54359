#include "blm/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "blm/legendre.hpp"
#include "blm/quadrature.hpp"

namespace blm {
namespace {

// average ranks (1-based); ties get the mean of their rank run
std::vector<double> average_ranks(const std::vector<double>& x, bool* had_ties) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        if (j > i && had_ties) *had_ties = true;
        for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

PseudoSample pseudo_observations(const std::vector<std::array<double, 2>>& raw) {
    const std::size_t n = raw.size();
    if (n < 2) throw std::invalid_argument("pseudo_observations: need at least 2 observations");
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = raw[i][0];
        y[i] = raw[i][1];
    }
    PseudoSample ps;
    const auto rx = average_ranks(x, &ps.had_ties);
    const auto ry = average_ranks(y, &ps.had_ties);
    const double scale = 1.0 / (static_cast<double>(n) + 1.0);
    ps.pairs.resize(n);
    for (std::size_t i = 0; i < n; ++i) ps.pairs[i] = {rx[i] * scale, ry[i] * scale};
    return ps;
}

PseudoSample pseudo_sample_from_ranks(std::vector<std::array<double, 2>> pairs) {
    for (const auto& p : pairs)
        if (!(p[0] > 0.0 && p[0] < 1.0 && p[1] > 0.0 && p[1] < 1.0))
            throw std::invalid_argument("pseudo_sample_from_ranks: values must lie in (0,1)");
    PseudoSample ps;
    ps.pairs = std::move(pairs);
    return ps;
}

double empirical_copula(const PseudoSample& ps, double u, double v) {
    if (ps.pairs.empty()) throw std::invalid_argument("empirical_copula: empty sample");
    std::size_t count = 0;
    for (const auto& p : ps.pairs)
        if (p[0] <= u && p[1] <= v) ++count;
    return static_cast<double>(count) / static_cast<double>(ps.size());
}

double empirical_delta(const PseudoSample& ps, int k, Direction dir) {
    if (k < 1) throw std::invalid_argument("empirical_delta: order must be >= 1");
    double s = 0.0;
    for (const auto& p : ps.pairs) {
        const double a = (dir == Direction::D12) ? p[0] : p[1];
        const double b = (dir == Direction::D12) ? p[1] : p[0];
        s += a * ShiftedLegendre::eval(k, b);
    }
    return s / static_cast<double>(ps.size());
}

double delta_quadrature(const CopulaEval& eval, int k, Direction dir, int order) {
    const auto& rule = GaussLegendre::rule(order);
    const std::size_t m = rule.nodes.size();
    std::vector<double> dp(m);
    for (std::size_t j = 0; j < m; ++j) dp[j] = ShiftedLegendre::eval_derivative(k, rule.nodes[j]);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double u = rule.nodes[i];
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double v = rule.nodes[j];
            const double c = (dir == Direction::D12) ? eval.cdf(u, v) : eval.cdf(v, u);
            row += rule.weights[j] * (c - u * v) * dp[j];
        }
        s += rule.weights[i] * row;
    }
    return s;
}

bool has_closed_form_delta(Family f, int k) {
    switch (f) {
        case Family::Product:  return k >= 1;
        case Family::FGM1:     return k == 1;
        case Family::FGMIter1: return k == 1 || k == 2;
        case Family::FGMIter2: return k >= 1 && k <= 3;
        default: return false;
    }
}

double closed_form_delta_fgm(const CopulaModel& m, int k) {
    if (!has_closed_form_delta(m.family, k))
        throw std::invalid_argument("closed_form_delta_fgm: unsupported family/order");
    const auto& p = m.params;
    switch (m.family) {
        case Family::Product:
            return 0.0;
        case Family::FGM1:
            return p[0] / 18.0;
        case Family::FGMIter1:
            return (k == 1) ? p[0] / 18.0 + p[1] / 72.0 : p[1] / 120.0;
        case Family::FGMIter2:
            if (k == 1) return p[0] / 18.0 + p[1] / 72.0 + p[2] / 450.0;
            if (k == 2) return p[1] / 120.0;
            return -p[2] / 1050.0;
        default:
            return 0.0;  // unreachable
    }
}

double theoretical_delta(const CopulaModel& m, int k, Direction dir) {
    require_valid(m);
    if (k < 1 || k > ShiftedLegendre::kMaxDegree)
        throw std::invalid_argument("theoretical_delta: order out of range");
    if (has_closed_form_delta(m.family, k)) return closed_form_delta_fgm(m, k);
    CopulaEval eval(m);
    const double coarse = delta_quadrature(eval, k, dir, 64);
    const double fine = delta_quadrature(eval, k, dir, 128);
    if (std::abs(coarse - fine) > 1e-7)
        throw std::runtime_error("theoretical_delta: quadrature did not converge");
    return fine;
}

double concordance(const CopulaModel& m, ConcordanceMeasure which) {
    require_valid(m);
    if (m.family == Family::FGMIter1) {
        const double a1 = m.params[0], a2 = m.params[1];
        if (which == ConcordanceMeasure::Rho) return a1 / 3.0 + a2 / 12.0;
        if (which == ConcordanceMeasure::Tau)
            return 2.0 * a1 / 9.0 + a2 / 18.0 + a1 * a2 / 450.0;
    }
    CopulaEval eval(m);
    const auto& r1 = GaussLegendre::rule(256);
    switch (which) {
        case ConcordanceMeasure::Rho:
            return 12.0 * integrate2d_checked(
                              [&](double u, double v) { return eval.cdf(u, v); }, 64, 1e-7) -
                   3.0;
        case ConcordanceMeasure::Tau:
            if (is_archimedean(m.family)) {
                const auto gen = make_generator(m);
                return 1.0 +
                       4.0 * r1.integrate([&](double t) { return gen.phi(t) / gen.dphi(t); });
            }
            return 4.0 * integrate2d_checked(
                             [&](double u, double v) { return eval.cdf(u, v) * eval.density(u, v); },
                             64, 1e-7) -
                   1.0;
        case ConcordanceMeasure::Gamma:
            return 4.0 * (r1.integrate([&](double t) { return eval.cdf(t, 1.0 - t); }) +
                          r1.integrate([&](double t) { return eval.cdf(t, t); })) -
                   2.0;
        case ConcordanceMeasure::Footrule:
            // 1 - 3 E|U-V| reduces to 6 int C(t,t) dt - 2
            return 6.0 * r1.integrate([&](double t) { return eval.cdf(t, t); }) - 2.0;
    }
    throw std::logic_error("concordance: unknown measure");
}

double empirical_concordance(const PseudoSample& ps, ConcordanceMeasure which) {
    const std::size_t n = ps.size();
    if (n < 2) throw std::invalid_argument("empirical_concordance: need at least 2 observations");
    if (which == ConcordanceMeasure::Tau) {
        long long s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double du = ps.pairs[i][0] - ps.pairs[j][0];
                const double dv = ps.pairs[i][1] - ps.pairs[j][1];
                const double prod = du * dv;
                if (prod > 0.0)
                    ++s;
                else if (prod < 0.0)
                    --s;
            }
        return 2.0 * static_cast<double>(s) / (static_cast<double>(n) * (n - 1.0));
    }
    if (which == ConcordanceMeasure::Rho) {
        // Pearson correlation of the rescaled ranks
        double mu = 0.0, mv = 0.0;
        for (const auto& p : ps.pairs) {
            mu += p[0];
            mv += p[1];
        }
        mu /= static_cast<double>(n);
        mv /= static_cast<double>(n);
        double suv = 0.0, suu = 0.0, svv = 0.0;
        for (const auto& p : ps.pairs) {
            suv += (p[0] - mu) * (p[1] - mv);
            suu += (p[0] - mu) * (p[0] - mu);
            svv += (p[1] - mv) * (p[1] - mv);
        }
        return suv / std::sqrt(suu * svv);
    }
    throw std::invalid_argument("empirical_concordance: only tau and rho have sample versions");
}

}  // namespace blm
