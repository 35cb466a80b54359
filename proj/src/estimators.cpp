#include "blm/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "blm/legendre.hpp"
#include "blm/nelder_mead.hpp"
#include "blm/quadrature.hpp"

namespace blm {
namespace {

constexpr int kSolverQuadOrder = 32;
constexpr double kNewtonResidTol = 1e-8;
constexpr double kPenaltyFeasTol = 1e-8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ParamBox {
    std::vector<double> lo, hi;
};

ParamBox param_box(Family f) {
    switch (f) {
        case Family::Gumbel1: return {{1.0}, {25.0}};
        case Family::Gumbel2: return {{1.0, 1e-6}, {25.0, 10.0}};
        case Family::Clayton: return {{1e-6}, {50.0}};
        case Family::Frank:   return {{1e-6}, {50.0}};
        default: throw std::invalid_argument("param_box: no search box for this family");
    }
}

std::vector<std::vector<double>> default_starts(Family f) {
    switch (f) {
        case Family::Gumbel1: return {{1.5}, {3.0}, {1.05}};
        case Family::Gumbel2: return {{1.5, 0.5}, {3.0, 1.5}, {1.05, 0.05}};
        case Family::Clayton: return {{1.0}, {4.0}, {0.2}};
        case Family::Frank:   return {{2.0}, {8.0}, {0.5}};
        default: return {};
    }
}

std::vector<double> clamp_box(std::vector<double> p, const ParamBox& box) {
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = std::min(box.hi[k], std::max(box.lo[k], p[k]));
    return p;
}

// delta map k=1..r through the solver-order quadrature (no refinement check)
std::vector<double> delta_map(Family f, const std::vector<double>& p, std::size_t r) {
    const auto eval = CopulaEval::unchecked({f, p});
    std::vector<double> d(r);
    for (std::size_t k = 0; k < r; ++k)
        d[k] = delta_quadrature(eval, static_cast<int>(k) + 1, Direction::D12, kSolverQuadOrder);
    return d;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Gaussian elimination with partial pivoting, in place; r <= 3
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t r = b.size();
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < r; ++i)
            if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
        if (std::abs(a[piv][col]) < 1e-300) throw std::runtime_error("singular Jacobian");
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

// damped Newton on a generic map G(p) = target, boxed; returns best point
struct NewtonOutcome {
    std::vector<double> p;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

NewtonOutcome damped_newton(const std::function<std::vector<double>(const std::vector<double>&)>& map,
                            const std::vector<double>& target, const ParamBox& box,
                            std::vector<double> p, double tol) {
    const std::size_t r = target.size();
    auto resid = [&](const std::vector<double>& q) {
        auto v = map(q);
        for (std::size_t k = 0; k < r; ++k) v[k] -= target[k];
        return v;
    };
    NewtonOutcome out;
    p = clamp_box(std::move(p), box);
    auto F = resid(p);
    double fn = inf_norm(F);
    out.p = p;
    out.residual = fn;
    for (int it = 0; it < 80; ++it) {
        ++out.iterations;
        if (fn <= tol) {
            out.converged = true;
            break;
        }
        std::vector<std::vector<double>> J(r, std::vector<double>(r));
        for (std::size_t k = 0; k < r; ++k) {
            const double h = 1e-5 * (1.0 + std::abs(p[k]));
            auto ph = p;
            ph[k] = std::min(box.hi[k], p[k] + h);
            const auto Fh = resid(ph);
            const double hh = ph[k] - p[k];
            for (std::size_t i = 0; i < r; ++i) J[i][k] = (Fh[i] - F[i]) / hh;
        }
        std::vector<double> step;
        try {
            step = solve_linear(J, F);
        } catch (const std::runtime_error&) {
            break;
        }
        double lambda = 1.0;
        bool improved = false;
        for (int half = 0; half < 25; ++half) {
            auto trial = p;
            for (std::size_t k = 0; k < r; ++k) trial[k] -= lambda * step[k];
            trial = clamp_box(std::move(trial), box);
            const auto Ft = resid(trial);
            const double fnt = inf_norm(Ft);
            if (fnt < fn) {
                double moved = 0.0;
                for (std::size_t k = 0; k < r; ++k) moved = std::max(moved, std::abs(trial[k] - p[k]));
                p = std::move(trial);
                F = Ft;
                fn = fnt;
                improved = true;
                if (moved < 1e-13) it = 80;  // pinned to the box face
                break;
            }
            lambda *= 0.5;
        }
        if (fn < out.residual) {
            out.p = p;
            out.residual = fn;
        }
        if (!improved) break;
    }
    if (fn <= tol) {
        out.converged = true;
        out.p = p;
        out.residual = fn;
    }
    return out;
}

bool params_in_region(Family f, const std::vector<double>& p) {
    return validate_params({f, p}).empty();
}

// ---- penalty machinery for the constrained optimizers ----

double region_penalty(const std::vector<RegionConstraint>& cons, const std::vector<double>& p) {
    double s = 0.0;
    for (const auto& c : cons) {
        const double v = c.value(p);
        if (v < 0.0) s += v * v;
    }
    return s;
}

double max_violation(const std::vector<RegionConstraint>& cons, const std::vector<double>& p) {
    double m = 0.0;
    for (const auto& c : cons) m = std::max(m, -std::min(0.0, c.value(p)));
    return m;
}

struct PenalizedFit {
    std::vector<double> x;
    double objective = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool feasible = false;
};

PenalizedFit minimize_penalized(const std::function<double(const std::vector<double>&)>& raw_obj,
                                Family family, const std::vector<std::vector<double>>& starts) {
    const auto cons = region_constraints(family);
    PenalizedFit best;
    for (const auto& start : starts) {
        double w = 1e3;
        std::vector<double> x = start;
        int iters = 0;
        bool nm_ok = false;
        for (int round = 0; round < 10; ++round) {
            auto pen_obj = [&](const std::vector<double>& p) {
                double g = raw_obj(p);
                if (!std::isfinite(g)) g = 1e8;
                return g + w * region_penalty(cons, p);
            };
            auto nm = nelder_mead(pen_obj, x, round == 0 ? 0.1 : 0.02);
            x = nm.x;
            iters += nm.iterations;
            nm_ok = nm.converged;
            if (max_violation(cons, x) < kPenaltyFeasTol) break;
            w *= 10.0;
        }
        PenalizedFit fit;
        fit.x = x;
        fit.objective = raw_obj(x);
        fit.iterations = iters;
        fit.feasible = max_violation(cons, x) < kPenaltyFeasTol;
        fit.converged = nm_ok && fit.feasible && std::isfinite(fit.objective);
        const bool better = (fit.feasible && !best.feasible) ||
                            (fit.feasible == best.feasible && fit.objective < best.objective);
        if (better) best = fit;
    }
    return best;
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::BLM:       return "blm";
        case Method::TauRhoInv: return "taurho";
        case Method::MD:        return "md";
        case Method::PML:       return "pml";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::BLM, Method::TauRhoInv, Method::MD, Method::PML})
        if (name == method_name(m)) return m;
    throw std::invalid_argument("unknown estimation method: " + name);
}

std::vector<double> project_into_region(Family family, std::vector<double> raw) {
    const int r = param_count(family);
    if (static_cast<int>(raw.size()) != r)
        throw std::invalid_argument("project_into_region: wrong parameter count");

    std::vector<double> anchor;
    switch (family) {
        case Family::Product:  return raw;
        case Family::FGM1:
            anchor = {0.0};
            raw[0] = std::clamp(raw[0], -0.999, 0.999);
            break;
        case Family::FGMIter1:
            anchor = {0.0, 0.0};
            raw[0] = std::clamp(raw[0], -0.999, 0.999);
            raw[1] = std::clamp(raw[1], -1.999, 1.999);
            break;
        case Family::FGMIter2:
            anchor = {0.0, 0.0, 0.0};
            raw[0] = std::clamp(raw[0], -0.999, 0.999);
            raw[1] = std::clamp(raw[1], -1.999, 1.999);
            raw[2] = std::clamp(raw[2], -3.999, 3.999);
            break;
        case Family::Gumbel1:
            return {std::clamp(raw[0], 1.0, 25.0)};
        case Family::Gumbel2:
            return {std::clamp(raw[0], 1.0, 25.0), std::clamp(raw[1], 1e-3, 10.0)};
        case Family::Clayton:
            return {std::clamp(raw[0], 1e-3, 50.0)};
        case Family::Frank: {
            const double s = raw[0] < 0.0 ? -1.0 : 1.0;
            return {s * std::clamp(std::abs(raw[0]), 1e-3, 50.0)};
        }
    }
    if (params_in_region(family, raw)) return raw;
    // blend toward the interior anchor until admissible
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double t = 0.5 * (lo + hi);
        std::vector<double> p(raw.size());
        for (std::size_t k = 0; k < p.size(); ++k)
            p[k] = (1.0 - t) * raw[k] + t * anchor[k];
        if (params_in_region(family, p))
            hi = t;
        else
            lo = t;
    }
    const double t = std::min(1.0, hi + 1e-3);
    std::vector<double> p(raw.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = (1.0 - t) * raw[k] + t * anchor[k];
    return p;
}

BlmSystemSolution solve_blm_system(Family family, const std::vector<double>& delta_hat,
                                   const std::vector<double>& init) {
    const std::size_t r = delta_hat.size();
    if (static_cast<int>(r) != param_count(family))
        throw std::invalid_argument("solve_blm_system: dimension mismatch");
    const auto box = param_box(family);
    auto map = [&](const std::vector<double>& p) { return delta_map(family, p, r); };

    std::vector<std::vector<double>> starts;
    if (!init.empty()) starts.push_back(clamp_box(init, box));
    for (auto& s : default_starts(family)) starts.push_back(std::move(s));

    BlmSystemSolution best;
    for (const auto& s : starts) {
        const auto out = damped_newton(map, delta_hat, box, s, kNewtonResidTol);
        best.iterations += out.iterations;
        if (out.residual < best.residual) {
            best.params = out.p;
            best.residual = out.residual;
            best.converged = out.converged;
        }
        if (best.converged) break;
    }
    return best;
}

EstimationResult blm_estimate(const PseudoSample& ps, Family family, Direction dir) {
    const auto t0 = Clock::now();
    const int r = param_count(family);
    if (r == 0) throw std::invalid_argument("blm_estimate: family has no parameters");

    std::vector<double> dh(static_cast<std::size_t>(r));
    for (int k = 1; k <= r; ++k) dh[static_cast<std::size_t>(k - 1)] = empirical_delta(ps, k, dir);

    EstimationResult res;
    res.family = family;
    res.method = Method::BLM;
    switch (family) {
        case Family::FGM1:
            res.estimate = {18.0 * dh[0]};
            res.solved = true;
            break;
        case Family::FGMIter1:
            res.estimate = {18.0 * dh[0] - 30.0 * dh[1], 120.0 * dh[1]};
            res.solved = true;
            break;
        case Family::FGMIter2: {
            const double a3 = -1050.0 * dh[2];
            res.estimate = {18.0 * dh[0] - 30.0 * dh[1] - a3 / 25.0, 120.0 * dh[1], a3};
            res.solved = true;
            break;
        }
        default: {
            const auto sol = solve_blm_system(family, dh);
            res.estimate = sol.params;
            // accept the least-residual point when the observed L-moments sit
            // just off the attainable image (common at small n)
            res.solved = sol.converged || sol.residual <= 1e-4;
            res.iterations = sol.iterations;
            res.objective_value = sol.residual;
            break;
        }
    }
    res.in_region = params_in_region(family, res.estimate);
    res.converged = res.solved && res.in_region;
    res.wall_time = seconds_since(t0);
    return res;
}

EstimationResult tau_rho_inversion(const PseudoSample& ps, Family family) {
    const auto t0 = Clock::now();
    const int r = param_count(family);
    if (r == 0 || r > 2)
        throw std::invalid_argument("tau_rho_inversion: supports 1- and 2-parameter families only");

    const double rho_hat = empirical_concordance(ps, ConcordanceMeasure::Rho);

    EstimationResult res;
    res.family = family;
    res.method = Method::TauRhoInv;
    switch (family) {
        case Family::FGM1:
            // rho = alpha/3
            res.estimate = {3.0 * rho_hat};
            res.solved = true;
            break;
        case Family::FGMIter1: {
            // substitute alpha1 = 3 rho - alpha2/4 into the tau relation:
            // alpha2^2 - 12 rho alpha2 + 1800 (tau - 2 rho/3) = 0
            const double tau_hat = empirical_concordance(ps, ConcordanceMeasure::Tau);
            const double disc =
                36.0 * rho_hat * rho_hat - 1800.0 * (tau_hat - 2.0 * rho_hat / 3.0);
            double a2;
            if (disc >= 0.0) {
                const double s = std::sqrt(disc);
                const double c1 = 6.0 * rho_hat - s, c2 = 6.0 * rho_hat + s;
                auto alpha1_of = [&](double a) { return 3.0 * rho_hat - a / 4.0; };
                const bool in1 = params_in_region(family, {alpha1_of(c1), c1});
                const bool in2 = params_in_region(family, {alpha1_of(c2), c2});
                if (in1 == in2)
                    a2 = std::abs(c1) <= std::abs(c2) ? c1 : c2;
                else
                    a2 = in1 ? c1 : c2;
                res.solved = true;
            } else {
                a2 = 6.0 * rho_hat;  // least-residual point of the quadratic
                res.solved = false;
            }
            res.estimate = {3.0 * rho_hat - a2 / 4.0, a2};
            break;
        }
        case Family::Gumbel2: {
            // match (tau, rho); tau through the generator integral, rho by
            // quadrature of the cdf
            const double tau_hat = empirical_concordance(ps, ConcordanceMeasure::Tau);
            const auto& tau_rule = GaussLegendre::rule(64);
            const auto& rho_rule = GaussLegendre::rule(kSolverQuadOrder);
            auto map = [&](const std::vector<double>& p) {
                const CopulaModel m{family, p};
                const auto gen = make_generator(m);
                const double tau =
                    1.0 + 4.0 * tau_rule.integrate([&](double t) { return gen.phi(t) / gen.dphi(t); });
                const auto eval = CopulaEval::unchecked(m);
                const double rho =
                    12.0 * rho_rule.integrate2d([&](double u, double v) { return eval.cdf(u, v); }) -
                    3.0;
                return std::vector<double>{tau, rho};
            };
            const auto box = param_box(family);
            NewtonOutcome best;
            for (const auto& s : default_starts(family)) {
                const auto out = damped_newton(map, {tau_hat, rho_hat}, box, s, 1e-9);
                res.iterations += out.iterations;
                if (out.residual < best.residual) best = out;
                if (best.converged) break;
            }
            // the (tau, rho) image of this family is a thin manifold, so the
            // sample moments often sit off it and no exact root exists; the
            // estimate is then the least-squares nearest point on the image,
            // found by direct minimisation of the squared residual over the box
            if (!best.converged) {
                auto sq_resid = [&](const std::vector<double>& p) {
                    const auto q = clamp_box(p, box);
                    const auto f = map(q);
                    const double r0 = f[0] - tau_hat, r1 = f[1] - rho_hat;
                    double pen = 0.0;
                    for (std::size_t k = 0; k < p.size(); ++k)
                        pen += (p[k] - q[k]) * (p[k] - q[k]);
                    return r0 * r0 + r1 * r1 + 1e3 * pen;
                };
                std::vector<std::vector<double>> refine_starts = default_starts(family);
                if (!best.p.empty()) refine_starts.insert(refine_starts.begin(), best.p);
                double best_val = best.residual * best.residual;
                for (const auto& s : refine_starts) {
                    const auto nm = nelder_mead(sq_resid, s, 0.2, 400);
                    res.iterations += nm.iterations;
                    if (nm.value < best_val) {
                        best_val = nm.value;
                        best.p = clamp_box(nm.x, box);
                        best.residual = std::sqrt(std::max(0.0, nm.value));
                    }
                }
            }
            res.estimate = best.p;
            res.solved = !best.p.empty() && std::isfinite(best.residual);
            res.objective_value = best.residual;
            break;
        }
        default: {
            // one-parameter Archimedean: rho(theta) is increasing; bisect
            const auto box = param_box(family);
            const auto& rho_rule = GaussLegendre::rule(kSolverQuadOrder);
            auto rho_of = [&](double th) {
                const auto eval = CopulaEval::unchecked({family, {th}});
                return 12.0 * rho_rule.integrate2d(
                                  [&](double u, double v) { return eval.cdf(u, v); }) -
                       3.0;
            };
            double lo = box.lo[0], hi = box.hi[0];
            const double rlo = rho_of(lo), rhi = rho_of(hi);
            if (rho_hat <= rlo) {
                res.estimate = {lo};
                res.solved = false;
            } else if (rho_hat >= rhi) {
                res.estimate = {hi};
                res.solved = false;
            } else {
                for (int it = 0; it < 100 && hi - lo > 1e-10 * (1.0 + hi); ++it) {
                    ++res.iterations;
                    const double mid = 0.5 * (lo + hi);
                    if (rho_of(mid) < rho_hat)
                        lo = mid;
                    else
                        hi = mid;
                }
                res.estimate = {0.5 * (lo + hi)};
                res.solved = true;
            }
            break;
        }
    }
    res.in_region = params_in_region(family, res.estimate);
    res.converged = res.solved && res.in_region;
    res.wall_time = seconds_since(t0);
    return res;
}

EstimationResult md_estimate(const PseudoSample& ps, Family family) {
    const auto t0 = Clock::now();
    if (param_count(family) == 0)
        throw std::invalid_argument("md_estimate: family has no parameters");
    const std::size_t n = ps.size();
    std::vector<double> cn(n);
    for (std::size_t i = 0; i < n; ++i)
        cn[i] = empirical_copula(ps, ps.pairs[i][0], ps.pairs[i][1]);

    auto objective = [&](const std::vector<double>& p) {
        CopulaEval eval = CopulaEval::unchecked({family, p});
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = eval.cdf(ps.pairs[i][0], ps.pairs[i][1]);
            if (!std::isfinite(c)) return 1e8;
            const double d = cn[i] - c;
            s += d * d;
        }
        return s / static_cast<double>(n);
    };

    const auto start = project_into_region(family, blm_estimate(ps, family).estimate);
    const auto fit = minimize_penalized(objective, family, {start});

    EstimationResult res;
    res.family = family;
    res.method = Method::MD;
    res.estimate = fit.x;
    res.solved = fit.feasible && std::isfinite(fit.objective);
    res.objective_value = fit.objective;
    res.iterations = fit.iterations;
    res.in_region = params_in_region(family, res.estimate);
    res.converged = fit.converged && res.in_region;
    res.wall_time = seconds_since(t0);
    return res;
}

EstimationResult pml_estimate(const PseudoSample& ps, Family family) {
    const auto t0 = Clock::now();
    if (param_count(family) == 0)
        throw std::invalid_argument("pml_estimate: family has no parameters");
    const std::size_t n = ps.size();
    const auto cons = region_constraints(family);

    auto objective = [&](const std::vector<double>& p) {
        CopulaEval eval = CopulaEval::unchecked({family, p});
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = eval.density(ps.pairs[i][0], ps.pairs[i][1]);
            if (!(c > 0.0) || !std::isfinite(c)) {
                if (max_violation(cons, p) <= 1e-9 && params_in_region(family, p))
                    throw std::runtime_error(
                        "pml_estimate: non-positive density at admissible parameters");
                return 1e8;
            }
            s -= std::log(c);
        }
        return s / static_cast<double>(n);
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(project_into_region(family, blm_estimate(ps, family).estimate));
    switch (family) {
        case Family::FGM1:     starts.push_back({0.1}); starts.push_back({0.5}); break;
        case Family::FGMIter1: starts.push_back({0.1, 0.1}); starts.push_back({0.5, 0.5}); break;
        case Family::FGMIter2:
            starts.push_back({0.1, 0.1, 0.1});
            starts.push_back({0.5, 0.5, 0.5});
            break;
        default:
            for (auto& s : default_starts(family)) starts.push_back(std::move(s));
            starts.resize(3);
            break;
    }

    const auto fit = minimize_penalized(objective, family, starts);

    EstimationResult res;
    res.family = family;
    res.method = Method::PML;
    res.estimate = fit.x;
    res.solved = fit.feasible && std::isfinite(fit.objective);
    res.objective_value = fit.objective;
    res.iterations = fit.iterations;
    res.in_region = params_in_region(family, res.estimate);
    res.converged = fit.converged && res.in_region;
    res.wall_time = seconds_since(t0);
    return res;
}

EstimationResult estimate(const PseudoSample& ps, Family family, Method method, Direction dir) {
    switch (method) {
        case Method::BLM:       return blm_estimate(ps, family, dir);
        case Method::TauRhoInv: return tau_rho_inversion(ps, family);
        case Method::MD:        return md_estimate(ps, family);
        case Method::PML:       return pml_estimate(ps, family);
    }
    throw std::logic_error("estimate: unknown method");
}

double cls_score(double u, double v, const CopulaModel& m, int k) {
    const double dk =
        has_closed_form_delta(m.family, k) ? closed_form_delta_fgm(m, k) : theoretical_delta(m, k);
    return u * ShiftedLegendre::eval(k, v) - dk;
}

}  // namespace blm
