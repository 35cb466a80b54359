#include "blm/copula.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blm {
namespace {

constexpr double kBisectTol = 1e-12;
constexpr int kBisectMaxIter = 200;
constexpr double kRegionTol = 1e-12;

bool is_fgm_type(Family f) {
    return f == Family::Product || f == Family::FGM1 || f == Family::FGMIter1 ||
           f == Family::FGMIter2;
}

// FGM-type coefficients (alpha1, alpha2, alpha3), zero when unused
std::array<double, 3> fgm_coeffs(const CopulaModel& m) {
    switch (m.family) {
        case Family::Product:  return {0.0, 0.0, 0.0};
        case Family::FGM1:     return {m.params[0], 0.0, 0.0};
        case Family::FGMIter1: return {m.params[0], m.params[1], 0.0};
        case Family::FGMIter2: return {m.params[0], m.params[1], m.params[2]};
        default: throw std::logic_error("fgm_coeffs: not an FGM-type family");
    }
}

double fgm_cdf(const std::array<double, 3>& a, double u, double v) {
    const double ub = 1.0 - u, vb = 1.0 - v;
    return u * v *
           (1.0 + a[0] * ub * vb + a[1] * u * v * ub * vb + a[2] * u * v * ub * ub * vb * vb);
}

double fgm_density(const std::array<double, 3>& a, double u, double v) {
    const double ub = 1.0 - u, vb = 1.0 - v;
    return 1.0 + a[0] * (1.0 - 2.0 * u) * (1.0 - 2.0 * v) +
           a[1] * (2.0 * u - 3.0 * u * u) * (2.0 * v - 3.0 * v * v) +
           a[2] * (2.0 * u * ub * (1.0 - 2.0 * u)) * (2.0 * v * vb * (1.0 - 2.0 * v));
}

double fgm_conditional(const std::array<double, 3>& a, double u, double v) {
    const double ub = 1.0 - u, vb = 1.0 - v;
    return v + a[0] * (1.0 - 2.0 * u) * v * vb + a[1] * (2.0 * u - 3.0 * u * u) * v * v * vb +
           a[2] * 2.0 * u * ub * (1.0 - 2.0 * u) * v * v * vb * vb;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

void check_param_count(const CopulaModel& m) {
    if (static_cast<int>(m.params.size()) != param_count(m.family))
        throw std::invalid_argument(std::string("wrong parameter count for family ") +
                                    family_name(m.family));
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Product:  return "product";
        case Family::FGM1:     return "fgm";
        case Family::FGMIter1: return "fgm-iter1";
        case Family::FGMIter2: return "fgm-iter2";
        case Family::Gumbel1:  return "gumbel";
        case Family::Gumbel2:  return "gumbel2";
        case Family::Clayton:  return "clayton";
        case Family::Frank:    return "frank";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::Product, Family::FGM1, Family::FGMIter1, Family::FGMIter2,
                     Family::Gumbel1, Family::Gumbel2, Family::Clayton, Family::Frank})
        if (name == family_name(f)) return f;
    throw std::invalid_argument("unknown copula family: " + name);
}

int param_count(Family f) {
    switch (f) {
        case Family::Product:  return 0;
        case Family::FGM1:     return 1;
        case Family::FGMIter1: return 2;
        case Family::FGMIter2: return 3;
        case Family::Gumbel1:  return 1;
        case Family::Gumbel2:  return 2;
        case Family::Clayton:  return 1;
        case Family::Frank:    return 1;
    }
    return 0;
}

bool is_archimedean(Family f) {
    return f == Family::Gumbel1 || f == Family::Gumbel2 || f == Family::Clayton ||
           f == Family::Frank;
}

RegionViolation::RegionViolation(Family f, std::vector<std::string> violated)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "parameters of " << family_name(f) << " outside validity region:";
          for (const auto& c : violated) os << ' ' << c;
          return os.str();
      }()),
      violated_(std::move(violated)) {}

std::vector<RegionConstraint> region_constraints(Family f) {
    using P = std::vector<double>;
    switch (f) {
        case Family::Product:
            return {};
        case Family::FGM1:
            return {{"l1", [](const P& p) { return 1.0 - p[0] * p[0]; }}};
        case Family::FGMIter1:
            return {
                {"l1", [](const P& p) { return 1.0 - p[0] * p[0]; }},
                {"l2", [](const P& p) { return p[0] + p[1] + 1.0; }},
                {"l3",
                 [](const P& p) {
                     const double d = std::max(0.0, 9.0 - 6.0 * p[0] - 3.0 * p[0] * p[0]);
                     return 0.5 * (3.0 - p[0] + std::sqrt(d)) - p[1];
                 }},
            };
        case Family::FGMIter2:
            // necessary box conditions only; validate_params adds a density scan
            return {
                {"l1", [](const P& p) { return 1.0 - p[0]; }},
                {"l2", [](const P& p) { return 1.0 + p[0]; }},
                {"l3", [](const P& p) { return 2.0 - p[1]; }},
                {"l4", [](const P& p) { return 2.0 + p[1]; }},
                {"l5", [](const P& p) { return 4.0 - p[2]; }},
                {"l6", [](const P& p) { return 4.0 + p[2]; }},
            };
        case Family::Gumbel1:
            return {{"l1", [](const P& p) { return p[0] - 1.0; }}};
        case Family::Gumbel2:
            return {{"l1", [](const P& p) { return p[0] - 1.0; }},
                    {"l2", [](const P& p) { return p[1]; }}};  // beta2 > 0, strict
        case Family::Clayton:
            return {{"l1", [](const P& p) { return p[0]; }}};  // theta > 0, strict
        case Family::Frank:
            return {{"l1", [](const P& p) { return std::abs(p[0]); }}};  // theta != 0
    }
    return {};
}

std::vector<std::string> validate_params(const CopulaModel& m) {
    check_param_count(m);
    std::vector<std::string> out;
    // constraints that are strict inequalities rather than closed half-spaces
    const bool strict_l2 = m.family == Family::Gumbel2;
    const bool strict_l1 = m.family == Family::Clayton || m.family == Family::Frank;
    for (const auto& c : region_constraints(m.family)) {
        const double v = c.value(m.params);
        if ((strict_l2 && c.id == "l2") || (strict_l1 && c.id == "l1")) {
            if (!(v > 0.0)) out.push_back(c.id);
        } else if (v < -kRegionTol) {
            out.push_back(c.id);
        }
    }
    if (m.family == Family::FGMIter2 && out.empty()) {
        const auto a = fgm_coeffs(m);
        bool ok = true;
        for (int i = 0; i <= 50 && ok; ++i)
            for (int j = 0; j <= 50; ++j)
                if (fgm_density(a, i / 50.0, j / 50.0) < -1e-10) {
                    out.push_back("density-scan");
                    ok = false;
                    break;
                }
    }
    return out;
}

void require_valid(const CopulaModel& m) {
    auto violated = validate_params(m);
    if (!violated.empty()) throw RegionViolation(m.family, std::move(violated));
}

ArchimedeanGenerator make_generator(const CopulaModel& m) {
    check_param_count(m);
    ArchimedeanGenerator g;
    switch (m.family) {
        case Family::Gumbel1: {
            const double b = m.params[0];
            g.phi = [b](double t) { return std::pow(-std::log(t), b); };
            g.dphi = [b](double t) { return -b * std::pow(-std::log(t), b - 1.0) / t; };
            g.d2phi = [b](double t) {
                const double lt = -std::log(t);
                return b * std::pow(lt, b - 2.0) * ((b - 1.0) + lt) / (t * t);
            };
            g.inverse = [b](double s) { return std::exp(-std::pow(s, 1.0 / b)); };
            break;
        }
        case Family::Gumbel2: {
            const double b1 = m.params[0], b2 = m.params[1];
            g.phi = [b1, b2](double t) { return std::pow(std::pow(t, -b2) - 1.0, b1); };
            g.dphi = [b1, b2](double t) {
                const double gg = std::pow(t, -b2) - 1.0;
                return -b1 * b2 * std::pow(gg, b1 - 1.0) * std::pow(t, -b2 - 1.0);
            };
            g.d2phi = [b1, b2](double t) {
                const double gg = std::pow(t, -b2) - 1.0;
                const double dg = -b2 * std::pow(t, -b2 - 1.0);
                const double d2g = b2 * (b2 + 1.0) * std::pow(t, -b2 - 2.0);
                return b1 * (b1 - 1.0) * std::pow(gg, b1 - 2.0) * dg * dg +
                       b1 * std::pow(gg, b1 - 1.0) * d2g;
            };
            g.inverse = [b1, b2](double s) {
                return std::pow(1.0 + std::pow(s, 1.0 / b1), -1.0 / b2);
            };
            break;
        }
        case Family::Clayton: {
            const double th = m.params[0];
            g.phi = [th](double t) { return (std::pow(t, -th) - 1.0) / th; };
            g.dphi = [th](double t) { return -std::pow(t, -th - 1.0); };
            g.d2phi = [th](double t) { return (th + 1.0) * std::pow(t, -th - 2.0); };
            g.inverse = [th](double s) { return std::pow(1.0 + th * s, -1.0 / th); };
            break;
        }
        case Family::Frank: {
            const double th = m.params[0];
            const double em1 = std::expm1(-th);
            g.phi = [th, em1](double t) { return -std::log(std::expm1(-th * t) / em1); };
            g.dphi = [th](double t) {
                const double w = std::exp(-th * t);
                return th * w / (w - 1.0);
            };
            g.d2phi = [th](double t) {
                const double w = std::exp(-th * t);
                return th * th * w / ((w - 1.0) * (w - 1.0));
            };
            g.inverse = [th, em1](double s) { return -std::log1p(std::exp(-s) * em1) / th; };
            break;
        }
        default:
            throw std::invalid_argument("make_generator: not an Archimedean family");
    }
    return g;
}

CopulaEval::CopulaEval(const CopulaModel& m) : model_(m) {
    require_valid(model_);
    bind();
}

CopulaEval CopulaEval::unchecked(const CopulaModel& m) {
    check_param_count(m);
    CopulaEval e;
    e.model_ = m;
    e.bind();
    return e;
}

void CopulaEval::bind() {
    if (is_fgm_type(model_.family)) {
        fgm_ = fgm_coeffs(model_);
    } else {
        gen_ = make_generator(model_);
        archimedean_ = true;
    }
}

double CopulaEval::cdf(double u, double v) const {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("cdf: arguments outside the unit square");
    if (!archimedean_) return fgm_cdf(fgm_, u, v);
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    return clamp01(gen_.inverse(gen_.phi(u) + gen_.phi(v)));
}

double CopulaEval::density(double u, double v) const {
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
        throw std::invalid_argument("density: arguments must be interior to the unit square");
    if (!archimedean_) return fgm_density(fgm_, u, v);
    const double c = std::max(gen_.inverse(gen_.phi(u) + gen_.phi(v)), 1e-300);
    const double dc = gen_.dphi(c);
    return -gen_.d2phi(c) * gen_.dphi(u) * gen_.dphi(v) / (dc * dc * dc);
}

double CopulaEval::conditional_cdf(double u, double v) const {
    if (!(u > 0.0 && u < 1.0 && v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("conditional_cdf: u interior, v in [0,1] required");
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (!archimedean_) return clamp01(fgm_conditional(fgm_, u, v));
    const double c = std::max(gen_.inverse(gen_.phi(u) + gen_.phi(v)), 1e-300);
    return clamp01(gen_.dphi(u) / gen_.dphi(c));
}

CopulaSampler::CopulaSampler(const CopulaModel& m) : eval_(m) {
    if (is_archimedean(m.family)) {
        gen_ = make_generator(m);
        archimedean_ = true;
    }
}

std::array<double, 2> CopulaSampler::draw(Rng& rng) const {
    constexpr double eps = 1e-15;
    if (!archimedean_) {
        const double u = rng.uniform();
        const double t = rng.uniform();
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < kBisectMaxIter && hi - lo > kBisectTol; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (eval_.conditional_cdf(u, mid) < t)
                lo = mid;
            else
                hi = mid;
        }
        return {u, 0.5 * (lo + hi)};
    }
    const auto& gen = gen_;
    const double s = rng.uniform();
    const double t = rng.uniform();
    double lo = eps, hi = 1.0 - eps;
    for (int i = 0; i < kBisectMaxIter && hi - lo > kBisectTol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gen.kendall(mid) < t)
            lo = mid;
        else
            hi = mid;
    }
    const double w = 0.5 * (lo + hi);
    const double pw = gen.phi(w);
    const double u = clamp01(gen.inverse(s * pw));
    const double v = clamp01(gen.inverse((1.0 - s) * pw));
    return {std::min(std::max(u, eps), 1.0 - eps), std::min(std::max(v, eps), 1.0 - eps)};
}

double cdf(const CopulaModel& m, double u, double v) { return CopulaEval(m).cdf(u, v); }

double density(const CopulaModel& m, double u, double v) { return CopulaEval(m).density(u, v); }

double conditional_cdf(const CopulaModel& m, double u, double v) {
    return CopulaEval(m).conditional_cdf(u, v);
}

std::vector<std::array<double, 2>> sample(const CopulaModel& m, std::size_t n,
                                          std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample: n must be positive");
    CopulaSampler sampler(m);
    Rng rng(seed);
    std::vector<std::array<double, 2>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.draw(rng));
    return out;
}

}  // namespace blm
