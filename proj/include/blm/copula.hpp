#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blm/rng.hpp"

namespace blm {

enum class Family {
    Product,
    FGM1,      // alpha
    FGMIter1,  // alpha1, alpha2 (one-iterated FGM)
    FGMIter2,  // alpha1, alpha2, alpha3 (two-iterated FGM)
    Gumbel1,   // beta
    Gumbel2,   // beta1, beta2 (distorted Gumbel)
    Clayton,   // theta
    Frank,     // theta
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);
int param_count(Family f);
bool is_archimedean(Family f);

struct CopulaModel {
    Family family = Family::Product;
    std::vector<double> params;
};

// thrown when an operation receives parameters outside the validity region
class RegionViolation : public std::runtime_error {
public:
    RegionViolation(Family f, std::vector<std::string> violated);
    const std::vector<std::string>& violated() const { return violated_; }

private:
    std::vector<std::string> violated_;
};

// One inequality l(params) >= 0 of a family's validity region.
struct RegionConstraint {
    std::string id;
    std::function<double(const std::vector<double>&)> value;
};

// The closed validity region as a list of constraints; used both by
// validate_params and by the penalty terms of the constrained optimizers.
std::vector<RegionConstraint> region_constraints(Family f);

// Empty result means the parameters are admissible. FGMIter2 additionally
// runs a density-nonnegativity scan on a 51x51 grid (conservative, the
// exact region for that family is not available in closed form).
std::vector<std::string> validate_params(const CopulaModel& m);
void require_valid(const CopulaModel& m);

// Generator of an Archimedean family together with its derivatives and
// inverse; phi(1) = 0, phi decreasing convex on (0,1).
struct ArchimedeanGenerator {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> d2phi;
    std::function<double(double)> inverse;

    // Kendall distribution function K(t) = t - phi(t)/phi'(t)
    double kendall(double t) const { return t - phi(t) / dphi(t); }
};

ArchimedeanGenerator make_generator(const CopulaModel& m);

// Evaluator bound to a fixed, validated parameter vector. Validation runs
// once at construction; point evaluations carry no per-call checks beyond
// the domain of (u,v). Use this in quadrature and estimation loops.
class CopulaEval {
public:
    explicit CopulaEval(const CopulaModel& m);

    // Skips region validation (parameter count is still checked). For the
    // penalized optimizers, which must evaluate trial points outside the
    // region; results there may be non-finite and callers must guard.
    static CopulaEval unchecked(const CopulaModel& m);

    double cdf(double u, double v) const;
    double density(double u, double v) const;          // interior (u,v) only
    double conditional_cdf(double u, double v) const;  // dC/du

    const CopulaModel& model() const { return model_; }

private:
    CopulaEval() = default;
    void bind();

    CopulaModel model_;
    std::array<double, 3> fgm_{};  // FGM-type coefficients, unused otherwise
    ArchimedeanGenerator gen_;
    bool archimedean_ = false;
};

// Exact sampler: FGM-type families by conditional inversion (bisection in v),
// Archimedean families by the Kendall-function algorithm. Draws are a pure
// function of (params, seed stream).
class CopulaSampler {
public:
    explicit CopulaSampler(const CopulaModel& m);
    std::array<double, 2> draw(Rng& rng) const;

private:
    CopulaEval eval_;
    ArchimedeanGenerator gen_;
    bool archimedean_ = false;
};

// convenience wrappers over CopulaEval / CopulaSampler
double cdf(const CopulaModel& m, double u, double v);
double density(const CopulaModel& m, double u, double v);
double conditional_cdf(const CopulaModel& m, double u, double v);
std::vector<std::array<double, 2>> sample(const CopulaModel& m, std::size_t n,
                                          std::uint64_t seed);

}  // namespace blm
