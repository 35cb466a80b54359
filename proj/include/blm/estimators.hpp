#pragma once

#include <limits>
#include <string>
#include <vector>

#include "blm/copula.hpp"
#include "blm/dependence.hpp"

namespace blm {

enum class Method { BLM, TauRhoInv, MD, PML };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct EstimationResult {
    Family family = Family::Product;
    std::vector<double> estimate;
    Method method = Method::BLM;
    bool converged = false;  // solve succeeded and the estimate is admissible
    bool solved = false;     // numeric solve succeeded; estimate is reportable raw
    bool in_region = false;
    double objective_value = std::numeric_limits<double>::quiet_NaN();  // MD/PML only
    int iterations = 0;
    double wall_time = 0.0;  // seconds
};

// L-moment inversion. FGM families invert the closed-form delta map exactly;
// Archimedean families root-find on the quadrature delta map. Raw estimates
// are reported even outside the validity region (in_region flags them).
EstimationResult blm_estimate(const PseudoSample& ps, Family family,
                              Direction dir = Direction::D12);

struct BlmSystemSolution {
    std::vector<double> params;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// Damped Newton with finite-difference Jacobian on the quadrature delta map,
// clamped to the family's parameter box; three deterministic starts.
BlmSystemSolution solve_blm_system(Family family, const std::vector<double>& delta_hat,
                                   const std::vector<double>& init = {});

// Moment matching on (Kendall tau, Spearman rho); for one-parameter families
// only rho is used. Supports families with at most two parameters.
EstimationResult tau_rho_inversion(const PseudoSample& ps, Family family);

// Cramer-von Mises distance between the empirical copula and C_theta,
// minimized by Nelder-Mead with an exterior quadratic penalty on the region.
EstimationResult md_estimate(const PseudoSample& ps, Family family);

// Pseudo maximum likelihood: maximizes the rank-based log-density sum with
// the same penalty scheme; three deterministic starts.
EstimationResult pml_estimate(const PseudoSample& ps, Family family);

EstimationResult estimate(const PseudoSample& ps, Family family, Method method,
                          Direction dir = Direction::D12);

// score L_k(u,v;theta) = u P_k(v) - delta_k(theta); the L-moment estimator is
// the root of the summed scores over the pseudo-sample
double cls_score(double u, double v, const CopulaModel& m, int k);

// nearest admissible point, by box clamping plus blending toward a strictly
// interior anchor; used to initialize the penalized optimizers
std::vector<double> project_into_region(Family family, std::vector<double> raw);

}  // namespace blm
