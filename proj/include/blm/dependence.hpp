#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "blm/copula.hpp"

namespace blm {

// which coordinate is transformed by the Legendre polynomial:
// D12 pairs u1 with P_k(u2), D21 swaps the roles
enum class Direction { D12, D21 };

// Rescaled-rank pseudo-observations n F_n/(n+1), strictly inside (0,1).
// Ties in a raw column are resolved by average ranks and flagged.
struct PseudoSample {
    std::vector<std::array<double, 2>> pairs;
    bool had_ties = false;

    std::size_t size() const { return pairs.size(); }
};

PseudoSample pseudo_observations(const std::vector<std::array<double, 2>>& raw);

// wraps already-uniform data (e.g. simulator output) without re-ranking;
// estimation always goes through pseudo_observations first
PseudoSample pseudo_sample_from_ranks(std::vector<std::array<double, 2>> pairs);

double empirical_copula(const PseudoSample& ps, double u, double v);

// \hat{delta}_k = n^{-1} sum_i u_i P_k(v_i) (coordinates per direction)
double empirical_delta(const PseudoSample& ps, int k, Direction dir = Direction::D12);

// tensor Gauss-Legendre value of int (C - u1 u2) P_k'(.) over the square;
// no refinement check, used inside solvers where the caller controls order
double delta_quadrature(const CopulaEval& eval, int k, Direction dir, int order);

bool has_closed_form_delta(Family f, int k);
double closed_form_delta_fgm(const CopulaModel& m, int k);

// closed form when available, otherwise order-64 quadrature with an
// order-128 refinement check (throws on non-convergence)
double theoretical_delta(const CopulaModel& m, int k, Direction dir = Direction::D12);

enum class ConcordanceMeasure { Tau, Rho, Gamma, Footrule };

double concordance(const CopulaModel& m, ConcordanceMeasure which);

// sample Kendall tau / Spearman rho (the only measures the estimators use)
double empirical_concordance(const PseudoSample& ps, ConcordanceMeasure which);

}  // namespace blm
