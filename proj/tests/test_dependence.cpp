#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "blm/dependence.hpp"
#include "blm/rng.hpp"

using namespace blm;

TEST_CASE("pseudo-observations are rescaled ranks") {
    const std::vector<std::array<double, 2>> raw = {{3.0, 10.0}, {1.0, 30.0}, {2.0, 20.0}};
    const auto ps = pseudo_observations(raw);
    REQUIRE(ps.size() == 3);
    CHECK(!ps.had_ties);
    CHECK(ps.pairs[0][0] == doctest::Approx(0.75));
    CHECK(ps.pairs[1][0] == doctest::Approx(0.25));
    CHECK(ps.pairs[2][0] == doctest::Approx(0.5));
    CHECK(ps.pairs[0][1] == doctest::Approx(0.25));
    CHECK(ps.pairs[1][1] == doctest::Approx(0.75));
    CHECK(ps.pairs[2][1] == doctest::Approx(0.5));
}

TEST_CASE("ties get average ranks and are flagged") {
    const std::vector<std::array<double, 2>> raw = {{1.0, 1.0}, {1.0, 2.0}, {5.0, 3.0}};
    const auto ps = pseudo_observations(raw);
    CHECK(ps.had_ties);
    CHECK(ps.pairs[0][0] == doctest::Approx(1.5 / 4.0));
    CHECK(ps.pairs[1][0] == doctest::Approx(1.5 / 4.0));
    CHECK(ps.pairs[2][0] == doctest::Approx(3.0 / 4.0));
    CHECK_THROWS_AS(pseudo_observations({{1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("ranks are invariant under strictly increasing transforms, bitwise") {
    Rng rng(11);
    std::vector<std::array<double, 2>> raw(60);
    for (auto& p : raw) p = {rng.uniform(), rng.uniform()};
    auto transformed = raw;
    for (auto& p : transformed) {
        p[0] = p[0] * p[0] * p[0] + p[0];
        p[1] = std::exp(p[1]);
    }
    const auto a = pseudo_observations(raw);
    const auto b = pseudo_observations(transformed);
    CHECK(a.pairs == b.pairs);
}

TEST_CASE("empirical copula counts") {
    const auto ps = pseudo_sample_from_ranks({{0.25, 0.25}, {0.5, 0.75}, {0.75, 0.5}});
    CHECK(empirical_copula(ps, 0.5, 0.5) == doctest::Approx(1.0 / 3.0));
    CHECK(empirical_copula(ps, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(empirical_copula(ps, 0.1, 0.9) == doctest::Approx(0.0));
}

TEST_CASE("comonotone data: first L-moment near 1/6, tau and rho equal 1") {
    const int n = 2000;
    std::vector<std::array<double, 2>> pairs(n);
    for (int i = 0; i < n; ++i) {
        const double u = (i + 1.0) / (n + 1.0);
        pairs[i] = {u, u};
    }
    const auto ps = pseudo_sample_from_ranks(pairs);
    CHECK(empirical_delta(ps, 1) == doctest::Approx(1.0 / 6.0).epsilon(2e-3));
    CHECK(empirical_concordance(ps, ConcordanceMeasure::Tau) == doctest::Approx(1.0));
    CHECK(empirical_concordance(ps, ConcordanceMeasure::Rho) == doctest::Approx(1.0));
}

TEST_CASE("closed forms match quadrature for the polynomial families") {
    const double grid[] = {-0.9, -0.5, 0.0, 0.25, 0.5, 0.9};
    for (double a : grid) {
        const CopulaModel m{Family::FGM1, {a}};
        CHECK(std::abs(closed_form_delta_fgm(m, 1) -
                       delta_quadrature(CopulaEval(m), 1, Direction::D12, 64)) < 1e-8);
    }
    for (auto [a1, a2] : std::vector<std::pair<double, double>>{
             {0.1, 0.0}, {0.4, 0.9}, {0.941, 1.445}, {-0.5, 0.3}, {0.0, 1.0}}) {
        const CopulaModel m{Family::FGMIter1, {a1, a2}};
        const CopulaEval e(m);
        for (int k : {1, 2})
            CHECK(std::abs(closed_form_delta_fgm(m, k) -
                           delta_quadrature(e, k, Direction::D12, 64)) < 1e-8);
    }
    const CopulaModel m2{Family::FGMIter2, {0.2, 0.2, 0.2}};
    const CopulaEval e2(m2);
    for (int k : {1, 2, 3})
        CHECK(std::abs(closed_form_delta_fgm(m2, k) -
                       delta_quadrature(e2, k, Direction::D12, 64)) < 1e-8);
}

TEST_CASE("first L-moment equals rho/6") {
    const std::vector<CopulaModel> models = {
        {Family::FGMIter1, {0.1, 0.0}}, {Family::FGMIter1, {0.4, 0.9}},
        {Family::FGMIter1, {0.941, 1.445}}, {Family::Gumbel2, {1.0, 0.001}},
        {Family::Gumbel2, {1.4, 0.2}}, {Family::Gumbel2, {2.5, 1.0}},
        {Family::FGM1, {0.7}}, {Family::Clayton, {2.0}}, {Family::Frank, {5.0}},
        {Family::Gumbel1, {2.0}},
    };
    for (const auto& m : models) {
        CAPTURE(family_name(m.family));
        CHECK(theoretical_delta(m, 1) ==
              doctest::Approx(concordance(m, ConcordanceMeasure::Rho) / 6.0).epsilon(1e-6));
    }
}

TEST_CASE("exchangeability: both directions agree") {
    for (const auto& m : std::vector<CopulaModel>{{Family::FGMIter1, {0.4, 0.9}},
                                                  {Family::Gumbel2, {1.4, 0.2}},
                                                  {Family::Clayton, {2.0}}}) {
        const CopulaEval e(m);
        for (int k : {1, 2})
            CHECK(std::abs(delta_quadrature(e, k, Direction::D12, 64) -
                           delta_quadrature(e, k, Direction::D21, 64)) < 1e-10);
    }
}

TEST_CASE("closed-form concordance of the two-parameter polynomial family") {
    const CopulaModel m{Family::FGMIter1, {0.4, 0.9}};
    CHECK(concordance(m, ConcordanceMeasure::Rho) == doctest::Approx(0.4 / 3.0 + 0.9 / 12.0));
    CHECK(concordance(m, ConcordanceMeasure::Tau) ==
          doctest::Approx(2.0 * 0.4 / 9.0 + 0.9 / 18.0 + 0.4 * 0.9 / 450.0));
}

TEST_CASE("all concordance measures vanish at independence") {
    const CopulaModel m{Family::Product, {}};
    for (auto w : {ConcordanceMeasure::Tau, ConcordanceMeasure::Rho, ConcordanceMeasure::Gamma,
                   ConcordanceMeasure::Footrule})
        CHECK(concordance(m, w) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("tau closed form for the inverse-power family") {
    // tau = theta/(theta+2) for the inverse-power generator
    CHECK(concordance({Family::Clayton, {2.0}}, ConcordanceMeasure::Tau) ==
          doctest::Approx(0.5).epsilon(1e-8));
    // tau = 1 - 1/beta for the logarithmic generator
    CHECK(concordance({Family::Gumbel1, {2.0}}, ConcordanceMeasure::Tau) ==
          doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("empirical concordance tracks the model value") {
    const CopulaModel m{Family::FGMIter1, {0.4, 0.9}};
    const auto s = sample(m, 20000, 99);
    const auto ps = pseudo_observations(s);
    CHECK(empirical_concordance(ps, ConcordanceMeasure::Rho) ==
          doctest::Approx(concordance(m, ConcordanceMeasure::Rho)).epsilon(0.1));
    CHECK(empirical_concordance(ps, ConcordanceMeasure::Tau) ==
          doctest::Approx(concordance(m, ConcordanceMeasure::Tau)).epsilon(0.1));
}
