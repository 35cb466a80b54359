#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blm/dependence.hpp"
#include "blm/harness.hpp"

using namespace blm;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.family = Family::FGMIter1;
    cfg.true_params = {0.4, 0.9};
    cfg.sample_sizes = {50};
    cfg.replications = 40;
    cfg.methods = {Method::BLM, Method::TauRhoInv};
    cfg.base_seed = 1234;
    return cfg;
}

}  // namespace

TEST_CASE("parameter labels") {
    CHECK(param_names(Family::FGMIter1) == std::vector<std::string>{"alpha1", "alpha2"});
    CHECK(param_names(Family::Gumbel2) == std::vector<std::string>{"beta1", "beta2"});
    CHECK(param_names(Family::Product).empty());
}

TEST_CASE("serial reference and parallel path give identical statistics") {
    auto cfg = small_config();
    cfg.use_openmp = false;
    const auto serial = run_bias_rmse_experiment(cfg);
    cfg.use_openmp = true;
    const auto parallel = run_bias_rmse_experiment(cfg);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].bias == parallel.rows[i].bias);
        CHECK(serial.rows[i].rmse == parallel.rows[i].rmse);
        CHECK(serial.rows[i].fails == parallel.rows[i].fails);
    }
}

TEST_CASE("report invariants: rmse dominates bias, rows cover the grid") {
    const auto report = run_bias_rmse_experiment(small_config());
    CHECK(report.rows.size() == 2 * 1 * 2);  // methods x sizes x params
    for (const auto& r : report.rows) {
        CAPTURE(r.method);
        CHECK(r.rmse >= std::abs(r.bias));
        CHECK(r.fails >= 0);
        CHECK(r.seconds >= 0.0);
    }
}

TEST_CASE("mixture sampling") {
    const CopulaModel truth{Family::FGMIter1, {0.4, 0.9}};
    const CopulaModel indep{Family::Product, {}};
    // eps = 0 delegates: bitwise identical to the plain sampler
    CHECK(contaminated_sample(truth, indep, 0.0, 100, 9) == sample(truth, 100, 9));
    // eps = 1 uses only the contaminant stream
    const auto pure = contaminated_sample(truth, indep, 1.0, 20000, 9);
    const auto ps_pure = pseudo_observations(pure);
    CHECK(std::abs(empirical_concordance(ps_pure, ConcordanceMeasure::Rho)) < 0.03);
    // rank correlation scales linearly in the mixing weight
    const auto mixed = contaminated_sample(truth, indep, 0.3, 40000, 9);
    const double rho = empirical_concordance(pseudo_observations(mixed),
                                             ConcordanceMeasure::Rho);
    CHECK(rho == doctest::Approx(0.7 * (0.4 / 3.0 + 0.9 / 12.0)).epsilon(0.12));
}

TEST_CASE("contamination study emits one block per mixing level") {
    auto cfg = small_config();
    cfg.sample_sizes = {40};
    cfg.replications = 10;
    cfg.methods = {Method::BLM};
    cfg.epsilon_grid = {0.0, 0.2};
    const auto report = run_contamination_study(cfg);
    CHECK(report.has_epsilon_column);
    REQUIRE(report.rows.size() == 2 * 2);  // eps levels x params
    CHECK(report.rows[0].epsilon == 0.0);
    CHECK(report.rows[2].epsilon == 0.2);
}

TEST_CASE("report rendering round-trips through csv") {
    ExperimentReport rep;
    rep.rows.push_back({"blm", 500, "alpha1", 0.0, -0.02517382910392847, 0.3001239, 3, 1.25});
    rep.rows.push_back({"pml", 30, "alpha2", 0.0, 0.1, 0.62, 0, 0.000123});
    const auto text = render_report(rep, "csv");
    CHECK(parse_report_csv(text) == rep);

    ExperimentReport with_eps = rep;
    with_eps.has_epsilon_column = true;
    with_eps.rows[0].epsilon = 0.05;
    CHECK(parse_report_csv(render_report(with_eps, "csv")) == with_eps);

    const ExperimentReport empty;
    CHECK(render_report(empty, "csv") == "method,n,param,bias,rmse,fails,seconds\n");

    const auto md = render_report(rep, "markdown");
    CHECK(md.find("| method |") == 0);
    CHECK_THROWS_AS(render_report(rep, "xml"), std::invalid_argument);
}

TEST_CASE("config parsing") {
    const std::string text =
        "# experiment\n"
        "family = fgm-iter1\n"
        "true_params = 0.4, 0.9\n"
        "sample_sizes = 30,100\n"
        "replications = 25\n"
        "methods = blm, md\n"
        "epsilon = 0.1\n"
        "contaminant_family = product\n"
        "base_seed = 77\n"
        "use_openmp = false\n";
    const auto cfg = parse_config_text(text);
    CHECK(cfg.family == Family::FGMIter1);
    CHECK(cfg.true_params == std::vector<double>{0.4, 0.9});
    CHECK(cfg.sample_sizes == std::vector<int>{30, 100});
    CHECK(cfg.replications == 25);
    CHECK(cfg.methods == std::vector<Method>{Method::BLM, Method::MD});
    CHECK(cfg.epsilon == 0.1);
    CHECK(cfg.base_seed == 77);
    CHECK(!cfg.use_openmp);

    CHECK_THROWS_AS(parse_config_text("family = fgm\ntrue_params = 0.5\nbogus = 1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("family = fgm\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("family = fgm\ntrue_params = 0.5, 0.4\n"),
                    std::invalid_argument);
}

TEST_CASE("estimator failures are counted, not thrown") {
    // strongly dependent truth forced through the narrow one-parameter
    // polynomial family: many raw estimates land outside the region but the
    // run completes and reports them
    ExperimentConfig cfg;
    cfg.family = Family::FGM1;
    cfg.true_params = {0.9};
    cfg.sample_sizes = {30};
    cfg.replications = 20;
    cfg.methods = {Method::BLM};
    const auto report = run_bias_rmse_experiment(cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].fails == 0);  // closed-form inversion always solves
}
