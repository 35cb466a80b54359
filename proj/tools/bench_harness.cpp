// Compares the OpenMP replication loop against the serial reference path:
// same config, same derived seeds, wall time of each, and a check that the
// accumulated statistics agree.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "blm/harness.hpp"

int main(int argc, char** argv) {
    blm::ExperimentConfig cfg;
    cfg.family = blm::Family::FGMIter1;
    cfg.true_params = {0.4, 0.9};
    cfg.sample_sizes = {100};
    cfg.replications = argc > 1 ? std::atoi(argv[1]) : 100;
    cfg.methods = {blm::Method::BLM, blm::Method::TauRhoInv};

    using Clock = std::chrono::steady_clock;

    cfg.use_openmp = false;
    const auto t0 = Clock::now();
    const auto serial = blm::run_bias_rmse_experiment(cfg);
    const double serial_s = std::chrono::duration<double>(Clock::now() - t0).count();

    cfg.use_openmp = true;
    const auto t1 = Clock::now();
    const auto parallel = blm::run_bias_rmse_experiment(cfg);
    const double parallel_s = std::chrono::duration<double>(Clock::now() - t1).count();

    bool match = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; match && i < serial.rows.size(); ++i) {
        const auto& a = serial.rows[i];
        const auto& b = parallel.rows[i];
        match = a.method == b.method && a.n == b.n && a.param == b.param && a.bias == b.bias &&
                a.rmse == b.rmse && a.fails == b.fails;
    }

    std::printf("replications: %d\n", cfg.replications);
    std::printf("serial:   %.3f s\n", serial_s);
    std::printf("parallel: %.3f s\n", parallel_s);
    std::printf("speedup:  %.2fx\n", serial_s / parallel_s);
    std::printf("statistics identical: %s\n", match ? "yes" : "NO");
    return match ? 0 : 1;
}
