#include "blm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blm/dependence.hpp"
#include "blm/rng.hpp"

namespace blm {
namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct MethodOutcome {
    std::vector<double> estimate;
    bool usable = false;
    double wall_time = 0.0;
};

bool finite_all(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return !v.empty();
}

// one replication: draw, rank, run every requested method
std::vector<MethodOutcome> run_replication(const ExperimentConfig& cfg,
                                           const CopulaModel& truth,
                                           const CopulaModel& contaminant, int n,
                                           std::uint64_t seed) {
    std::vector<MethodOutcome> out(cfg.methods.size());
    std::vector<std::array<double, 2>> raw;
    try {
        raw = contaminated_sample(truth, contaminant, cfg.epsilon,
                                  static_cast<std::size_t>(n), seed);
    } catch (const std::exception&) {
        return out;  // every method counts as failed
    }
    PseudoSample ps;
    try {
        ps = pseudo_observations(raw);
    } catch (const std::exception&) {
        return out;
    }
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        try {
            const auto res = estimate(ps, cfg.family, cfg.methods[m]);
            out[m].estimate = res.estimate;
            out[m].wall_time = res.wall_time;
            // raw estimates outside the region are still reportable; only a
            // numeric solve failure voids the replication
            out[m].usable = res.solved && finite_all(res.estimate);
        } catch (const std::exception&) {
            out[m].usable = false;
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) {
        const auto t = trim(tok);
        if (t.empty()) continue;
        std::size_t pos = 0;
        out.push_back(std::stod(t, &pos));
        if (pos != t.size()) throw std::invalid_argument("bad number: " + t);
    }
    return out;
}

}  // namespace

std::vector<std::string> param_names(Family f) {
    switch (f) {
        case Family::Product:  return {};
        case Family::FGM1:     return {"alpha"};
        case Family::FGMIter1: return {"alpha1", "alpha2"};
        case Family::FGMIter2: return {"alpha1", "alpha2", "alpha3"};
        case Family::Gumbel1:  return {"beta"};
        case Family::Gumbel2:  return {"beta1", "beta2"};
        case Family::Clayton:  return {"theta"};
        case Family::Frank:    return {"theta"};
    }
    return {};
}

std::vector<std::array<double, 2>> contaminated_sample(const CopulaModel& truth,
                                                       const CopulaModel& contaminant,
                                                       double eps, std::size_t n,
                                                       std::uint64_t seed) {
    if (!(eps >= 0.0 && eps < 1.0) && eps != 1.0)
        throw std::invalid_argument("contaminated_sample: eps in [0,1] required");
    if (eps == 0.0) return sample(truth, n, seed);
    if (n == 0) throw std::invalid_argument("contaminated_sample: n must be positive");
    const CopulaSampler s_true(truth);
    const CopulaSampler s_cont(contaminant);
    Rng rng(seed);
    std::vector<std::array<double, 2>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mix = rng.uniform();
        out.push_back(mix < eps ? s_cont.draw(rng) : s_true.draw(rng));
    }
    return out;
}

ExperimentReport run_bias_rmse_experiment(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1)");
    const CopulaModel truth{cfg.family, cfg.true_params};
    require_valid(truth);
    CopulaModel contaminant{cfg.contaminant_family, cfg.contaminant_params};
    if (contaminant.params.empty() && param_count(cfg.contaminant_family) > 0)
        throw std::invalid_argument("contaminant_params required for this contaminant family");
    require_valid(contaminant);

    const auto names = param_names(cfg.family);
    const std::size_t N = static_cast<std::size_t>(cfg.replications);

    ExperimentReport report;
    // (method, n) cells keyed by position; rows emitted method-major below
    std::vector<std::vector<std::vector<MethodOutcome>>> per_n(cfg.sample_sizes.size());

    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
        const int n = cfg.sample_sizes[ni];
        if (n < 2) throw std::invalid_argument("sample sizes must be >= 2");
        auto& store = per_n[ni];
        store.resize(N);
        if (cfg.use_openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(N); ++i) {
                const auto seed = Rng::derive_seed(cfg.base_seed, static_cast<std::uint64_t>(n),
                                                   static_cast<std::uint64_t>(i));
                store[static_cast<std::size_t>(i)] =
                    run_replication(cfg, truth, contaminant, n, seed);
            }
        } else {
            // serial reference path: same per-index seeds, plain loop
            for (std::size_t i = 0; i < N; ++i) {
                const auto seed =
                    Rng::derive_seed(cfg.base_seed, static_cast<std::uint64_t>(n), i);
                store[i] = run_replication(cfg, truth, contaminant, n, seed);
            }
        }
    }

    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
            const auto& store = per_n[ni];
            int fails = 0;
            double seconds = 0.0;
            std::vector<double> sum(names.size(), 0.0), sumsq(names.size(), 0.0);
            std::size_t used = 0;
            for (const auto& rep : store) {
                const auto& mo = rep[m];
                seconds += mo.wall_time;
                if (!mo.usable || mo.estimate.size() != names.size()) {
                    ++fails;
                    continue;
                }
                ++used;
                for (std::size_t k = 0; k < names.size(); ++k) {
                    const double e = mo.estimate[k] - cfg.true_params[k];
                    sum[k] += e;
                    sumsq[k] += e * e;
                }
            }
            for (std::size_t k = 0; k < names.size(); ++k) {
                ReportRow row;
                row.method = method_name(cfg.methods[m]);
                row.n = cfg.sample_sizes[ni];
                row.param = names[k];
                row.epsilon = cfg.epsilon;
                row.bias = used ? sum[k] / static_cast<double>(used) : 0.0;
                row.rmse = used ? std::sqrt(sumsq[k] / static_cast<double>(used)) : 0.0;
                row.fails = fails;
                row.seconds = seconds;
                report.rows.push_back(std::move(row));
            }
        }
    }
    report.has_epsilon_column = cfg.epsilon > 0.0;
    return report;
}

ExperimentReport run_contamination_study(const ExperimentConfig& cfg) {
    std::vector<double> grid = cfg.epsilon_grid;
    if (grid.empty()) grid = {0.0, 0.05, 0.10, 0.20, 0.30};
    ExperimentReport report;
    report.has_epsilon_column = true;
    for (double eps : grid) {
        ExperimentConfig c = cfg;
        c.epsilon = eps;
        c.epsilon_grid.clear();
        auto part = run_bias_rmse_experiment(c);
        for (auto& row : part.rows) {
            row.epsilon = eps;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::string render_report(const ExperimentReport& report, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        os << (report.has_epsilon_column ? "method,n,param,epsilon,bias,rmse,fails,seconds"
                                         : "method,n,param,bias,rmse,fails,seconds")
           << '\n';
        for (const auto& r : report.rows) {
            os << r.method << ',' << r.n << ',' << r.param << ',';
            if (report.has_epsilon_column) os << fmt17(r.epsilon) << ',';
            os << fmt17(r.bias) << ',' << fmt17(r.rmse) << ',' << r.fails << ','
               << fmt17(r.seconds) << '\n';
        }
        return os.str();
    }
    if (format == "markdown") {
        if (report.has_epsilon_column) {
            os << "| method | n | param | epsilon | bias | rmse | fails | seconds |\n";
            os << "|---|---|---|---|---|---|---|---|\n";
        } else {
            os << "| method | n | param | bias | rmse | fails | seconds |\n";
            os << "|---|---|---|---|---|---|---|\n";
        }
        char buf[64];
        auto f3 = [&](double x) {
            std::snprintf(buf, sizeof buf, "%.4f", x);
            return std::string(buf);
        };
        for (const auto& r : report.rows) {
            os << "| " << r.method << " | " << r.n << " | " << r.param << " | ";
            if (report.has_epsilon_column) os << f3(r.epsilon) << " | ";
            os << f3(r.bias) << " | " << f3(r.rmse) << " | " << r.fails << " | " << f3(r.seconds)
               << " |\n";
        }
        return os.str();
    }
    throw std::invalid_argument("render_report: format must be csv or markdown");
}

ExperimentReport parse_report_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty report");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ExperimentReport report;
    bool with_eps;
    if (line == "method,n,param,epsilon,bias,rmse,fails,seconds")
        with_eps = true;
    else if (line == "method,n,param,bias,rmse,fails,seconds")
        with_eps = false;
    else
        throw std::runtime_error("unrecognized report header: " + line);
    report.has_epsilon_column = with_eps;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != (with_eps ? 8u : 7u))
            throw std::runtime_error("malformed report row: " + line);
        ReportRow r;
        std::size_t i = 0;
        r.method = f[i++];
        r.n = std::stoi(f[i++]);
        r.param = f[i++];
        if (with_eps) r.epsilon = std::stod(f[i++]);
        r.bias = std::stod(f[i++]);
        r.rmse = std::stod(f[i++]);
        r.fails = std::stoi(f[i++]);
        r.seconds = std::stod(f[i++]);
        report.rows.push_back(std::move(r));
    }
    return report;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    bool methods_set = false;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "family") {
                cfg.family = family_from_name(val);
            } else if (key == "true_params") {
                cfg.true_params = parse_doubles(val);
            } else if (key == "sample_sizes") {
                cfg.sample_sizes.clear();
                for (double x : parse_doubles(val)) cfg.sample_sizes.push_back(static_cast<int>(x));
            } else if (key == "replications") {
                cfg.replications = std::stoi(val);
            } else if (key == "methods") {
                cfg.methods.clear();
                for (const auto& tok : split(val, ','))
                    cfg.methods.push_back(method_from_name(trim(tok)));
                methods_set = true;
            } else if (key == "epsilon") {
                cfg.epsilon = std::stod(val);
            } else if (key == "epsilon_grid") {
                cfg.epsilon_grid = parse_doubles(val);
            } else if (key == "contaminant_family") {
                cfg.contaminant_family = family_from_name(val);
            } else if (key == "contaminant_params") {
                cfg.contaminant_params = parse_doubles(val);
            } else if (key == "base_seed") {
                cfg.base_seed = std::stoull(val);
            } else if (key == "use_openmp") {
                if (val == "true" || val == "1")
                    cfg.use_openmp = true;
                else if (val == "false" || val == "0")
                    cfg.use_openmp = false;
                else
                    throw std::invalid_argument("expected true/false");
            } else {
                throw std::invalid_argument("unknown config key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + " (" + key +
                                        "): " + e.what());
        }
    }
    if (cfg.true_params.empty())
        throw std::invalid_argument("config: true_params is required");
    if (static_cast<int>(cfg.true_params.size()) != param_count(cfg.family))
        throw std::invalid_argument("config: true_params has the wrong length for the family");
    (void)methods_set;
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config_text(os.str());
}

}  // namespace blm
