#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace blm {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Standard Nelder-Mead simplex search (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2). Stops when the simplex function spread and
// diameter drop below ftol/xtol, or at max_iter.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, double step = 0.1,
                                    int max_iter = 2000, double ftol = 1e-10,
                                    double xtol = 1e-9) {
    const std::size_t d = start.size();
    std::vector<std::vector<double>> pts(d + 1, start);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step * (1.0 + std::abs(start[i]));
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);

    NelderMeadResult res;
    std::vector<std::size_t> ord(d + 1);
    for (; res.iterations < max_iter; ++res.iterations) {
        for (std::size_t i = 0; i <= d; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = ord[0], worst = ord[d], second = ord[d - 1];

        double diam = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                diam = std::max(diam, std::abs(pts[i][k] - pts[best][k]));
        if (std::abs(fv[worst] - fv[best]) < ftol && diam < xtol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k];
        for (std::size_t k = 0; k < d; ++k) centroid[k] /= static_cast<double>(d);

        auto blend = [&](double coef) {
            std::vector<double> p(d);
            for (std::size_t k = 0; k < d; ++k)
                p[k] = centroid[k] + coef * (pts[worst][k] - centroid[k]);
            return p;
        };

        const auto refl = blend(-1.0);
        const double fr = f(refl);
        if (fr < fv[best]) {
            const auto exp_pt = blend(-2.0);
            const double fe = f(exp_pt);
            if (fe < fr) {
                pts[worst] = exp_pt;
                fv[worst] = fe;
            } else {
                pts[worst] = refl;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = refl;
            fv[worst] = fr;
        } else {
            const auto contr = blend(fr < fv[worst] ? -0.5 : 0.5);
            const double fc = f(contr);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = contr;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k)
                        pts[i][k] = 0.5 * (pts[i][k] + pts[best][k]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t b = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (fv[i] < fv[b]) b = i;
    res.x = pts[b];
    res.value = fv[b];
    return res;
}

}  // namespace blm
