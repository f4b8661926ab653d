#include "mortex/quadrature.hpp"

#include <cmath>

namespace mortex {

const GaussRule& triangle_rule() {
    // interior 3-point rule, degree 2
    static const GaussRule rule = {
        {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}},
        {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0}};
    return rule;
}

const GaussRule& volume_rule(ElemKind kind) {
    if (kind == ElemKind::T3) return triangle_rule();
    static const GaussRule q4 = [] {
        GaussRule r;
        const double g = 1.0 / std::sqrt(3.0);
        for (double eta : {-g, g})
            for (double mu : {-g, g}) {
                r.points.emplace_back(mu, eta);
                r.weights.push_back(1.0);
            }
        return r;
    }();
    return q4;
}

const GaussRule1d& segment_rule() {
    static const GaussRule1d rule = gauss_legendre(3);
    return rule;
}

GaussRule1d gauss_legendre(int n) {
    GaussRule1d r;
    r.points.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton from Chebyshev initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.points[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace mortex
