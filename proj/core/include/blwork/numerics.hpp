#pragma once

#include "blwork/scaled_complex.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace blwork {

// Gauss-Legendre rule on [-1, 1]; cached per order.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Deterministic pairwise (tree) reduction.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;   // root mean square residual
    int points = 0;
};
// Ordinary least squares y = intercept + slope*x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Solve f(x) = 0 for a strictly increasing f with derivative df, starting from
// a guess. Expands a bracket geometrically, bisects to width bisect_width and
// finishes with Newton, falling back to bisection when Newton leaves the bracket.
RootResult solve_increasing(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            double guess, double tol = 1e-14,
                            double bisect_width = 1e-3);

// Composite Gauss-Legendre on [a, b] with `panels` panels of `order` nodes.
template <class F>
auto composite_gl(F&& f, double a, double b, int panels, int order = 16)
{
    const GaussRule& g = gauss_legendre(order);
    using R = decltype(f(a));
    std::vector<R> parts(panels);
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h, mid = lo + 0.5 * h;
        R s{};
        for (int k = 0; k < order; ++k) s += g.w[k] * f(mid + 0.5 * h * g.x[k]);
        parts[p] = s * (0.5 * h);
    }
    return pairwise_sum(std::span<const R>(parts));
}

} // namespace blwork
