#include "blwork/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace blwork {

const GaussRule& gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (n == 1) { x = 0.0; dp = 1.0; }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (n == 1) w = 2.0;
        g.x[i] = -x;
        g.x[n - 1 - i] = x;
        g.w[i] = g.w[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(g)).first->second;
}

namespace {
template <class T>
T tree_sum(std::span<const T> v)
{
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    size_t h = v.size() / 2;
    return tree_sum(v.subspan(0, h)) + tree_sum(v.subspan(h));
}
} // namespace

double pairwise_sum(std::span<const double> v) { return tree_sum(v); }
cplx pairwise_sum(std::span<const cplx> v) { return tree_sum(v); }

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    f.points = int(x.size());
    return f;
}

RootResult solve_increasing(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            double guess, double tol, double bisect_width)
{
    RootResult r;
    double lo = guess, hi = guess;
    double flo = f(lo), fhi = flo;
    if (flo == 0.0) return {guess, 0.0, 0, true};
    double step = std::max(1.0, std::abs(guess) * 1e-3);
    if (flo < 0.0) {
        hi = guess + step;
        while ((fhi = f(hi)) < 0.0) {
            lo = hi;
            flo = fhi;
            step *= 2.0;
            hi += step;
            if (++r.iterations > 200) throw std::runtime_error("solve_increasing: bracketing failed");
        }
    } else {
        lo = guess - step;
        while ((flo = f(lo)) > 0.0) {
            hi = lo;
            fhi = flo;
            step *= 2.0;
            lo -= step;
            if (++r.iterations > 200) throw std::runtime_error("solve_increasing: bracketing failed");
        }
    }
    while (hi - lo > bisect_width * std::max(1.0, std::abs(lo))) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        ++r.iterations;
        if (fm == 0.0) return {mid, 0.0, r.iterations, true};
        (fm < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    for (int it = 0; it < 100; ++it) {
        ++r.iterations;
        if (fx < 0.0) lo = x; else hi = x;
        double d = df(x);
        double xn = x - fx / d;
        if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
        double step2 = std::abs(xn - x);
        x = xn;
        fx = f(x);
        if (fx == 0.0 || step2 <= tol * std::max(1.0, std::abs(x)) || hi - lo <= tol * std::max(1.0, std::abs(x))) {
            r.converged = true;
            break;
        }
    }
    r.x = x;
    r.residual = fx;
    return r;
}

} // namespace blwork
