#include "blwork/analysis.hpp"

#include "blwork/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace blwork {

namespace {

// (1/2 pi) int log+|exp(e^z)| over |z| = r, split where cos(r sin t) changes sign
double exp_exp_proximity(double r)
{
    if (!(r > 0.0) || r > 700.0) throw std::domain_error("nevanlinna: exp_exp needs 0 < r <= 700");
    std::vector<double> cuts{-kPi, kPi};
    for (long k = long(std::floor(-r / kPi - 0.5)); k <= long(std::ceil(r / kPi)); ++k) {
        double s = (0.5 * kPi + k * kPi) / r;
        if (std::abs(s) > 1.0) continue;
        double t = std::asin(s);
        cuts.push_back(t);
        cuts.push_back(t >= 0 ? kPi - t : -kPi - t);
    }
    std::sort(cuts.begin(), cuts.end());
    auto g = [r](double t) { return std::exp(r * std::cos(t)) * std::cos(r * std::sin(t)); };
    std::vector<double> parts;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-15) continue;
        if (g(0.5 * (a + b)) <= 0.0) continue;
        double prev = composite_gl(g, a, b, 1, 32);
        for (int panels = 2; panels <= 1024; panels *= 2) {
            double cur = composite_gl(g, a, b, panels, 32);
            bool done = std::abs(cur - prev) <= 1e-13 * std::abs(cur);
            prev = cur;
            if (done) break;
        }
        parts.push_back(prev);
    }
    return pairwise_sum(std::span<const double>(parts)) / kTwoPi;
}

} // namespace

NevanlinnaSample nevanlinna_model(const std::string& tag, double r)
{
    NevanlinnaSample s;
    s.r = r;
    if (tag == "exp_exp") {
        s.m = exp_exp_proximity(r);
    } else if (tag.rfind("const:", 0) == 0) {
        s.m = std::max(0.0, std::log(std::abs(std::stod(tag.substr(6)))));
    } else {
        throw std::invalid_argument("nevanlinna: unknown model tag '" + tag + "'");
    }
    s.T = s.m + s.N_count;
    return s;
}

double proximity(const std::function<ScaledComplex(cplx)>& f, double r, double tol)
{
    auto u = [&](double t) {
        ScaledComplex v = f(std::polar(r, t));
        if (v.is_zero()) return -745.0;
        if (v.is_pole()) return 745.0;   // integrable spike; nodes never land on it in practice
        return v.log_modulus;
    };
    auto lp = [&](double t) { return std::max(0.0, u(t)); };
    // log+|f| has kinks where |f| = 1: split there so each piece is smooth
    const int M = 2048;
    std::vector<double> cuts{-kPi};
    double t0 = -kPi, u0 = u(t0);
    for (int i = 1; i <= M; ++i) {
        double t1 = -kPi + kTwoPi * i / M, u1 = u(t1);
        if ((u0 > 0.0) != (u1 > 0.0)) {
            double lo = t0, hi = t1;
            const bool lo_pos = u0 > 0.0;
            for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi);
                ((u(mid) > 0.0) == lo_pos ? lo : hi) = mid;
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        t0 = t1;
        u0 = u1;
    }
    cuts.push_back(kPi);
    std::vector<double> parts;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b <= a) continue;
        if (u(0.5 * (a + b)) <= 0.0) continue;
        double prev = composite_gl(lp, a, b, 2), cur = 0.0;
        bool settled = false;
        for (int panels = 4; panels <= 8192; panels *= 2) {
            cur = composite_gl(lp, a, b, panels);
            if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) {
                settled = true;
                break;
            }
            prev = cur;
        }
        if (!settled) throw std::runtime_error("proximity: quadrature did not settle");
        parts.push_back(cur);
    }
    return pairwise_sum(std::span<const double>(parts)) / kTwoPi;
}

double counting_integral(const std::function<double(double)>& n, double r, double n0, int samples)
{
    if (!(r > 0.0) || samples < 2) throw std::invalid_argument("counting_integral: bad arguments");
    const double u0 = std::log(r * 1e-3), u1 = std::log(r), du = (u1 - u0) / (samples - 1);
    std::vector<double> v(samples);
    for (int i = 0; i < samples; ++i) {
        double w = (i == 0 || i == samples - 1) ? 0.5 : 1.0;
        v[i] = w * (n(std::exp(u0 + i * du)) - n0) * du;
    }
    return pairwise_sum(std::span<const double>(v)) + n0 * std::log(r);
}

double counting_integral_exact(const std::vector<double>& moduli, double r)
{
    std::vector<double> v;
    for (double a : moduli)
        if (a > 0.0 && a <= r) v.push_back(std::log(r / a));
    return pairwise_sum(std::span<const double>(v));
}

NevanlinnaSample nevanlinna(const FunctionHandle& f, double r, const std::function<double(double)>& n, double n0,
                            int samples)
{
    NevanlinnaSample s;
    s.r = r;
    s.m = proximity(f.eval, r);
    s.N_count = counting_integral(n, r, n0, samples);
    s.T = s.m + s.N_count;
    return s;
}

ExponentFit exponent_of_convergence(const std::vector<std::pair<double, double>>& counts)
{
    std::vector<double> lr, ln, llr;
    for (auto [r, n] : counts) {
        if (n <= 0.0 || r <= std::exp(1.0)) continue;
        lr.push_back(std::log(r));
        ln.push_back(std::log(n));
        llr.push_back(std::log(std::log(r)));
    }
    if (lr.size() < 8) throw std::invalid_argument("exponent_of_convergence: need at least 8 radii with n > 0");
    ExponentFit e;
    e.points = int(lr.size());
    LineFit a = fit_line(lr, ln), b = fit_line(llr, ln);
    e.lambda = a.slope;
    e.rms = a.rms;
    e.loglog_beta = b.slope;
    e.loglog_rms = b.rms;
    e.band_lo = e.loglog_band_lo = 1e300;
    e.band_hi = e.loglog_band_hi = 0.0;
    for (size_t i = 0; i < lr.size(); ++i) {
        double q = std::exp(ln[i] - e.lambda * lr[i]), p = std::exp(ln[i] - e.loglog_beta * llr[i]);
        e.band_lo = std::min(e.band_lo, q);
        e.band_hi = std::max(e.band_hi, q);
        e.loglog_band_lo = std::min(e.loglog_band_lo, p);
        e.loglog_band_hi = std::max(e.loglog_band_hi, p);
    }
    e.prefer_loglog = b.rms < a.rms;
    return e;
}

} // namespace blwork
