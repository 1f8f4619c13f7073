#include "blwork/diffeo.hpp"

#include "blwork/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

namespace blwork {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kLargeX = 700.0;

// log(binom(m+2n, m) N!) plus log 2 for the half-shift variant: v - 1 behaves
// like exp(N x - offset) as x -> -inf.
double asym_offset(const Model& m, Variant v)
{
    double off = -m.log_C() + std::log(double(m.N()));
    return v == Variant::half_shift ? off + kLog2 : off;
}

double F_of(const Model& m, Variant v, double x) { return m.log_gm1_real(x, v); }
double dF_of(const Model& m, Variant, double x)
{
    return m.dlog_gm1_real(x);
}

// Solve F(u) = T for the increasing F of model m.
double invert_F(const Model& m, Variant v, double T, double hint)
{
    double guess = hint;
    if (T < -5.0) guess = (T + asym_offset(m, v)) / m.N();
    else if (T > 5.0) guess = std::log(T);
    auto f = [&](double u) { return F_of(m, v, u) - T; };
    auto df = [&](double u) { return dF_of(m, v, u); };
    RootResult r = solve_increasing(f, df, guess, 1e-16);
    return r.x;
}

} // namespace

std::string ModelRef::str() const
{
    return pair.str() + (variant == Variant::half_shift ? "^" : "");
}

double model_F(const ModelRef& r, double x)
{
    return Model::get(r.pair)->log_gm1_real(x, r.variant);
}

ShiftConstant solve_shift(const PairIndex& pair, Variant variant)
{
    static std::mutex mu;
    static std::map<std::pair<PairIndex, int>, ShiftConstant> cache;
    auto key = std::make_pair(pair, int(variant));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto m = Model::get(pair);
    double guess = std::log(double(pair.N())) - 1.27846454;
    double s = invert_F(*m, variant, 0.0, guess);
    ShiftConstant sc{pair, variant, s, std::abs(F_of(*m, variant, s))};
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, sc);
    return sc;
}

double lemma3_trans_r0()
{
    auto f = [](double r) { return std::exp(r) + r + 1.0; };
    auto df = [](double r) { return std::exp(r) + 1.0; };
    return solve_increasing(f, df, -1.0, 1e-17).x;
}

DiffeoSpec::DiffeoSpec(ModelRef src, ModelRef dst)
    : src_(src), dst_(dst), ms_(Model::get(src.pair)), md_(Model::get(dst.pair))
{
    const double N = ms_->N(), M = md_->N();
    kappa_ = M / N;
    src_offset_ = asym_offset(*ms_, src.variant);
    c_ = (src_offset_ - asym_offset(*md_, dst.variant)) / N;
    delta_ = 0.5 * std::min(1.0, kappa_);
}

double DiffeoSpec::phi(double x) const
{
    // phi(x) - x = O(x e^{-x}) is below one ulp long before e^x overflows
    if (identity() || x > kLargeX) return x;
    double T = F_of(*md_, dst_.variant, x);
    double hint = kappa_ * x + c_;
    if (T >= -5.0 && T <= 5.0) hint = x;
    return invert_F(*ms_, src_.variant, T, hint);
}

double DiffeoSpec::phi_prime(double x) const
{
    if (identity() || x > kLargeX) return 1.0;
    // v_dst - 1 = v_src(phi) - 1, so the ratio of log-derivatives avoids the e^x terms
    double p = phi(x);
    return md_->dlog_gm1_real(x) / ms_->dlog_gm1_real(p);
}

double DiffeoSpec::phi_prime_fd(double x, double h) const
{
    return (phi(x + h) - phi(x - h)) / (2.0 * h);
}

double DiffeoSpec::residual(double x, double phi_x) const
{
    double a = F_of(*md_, dst_.variant, x);
    double b = F_of(*ms_, src_.variant, phi_x);
    return std::abs(a - b) / std::max(1.0, std::abs(a));
}

std::string DiffeoSpec::str() const
{
    return src_.str() + "->" + dst_.str();
}

double solve_phi(const DiffeoSpec& spec, double x) { return spec.phi(x); }

std::string AsymptoticReport::str() const
{
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "exact=%d decay_slope=%.6f points=%d kappa_hat=%.10f c_hat=%.10f "
                  "dphi(+X)=%.10f dphi(-X)=%.10f max_residual=%.3e",
                  int(exact), decay_slope, decay_points, kappa_hat, c_hat, dphi_plus,
                  dphi_minus, max_residual);
    return buf;
}

AsymptoticReport asymptotic_report(const DiffeoSpec& spec, double X, double step)
{
    if (X < 20.0) throw std::invalid_argument("asymptotic_report: grid must span at least [-20, 20]");
    AsymptoticReport rep;
    if (spec.identity()) {
        rep.exact = true;
        rep.kappa_hat = rep.dphi_plus = rep.dphi_minus = 1.0;
        return rep;
    }
    std::vector<double> xs, ys;
    for (double x = 5.0; x <= X + 1e-12; x += step) {
        double p = spec.phi(x);
        rep.max_residual = std::max(rep.max_residual, spec.residual(x, p));
        double d = std::abs(p - x);
        if (d < 1e-13) continue;
        xs.push_back(x);
        ys.push_back(std::log(d));
    }
    if (xs.size() < 8) throw std::runtime_error("asymptotic_report: degenerate decay fit");
    LineFit fit = fit_line(xs, ys);
    rep.decay_slope = fit.slope;
    rep.decay_intercept = fit.intercept;
    rep.decay_points = fit.points;

    // tail [-X, -X/2], where phi - (kappa x + c) is far below the target accuracy
    xs.clear();
    ys.clear();
    for (double x = -X; x <= -0.5 * X + 1e-12; x += step) {
        double p = spec.phi(x);
        rep.max_residual = std::max(rep.max_residual, spec.residual(x, p));
        xs.push_back(x);
        ys.push_back(p);
    }
    fit = fit_line(xs, ys);
    rep.kappa_hat = fit.slope;
    rep.c_hat = fit.intercept;
    for (double x = -0.5 * X; x < 5.0; x += step)
        rep.max_residual = std::max(rep.max_residual, spec.residual(x, spec.phi(x)));
    rep.dphi_plus = spec.phi_prime_fd(X);
    rep.dphi_minus = spec.phi_prime_fd(-X);
    return rep;
}

Psi::Psi(ModelRef k, ModelRef k1, Side side, int l)
    : spec_(k, k1)
{
    if (side == Side::right) {
        if (l <= 0) throw std::invalid_argument("build_psi: l must be positive");
        a_ = b_ = l;
    } else {
        a_ = k.pair.N();
        b_ = k1.pair.N();
    }
    s0_ = shift_of(k);
    s1_ = shift_of(k1);
    ident_ = spec_.identity() && a_ == b_;
}

double Psi::operator()(double x) const
{
    if (ident_) return x;
    return a_ * spec_.phi(x / b_ + s1_) - a_ * s0_;
}

double Psi::derivative(double x) const
{
    if (ident_) return 1.0;
    return a_ / b_ * spec_.phi_prime(x / b_ + s1_);
}

Psi build_psi(const std::vector<ModelRef>& chain, Side side, int l)
{
    if (chain.size() != 2) throw std::invalid_argument("build_psi: chain must hold (k, k+1)");
    return Psi(chain[0], chain[1], side, l);
}

FixedPointReport find_fixed_points(const DiffeoSpec& spec, double a, double b, double step)
{
    FixedPointReport rep;
    rep.logN = std::log(double(spec.src().pair.N()));
    if (spec.identity()) {
        rep.identity = true;
        return rep;
    }
    auto d = [&](double x) { return spec.phi(x) - x; };
    double x0 = a, d0 = d(a);
    const long steps = long(std::ceil((b - a) / step));
    for (long i = 1; i <= steps; ++i) {
        double x1 = std::min(b, a + i * step), d1 = d(x1);
        if (d0 == 0.0) {
            rep.points.push_back(x0);
        } else if ((d0 < 0) != (d1 < 0) && d1 != 0.0) {
            double lo = x0, hi = x1, dlo = d0;
            double mid = 0.5 * (lo + hi), dm = d(mid);
            for (int it = 0; it < 200 && std::abs(dm) >= 1e-12 && hi - lo > 1e-15; ++it) {
                if ((dm < 0) == (dlo < 0)) { lo = mid; dlo = dm; } else { hi = mid; }
                mid = 0.5 * (lo + hi);
                dm = d(mid);
            }
            rep.points.push_back(mid);
        }
        x0 = x1;
        d0 = d1;
    }
    for (double p : rep.points) rep.residuals.push_back(std::abs(d(p)));
    return rep;
}

} // namespace blwork
