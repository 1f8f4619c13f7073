#include "blwork/surgery.hpp"

#include "blwork/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace blwork {

double dilatation_of(cplx mu)
{
    const double a = std::abs(mu);
    if (a >= 1.0) return std::numeric_limits<double>::infinity();
    return (1.0 + a) / (1.0 - a);
}

cplx beltrami_from_jacobian(const std::array<double, 4>& J)
{
    const cplx fz(0.5 * (J[0] + J[3]), 0.5 * (J[2] - J[1]));
    const cplx fzb(0.5 * (J[0] - J[3]), 0.5 * (J[2] + J[1]));
    if (fzb == cplx(0.0)) return 0.0;
    return fzb / fz;
}

std::vector<cplx> GluedMap::zeros_within(double) const
{
    throw std::logic_error(flavor() + ": closed-form zero enumeration unavailable");
}

std::vector<cplx> GluedMap::poles_within(double) const
{
    throw std::logic_error(flavor() + ": closed-form pole enumeration unavailable");
}

std::vector<SeamReport> check_seams(const GluedMap& map, int samples, double max_calN)
{
    std::vector<SeamReport> out;
    for (const auto& seam : map.seams(max_calN)) {
        SeamReport rep;
        rep.name = seam.name;
        rep.samples = samples;
        for (int i = 0; i < samples; ++i) {
            const double u = samples == 1 ? seam.u0
                                          : seam.u0 + (seam.u1 - seam.u0) * i / double(samples - 1);
            auto [a, b] = seam.sides(u);
            double gap;
            if (a.is_finite() && b.is_finite()) gap = log_gap(a, b);
            else gap = a.kind == b.kind ? 0.0 : std::numeric_limits<double>::infinity();
            if (gap > rep.max_gap || std::isnan(gap)) {
                rep.max_gap = std::isnan(gap) ? std::numeric_limits<double>::infinity() : gap;
                rep.worst_u = u;
            }
        }
        out.push_back(rep);
    }
    return out;
}

Beltrami beltrami_at(const GluedMap& map, cplx z) { return map.beltrami_at(z); }

// ---- spiral charts ----

SpiralCharts spiral_charts(double kappa)
{
    if (!(kappa > 0.0)) throw std::invalid_argument("spiral_charts: kappa must be positive");
    SpiralCharts c;
    c.kappa = kappa;
    const double L = std::log(kappa);
    c.a = L / kTwoPi;
    c.mu = kTwoPi / (4.0 * kPi * kPi + L * L) * cplx(kTwoPi, -L);
    return c;
}

cplx SpiralCharts::p(cplx w) const
{
    if (a == 0.0) return w;
    return std::exp(mu * std::log(w));
}

cplx SpiralCharts::h_branch(cplx z, int j) const
{
    const cplx L = std::log(z) + cplx(0.0, kTwoPi * j);
    return std::exp(L * cplx(1.0, a));
}

cplx SpiralCharts::h(cplx z) const
{
    if (a == 0.0) return z;
    // arg h = theta + a log r + 2 pi j; pick j so it lands in (-pi, pi]
    const double t = std::arg(z) + a * std::log(std::abs(z));
    int j = int(std::lround(-t / kTwoPi));
    if (t + kTwoPi * j <= -kPi) ++j;
    if (t + kTwoPi * j > kPi) --j;
    return h_branch(z, j);
}

// ---- strip homeomorphism ----

StripHomeo::StripHomeo(DiffeoSpec spec) : spec_(std::move(spec)) {}

StripHomeo build_strip_homeo(const DiffeoSpec& spec) { return StripHomeo(spec); }

namespace {

struct EdgeMap {
    double f, df;   // phi-edge value and x-derivative
};

EdgeMap edge(const DiffeoSpec& s, double x)
{
    if (s.identity()) return {x, 1.0};
    if (x >= 0.0) return {s.phi(x), s.phi_prime(x)};
    const double k = s.kappa();
    return {s.phi(x / k), s.phi_prime(x / k) / k};
}

} // namespace

cplx StripHomeo::operator()(cplx w) const
{
    if (!in_band(w) || spec_.identity()) return w;
    const double x = w.real(), t = -w.imag();
    const EdgeMap e = edge(spec_, x);
    return {e.f + t * (x - e.f), w.imag()};
}

std::array<double, 4> StripHomeo::jacobian(cplx w) const
{
    if (!in_band(w) || spec_.identity()) return {1.0, 0.0, 0.0, 1.0};
    const double x = w.real(), t = -w.imag();
    const EdgeMap e = edge(spec_, x);
    return {e.df + t * (1.0 - e.df), -(x - e.f), 0.0, 1.0};
}

std::array<double, 4> StripHomeo::jacobian_fd(cplx w, double h) const
{
    const cplx px = ((*this)(w + h) - (*this)(w - h)) / (2.0 * h);
    const cplx py = ((*this)(w + cplx(0, h)) - (*this)(w - cplx(0, h))) / (2.0 * h);
    return {px.real(), py.real(), px.imag(), py.imag()};
}

cplx StripHomeo::beltrami(cplx w) const { return beltrami_from_jacobian(jacobian(w)); }

// ---- spiral map (flavor thm3) ----

namespace {

double kappa_of(const PairIndex& src, const PairIndex& dst)
{
    return double(dst.N()) / double(src.N());
}

} // namespace

SpiralMap::SpiralMap(PairIndex src, PairIndex dst)
    : src_(src), dst_(dst),
      g1_(Model::get(src)), g2_(Model::get(dst)),
      charts_(spiral_charts(kappa_of(src, dst))),
      psi_(DiffeoSpec(ModelRef{src, Variant::plain}, ModelRef{dst, Variant::plain}))
{
    if (std::abs(psi_.spec().kappa() - charts_.kappa) > 1e-12)
        throw std::logic_error("spiral map: kappa mismatch");
}

ScaledComplex SpiralMap::from_chart(cplx w, bool lower) const
{
    if (!lower) return g2_->eval(w);
    return g1_->eval(psi_(w));
}

EvalResult SpiralMap::evaluate(cplx z) const
{
    EvalResult r;
    if (z == cplx(0.0)) {
        r.value = g2_->eval(0.0);   // h(0) = 0 on both sides
        return r;
    }
    const cplx w = charts_.h(z);
    const bool lower = w.imag() < 0.0;
    r.piece = lower ? 1 : 2;
    r.band = lower && psi_.in_band(w) && !psi_.spec().identity();
    r.value = from_chart(w, lower);
    return r;
}

Beltrami SpiralMap::beltrami_at(cplx z) const
{
    Beltrami b;
    if (z == cplx(0.0)) {
        b.indeterminate = true;
        return b;
    }
    const cplx w = charts_.h(z);
    if (!(w.imag() < 0.0 && psi_.in_band(w)) || psi_.spec().identity()) return b;
    b.band = true;
    const cplx mpsi = psi_.beltrami(w);
    // G = g1 o psi o h with h conformal, h' = h / (mu z)
    const cplx hp = w / (charts_.mu * z);
    b.mu = mpsi * std::conj(hp) / hp;
    b.K = dilatation_of(b.mu);
    b.mu_q = mpsi;
    b.K_q = dilatation_of(mpsi);
    return b;
}

std::vector<Seam> SpiralMap::seams(double) const
{
    std::vector<Seam> out;
    // Gamma': images of the positive axis, values from above and below.
    Seam gp;
    gp.name = "Gamma'";
    gp.u0 = -3.0;
    gp.u1 = std::log(30.0);
    gp.sides = [this](double u) {
        const double x = std::exp(u);
        const cplx z = charts_.p(x);
        const cplx w = charts_.h(z);
        const ScaledComplex up = from_chart(cplx(w.real(), 0.0), false);
        const ScaledComplex lo = from_chart(cplx(w.real(), -0.0), true);
        return std::make_pair(up, lo);
    };
    out.push_back(gp);
    // Gamma: z = p(x + i0) = p(kappa x - i0) for x < 0, reached through two branches of h.
    Seam g;
    g.name = "Gamma";
    g.u0 = -3.0;
    g.u1 = std::log(30.0);
    g.sides = [this](double u) {
        const double x = -std::exp(u);
        const cplx z = charts_.p(cplx(x, 0.0));
        const cplx wa_target(x, 0.0), wb_target(charts_.kappa * x, 0.0);
        cplx wa = charts_.h_branch(z, 0), wb = wa;
        double da = 1e300, db = 1e300;
        for (int j = -4; j <= 4; ++j) {
            const cplx w = charts_.h_branch(z, j);
            if (std::abs(w - wa_target) < da) { da = std::abs(w - wa_target); wa = w; }
            if (std::abs(w - wb_target) < db) { db = std::abs(w - wb_target); wb = w; }
        }
        const ScaledComplex up = from_chart(cplx(wa.real(), 0.0), false);
        const ScaledComplex lo = from_chart(cplx(wb.real(), -0.0), true);
        return std::make_pair(up, lo);
    };
    out.push_back(g);
    return out;
}

std::vector<ThetaWindow> SpiralMap::windows(double r) const
{
    std::vector<ThetaWindow> out;
    if (psi_.spec().identity()) return out;
    const double a = charts_.a;
    const double R = std::pow(r, 1.0 + a * a);
    // band in chart coordinates: |w| |sin phi_w| < 1 with phi_w in (-pi, 0)
    auto f = [&](double ph) { return R * std::exp(-a * ph) * std::sin(-ph) - 1.0; };
    // unimodal on (-pi, 0); locate the maximum by golden section
    double lo = -kPi, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double m1 = lo + (hi - lo) * 0.381966, m2 = lo + (hi - lo) * 0.618034;
        if (f(m1) < f(m2)) lo = m1; else hi = m2;
    }
    const double pm = 0.5 * (lo + hi);
    std::vector<std::pair<double, double>> phis;
    if (f(pm) <= 0.0) {
        phis.push_back({-kPi, 0.0});
    } else {
        auto root = [&](double l, double h) {
            double fl = f(l);
            for (int i = 0; i < 200 && h - l > 1e-16 * (1 + std::abs(l)); ++i) {
                const double m = 0.5 * (l + h), fm = f(m);
                if ((fm < 0) == (fl < 0)) { l = m; fl = fm; } else h = m;
            }
            return 0.5 * (l + h);
        };
        phis.push_back({-kPi, root(-kPi, pm)});
        phis.push_back({root(pm, 0.0), 0.0});
    }
    const double shift = -a * std::log(r);
    for (auto [p0, p1] : phis) {
        double t0 = p0 + shift, t1 = p1 + shift;
        // wrap so that t0 lies in (-pi, pi]
        const double w0 = wrap_phase(t0);
        t1 += w0 - t0;
        t0 = w0;
        if (t1 > kPi) {
            out.push_back({t0, kPi, 0});
            out.push_back({-kPi, t1 - kTwoPi, 0});
        } else {
            out.push_back({t0, t1, 0});
        }
    }
    return out;
}

double SpiralMap::feature_size(double) const { return 1.0; }

std::string SpiralMap::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "flavor=thm3-spiral src=(" << src_.m << ',' << src_.n << ") dst=(" << dst_.m << ','
       << dst_.n << ") kappa=" << charts_.kappa << " mu=" << charts_.mu.real() << ','
       << charts_.mu.imag() << " order=" << charts_.order();
    return os.str();
}

std::vector<cplx> SpiralMap::preimages(const std::vector<cplx>& roots, bool lower_model, double r) const
{
    std::vector<cplx> out;
    const double re_mu = charts_.mu.real(), im_mu = std::abs(charts_.mu.imag());
    // |p(w)| >= |w|^{Re mu} e^{-|Im mu| pi}
    const double wmax = std::pow(r * std::exp(im_mu * kPi), 1.0 / re_mu);
    for (const cplx& q : roots) {
        const double lr = std::log(std::abs(q)), th = std::arg(q);
        for (int sgn : {1, -1}) {
            for (int j = (sgn > 0 ? 0 : -1);; j += sgn) {
                const double y = th + kTwoPi * j;
                if (std::abs(y) > wmax + 1.0) break;
                if (lower_model ? !(y < 0.0) : !(y > 0.0)) continue;
                cplx w(lr, y);
                if (lower_model && y > -1.0 && !psi_.spec().identity()) {
                    // invert X(x, y) = lr; X is increasing in x
                    auto F = [&](double x) { return psi_(cplx(x, y)).real() - lr; };
                    auto dF = [&](double x) { return psi_.jacobian(cplx(x, y))[0]; };
                    w = cplx(solve_increasing(F, dF, lr, 1e-14, 1.0).x, y);
                }
                if (std::abs(w) > wmax) continue;
                const cplx z = charts_.p(w);
                if (std::abs(z) <= r) out.push_back(z);
            }
        }
    }
    return out;
}

std::vector<cplx> SpiralMap::zeros_within(double r) const
{
    auto up = preimages(g2_->zeros_w(), false, r);
    auto lo = preimages(g1_->zeros_w(), true, r);
    up.insert(up.end(), lo.begin(), lo.end());
    return up;
}

std::vector<cplx> SpiralMap::poles_within(double r) const
{
    auto up = preimages(g2_->poles_w(), false, r);
    auto lo = preimages(g1_->poles_w(), true, r);
    up.insert(up.end(), lo.begin(), lo.end());
    return up;
}

} // namespace blwork
