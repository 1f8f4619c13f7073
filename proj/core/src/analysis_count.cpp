#include "blwork/analysis.hpp"

#include "blwork/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace blwork {

FunctionHandle model_handle(const PairIndex& pair, Variant v)
{
    auto m = Model::get(pair);
    FunctionHandle h;
    h.eval = [m, v](cplx z) { return m->eval(z, v); };
    h.derivative = [m, v](cplx z) { return m->derivative(z, v); };
    h.pole_carrier = [m](cplx z) {
        PolyLog q = m->log_Q(z);
        return q.exact_zero ? ScaledComplex::zero() : ScaledComplex::from_log(q.log_value);
    };
    h.rects.push_back(Rect{-1e300, 1e300, -1e300, 1e300});
    return h;
}

namespace {

std::array<cplx, 5> corners(const Rect& r)
{
    return {cplx(r.x0, r.y0), cplx(r.x1, r.y0), cplx(r.x1, r.y1), cplx(r.x0, r.y1), cplx(r.x0, r.y0)};
}

double edge_phase(const std::function<ScaledComplex(cplx)>& eval, cplx a, cplx b, const ScaledComplex& fa,
                  const ScaledComplex& fb, double min_len, long& nodes, int depth)
{
    cplx m = 0.5 * (a + b);
    ScaledComplex fm = eval(m);
    ++nodes;
    if (!fm.is_finite()) throw BoundaryProximityError("zero or pole on the contour");
    double d = wrap_phase(fb.phase - fa.phase);
    double d1 = wrap_phase(fm.phase - fa.phase), d2 = wrap_phase(fb.phase - fm.phase);
    if (std::abs(d1) < 0.5 && std::abs(d2) < 0.5 && std::abs(d1 + d2 - d) < 1e-9) return d1 + d2;
    if (depth > 60 || std::abs(b - a) < min_len)
        throw BoundaryProximityError("argument not resolved near the contour");
    return edge_phase(eval, a, m, fa, fm, min_len, nodes, depth + 1) +
           edge_phase(eval, m, b, fm, fb, min_len, nodes, depth + 1);
}

// (1/2 pi i) int_a^b f'/f dz, doubling panels until stable
cplx edge_logderiv(const FunctionHandle& f, cplx a, cplx b, int max_panels, long& nodes)
{
    const GaussRule& g = gauss_legendre(16);
    auto integrate = [&](int panels) {
        std::vector<cplx> parts(panels);
        cplx h = (b - a) / double(panels);
        for (int p = 0; p < panels; ++p) {
            cplx mid = a + (p + 0.5) * h, s = 0.0;
            for (int k = 0; k < 16; ++k) {
                cplx z = mid + 0.5 * g.x[k] * h;
                ScaledComplex v = f.eval(z), d = f.derivative(z);
                if (!v.is_finite() || d.is_pole()) throw BoundaryProximityError("zero or pole on the contour");
                if (d.is_zero()) continue;
                ScaledComplex q = d / v;
                if (q.log_modulus > 600.0) throw BoundaryProximityError("log-derivative overflow on the contour");
                s += g.w[k] * q.to_complex();
            }
            parts[p] = s * 0.5 * h;
        }
        nodes += 16L * panels;
        return pairwise_sum(std::span<const cplx>(parts));
    };
    cplx prev = integrate(4);
    for (int panels = 8; panels <= max_panels; panels *= 2) {
        cplx cur = integrate(panels);
        if (std::abs(cur - prev) < 1e-10 * (1.0 + std::abs(cur))) return cur / cplx(0.0, kTwoPi);
        prev = cur;
    }
    throw BoundaryProximityError("log-derivative quadrature did not settle");
}

struct Raw {
    double value;
    double defect;
};

Raw contour_value(const FunctionHandle& f, const Rect& r, int max_panels, long& nodes)
{
    auto c = corners(r);
    if (f.derivative) {
        cplx total = 0.0;
        for (int e = 0; e < 4; ++e) total += edge_logderiv(f, c[e], c[e + 1], max_panels, nodes);
        double n = std::round(total.real());
        return {total.real(), std::hypot(total.real() - n, total.imag())};
    }
    double w = winding_by_phase(f.eval, r, &nodes);
    return {w, std::abs(w - std::round(w))};
}

void check_region(const FunctionHandle& f, const Rect& r)
{
    if (f.entire || (f.rects.empty() && f.annuli.empty())) return;
    for (const auto& q : f.rects)
        if (r.x0 >= q.x0 && r.x1 <= q.x1 && r.y0 >= q.y0 && r.y1 <= q.y1) return;
    throw ContractViolation("counting rectangle leaves the declared region");
}

} // namespace

double winding_by_phase(const std::function<ScaledComplex(cplx)>& eval, const Rect& rect, long* nodes)
{
    auto c = corners(rect);
    const double L = std::max(rect.x1 - rect.x0, rect.y1 - rect.y0);
    long count = 0;
    double total = 0.0;
    const int seg = 64;
    for (int e = 0; e < 4; ++e) {
        cplx a = c[e];
        ScaledComplex fa = eval(a);
        ++count;
        if (!fa.is_finite()) throw BoundaryProximityError("zero or pole on the contour");
        for (int s = 1; s <= seg; ++s) {
            cplx b = c[e] + (c[e + 1] - c[e]) * (double(s) / seg);
            ScaledComplex fb = eval(b);
            ++count;
            if (!fb.is_finite()) throw BoundaryProximityError("zero or pole on the contour");
            total += edge_phase(eval, a, b, fa, fb, 1e-12 * L, count, 0);
            a = b;
            fa = fb;
        }
    }
    if (nodes) *nodes += count;
    return total / kTwoPi;
}

CountResult count_zeros_poles(const FunctionHandle& f, const Rect& rect, const CountOptions& opt)
{
    if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) throw std::invalid_argument("count_zeros_poles: empty rectangle");
    if (opt.check_region) check_region(f, rect);
    if (!f.entire && !f.pole_carrier && f.rects.empty() && f.annuli.empty())
        throw ContractViolation("count_zeros_poles: meromorphic handle without a pole carrier");
    CountResult res;
    const double size = std::max(rect.x1 - rect.x0, rect.y1 - rect.y0);
    std::string last;
    for (int attempt = 0; attempt <= (opt.allow_nudge ? opt.max_retries : 0); ++attempt) {
        Rect r = rect;
        if (attempt > 0) {
            double d = 1e-4 * std::max(1.0, size) * std::pow(3.0, attempt - 1);
            r = Rect{rect.x0 - d, rect.x1 + d, rect.y0 - d, rect.y1 + d};
        }
        try {
            long nodes = 0;
            Raw zp = contour_value(f, r, opt.max_panels, nodes);
            if (zp.defect >= opt.tol) {
                last = "integer defect " + std::to_string(zp.defect);
                continue;
            }
            int P = 0;
            if (f.pole_carrier) {
                double w = winding_by_phase(f.pole_carrier, r, &nodes);
                P = int(std::lround(w));
            }
            res.value = zp.value;
            res.defect = zp.defect;
            res.P = P;
            res.Z = int(std::lround(zp.value)) + P;
            res.retries = attempt;
            res.used = r;
            res.nodes = nodes;
            return res;
        } catch (const BoundaryProximityError& e) {
            last = e.what();
        }
    }
    throw BoundaryProximityError("count_zeros_poles: " + last);
}

namespace {

struct Locator {
    const FunctionHandle& f;
    double tol;
    LocateOptions opt;
    ZeroSet out;

    int zeros_in(const Rect& r, bool nudge)
    {
        CountOptions co;
        co.allow_nudge = nudge;
        co.check_region = false;
        return count_zeros_poles(f, r, co).Z;
    }

    cplx deriv(cplx z, double h)
    {
        if (f.derivative) return f.derivative(z).to_complex_saturated();
        return (f.value(z + h) - f.value(z - h)) / (2.0 * h);
    }

    double local_scale_log(const Rect& r)
    {
        double s = -1e300;
        for (double u : {0.0, 0.5, 1.0})
            for (double v : {0.0, 0.5, 1.0}) {
                if (u == 0.5 && v == 0.5) continue;
                ScaledComplex w = f.eval(cplx(r.x0 + u * (r.x1 - r.x0), r.y0 + v * (r.y1 - r.y0)));
                if (w.is_finite()) s = std::max(s, w.log_modulus);
            }
        return s;
    }

    bool newton(const Rect& r)
    {
        double diam = std::hypot(r.x1 - r.x0, r.y1 - r.y0);
        cplx z(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
        double h = 1e-5 * diam;
        int it = 0;
        bool done = false;
        for (; it < opt.max_newton; ++it) {
            ScaledComplex v = f.eval(z);
            if (v.is_zero()) { done = true; break; }
            if (!v.is_finite()) return false;
            ScaledComplex d = f.derivative ? f.derivative(z) : ScaledComplex::from_complex(deriv(z, h));
            if (!d.is_finite()) return false;
            cplx step = (v / d).to_complex_saturated();
            if (std::abs(step) > 0.5 * diam) step *= 0.5 * diam / std::abs(step);
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) { done = true; ++it; break; }
        }
        const double pad = 0.05 * diam;
        if (!done || z.real() < r.x0 - pad || z.real() > r.x1 + pad || z.imag() < r.y0 - pad || z.imag() > r.y1 + pad)
            return false;
        ScaledComplex v = f.eval(z);
        double resid = v.is_zero() ? 0.0 : std::exp(v.log_modulus - local_scale_log(r));
        if (resid > tol) return false;
        for (cplx p : out.points)
            if (std::abs(p - z) < 1e-9 * (1.0 + std::abs(z))) return true;   // shared edge duplicate
        out.points.push_back(z);
        out.residual.push_back(resid);
        out.newton_iters.push_back(it);
        return true;
    }

    void run(const Rect& r, int Z, int depth)
    {
        if (Z <= 0) return;
        double diam = std::hypot(r.x1 - r.x0, r.y1 - r.y0);
        if (Z == 1 && newton(r)) return;
        if (depth >= opt.max_depth) throw std::runtime_error("locate_zeros: max depth exceeded");
        if (Z == 1 && diam < 1e-3 * opt.cell_diameter)
            throw std::runtime_error("locate_zeros: Newton failed on an isolated cell");
        static const double fracs[] = {0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65};
        for (double fr : fracs) {
            double xm = r.x0 + fr * (r.x1 - r.x0), ym = r.y0 + fr * (r.y1 - r.y0);
            Rect kids[4] = {{r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym}, {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
            int counts[4];
            try {
                int sum = 0;
                for (int i = 0; i < 4; ++i) sum += counts[i] = zeros_in(kids[i], false);
                if (sum != Z) continue;
            } catch (const BoundaryProximityError&) {
                continue;
            }
            for (int i = 0; i < 4; ++i) run(kids[i], counts[i], depth + 1);
            return;
        }
        throw BoundaryProximityError("locate_zeros: no admissible subdivision");
    }
};

} // namespace

ZeroSet locate_zeros(const FunctionHandle& f, const Rect& region, double tol, const LocateOptions& opt)
{
    Locator loc{f, tol, opt, {}};
    CountOptions co;
    CountResult top = count_zeros_poles(f, region, co);
    loc.run(top.used, top.Z, 0);
    return std::move(loc.out);
}

ZeroSet locate_poles(const FunctionHandle& f, const Rect& region, double tol, const LocateOptions& opt)
{
    if (!f.pole_carrier) throw ContractViolation("locate_poles: handle has no pole carrier");
    FunctionHandle q;
    q.eval = f.pole_carrier;
    q.entire = true;
    ZeroSet zs = locate_zeros(q, region, tol, opt);
    zs.kind = ZeroSet::Kind::pole;
    return zs;
}

} // namespace blwork
