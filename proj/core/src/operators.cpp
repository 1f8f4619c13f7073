#include "blwork/operators.hpp"

#include "blwork/numerics.hpp"

#include <cmath>

namespace blwork {

bool Rect::contains_disk(cplx c, double r) const
{
    return c.real() - r >= x0 && c.real() + r <= x1 && c.imag() - r >= y0 && c.imag() + r <= y1;
}

bool Annulus::contains_disk(cplx c, double r) const
{
    double d = std::abs(c - center);
    return d - r >= r0 && d + r <= r1;
}

bool FunctionHandle::disk_allowed(cplx z, double r) const
{
    if (entire) return true;
    for (const auto& q : rects)
        if (q.contains_disk(z, r)) return true;
    for (const auto& a : annuli)
        if (a.contains_disk(z, r)) return true;
    return false;
}

FunctionHandle FunctionHandle::entire_function(std::function<cplx(cplx)> f)
{
    FunctionHandle h;
    h.eval = [f](cplx z) { return ScaledComplex::from_complex(f(z)); };
    h.entire = true;
    return h;
}

FunctionHandle FunctionHandle::on_rect(std::function<cplx(cplx)> f, Rect r)
{
    FunctionHandle h;
    h.eval = [f](cplx z) { return ScaledComplex::from_complex(f(z)); };
    h.rects.push_back(r);
    return h;
}

namespace {

struct Pass {
    std::vector<cplx> d;
    std::vector<double> theta;
    std::vector<cplx> vals;
    double fmax = 0.0;
};

Pass one_pass(const FunctionHandle& f, cplx z, double r, int kmax, int panels)
{
    const int order = 16;
    const GaussRule& g = gauss_legendre(order);
    const double h = kTwoPi / panels;
    Pass p;
    p.theta.reserve(panels * order);
    for (int q = 0; q < panels; ++q)
        for (int k = 0; k < order; ++k) p.theta.push_back(h * (q + 0.5 + 0.5 * g.x[k]));
    p.vals.resize(p.theta.size());
    for (size_t i = 0; i < p.theta.size(); ++i) {
        p.vals[i] = f.value(z + std::polar(r, p.theta[i]));
        p.fmax = std::max(p.fmax, std::abs(p.vals[i]));
    }
    // f^{(k)}(z) = k!/(2 pi r^k) * int f(z + r e^{it}) e^{-ikt} dt
    p.d.assign(kmax + 1, 0.0);
    std::vector<cplx> terms(p.theta.size());
    double fact = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        if (k > 0) fact *= k;
        for (size_t i = 0; i < p.theta.size(); ++i) {
            double w = g.w[i % order] * 0.5 * h;
            terms[i] = w * p.vals[i] * std::polar(1.0, -k * p.theta[i]);
        }
        p.d[k] = pairwise_sum(std::span<const cplx>(terms)) * fact / (kTwoPi * std::pow(r, k));
    }
    return p;
}

int winding(const std::vector<cplx>& vals, cplx shift, bool& resolved)
{
    double total = 0.0;
    resolved = true;
    for (size_t i = 0; i < vals.size(); ++i) {
        cplx a = vals[i] - shift, b = vals[(i + 1) % vals.size()] - shift;
        if (a == 0.0 || b == 0.0) { resolved = false; continue; }
        double dphi = std::arg(b / a);
        if (std::abs(dphi) > kPi / 2) resolved = false;
        total += dphi;
    }
    return int(std::lround(total / kTwoPi));
}

} // namespace

CauchyResult cauchy_derivatives(const FunctionHandle& f, cplx z, double r, int kmax,
                                double rel_tol, cplx winding_shift, bool shift_is_center_value)
{
    if (!(r > 0.0)) throw std::invalid_argument("cauchy_derivatives: radius must be positive");
    if (!f.disk_allowed(z, r))
        throw ContractViolation("contour disk leaves the declared analyticity region");
    CauchyResult res;
    Pass prev = one_pass(f, z, r, kmax, 4);
    for (int panels = 8; panels <= 4096; panels *= 2) {
        Pass cur = one_pass(f, z, r, kmax, panels);
        bool ok = true;
        double fact = 1.0;
        for (int k = 0; k <= kmax; ++k) {
            if (k > 0) fact *= k;
            double floor_k = rel_tol * cur.fmax * fact / std::pow(r, k);
            double diff = std::abs(cur.d[k] - prev.d[k]);
            if (diff > rel_tol * std::abs(cur.d[k]) && diff > floor_k) ok = false;
        }
        cplx shift = shift_is_center_value ? cur.d[0] : winding_shift;
        bool resolved = false;
        int wnd = winding(cur.vals, shift, resolved);
        if (ok && resolved) {
            res.d = cur.d;
            res.winding = wnd;
            res.nodes = int(cur.vals.size());
            res.converged = true;
            return res;
        }
        prev = std::move(cur);
    }
    res.d = prev.d;
    bool resolved = false;
    res.winding = winding(prev.vals, shift_is_center_value ? prev.d[0] : winding_shift, resolved);
    res.nodes = int(prev.vals.size());
    return res;
}

cplx apply_B(const FunctionHandle& E, cplx z, double radius)
{
    CauchyResult c = cauchy_derivatives(E, z, radius, 2);
    if (c.winding != 0) throw ContractViolation("apply_B: E has zeros inside the contour disk");
    if (!c.converged) throw std::runtime_error("apply_B: Cauchy quadrature did not converge");
    cplx e = c.d[0], e1 = c.d[1], e2 = c.d[2];
    return -2.0 * e2 / e + (e1 / e) * (e1 / e) - 1.0 / (e * e);
}

cplx apply_schwarzian(const FunctionHandle& F, cplx z, double radius)
{
    // F(zeta) - F(z) winds once exactly when F is univalent on the disk.
    CauchyResult c = cauchy_derivatives(F, z, radius, 3, 1e-10, 0.0, true);
    if (c.winding != 1) throw ContractViolation("apply_schwarzian: F is not univalent on the contour disk");
    if (!c.converged) throw std::runtime_error("apply_schwarzian: Cauchy quadrature did not converge");
    cplx q2 = c.d[2] / c.d[1];
    return c.d[3] / c.d[1] - 1.5 * q2 * q2;
}

} // namespace blwork
