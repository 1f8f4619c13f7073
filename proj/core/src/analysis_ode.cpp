#include "blwork/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace blwork {

OdeCoefficient OdeCoefficient::expq(int q)
{
    const double c = q * q / 16.0;
    OdeCoefficient A;
    A.name = "exp(z)-" + std::to_string(q) + "^2/16";
    A.value = [c](cplx z) { return std::exp(z) - c; };
    A.taylor = [c](cplx z0, int K, std::vector<cplx>& a) {
        a.resize(K + 1);
        cplx t = std::exp(z0);
        for (int k = 0; k <= K; ++k) {
            a[k] = t;
            t /= double(k + 1);
        }
        a[0] -= c;
    };
    return A;
}

OdeCoefficient OdeCoefficient::poly(std::vector<cplx> c)
{
    OdeCoefficient A;
    A.name = "poly(deg " + std::to_string(c.empty() ? 0 : c.size() - 1) + ")";
    A.value = [c](cplx z) {
        cplx s = 0.0;
        for (size_t k = c.size(); k-- > 0;) s = s * z + c[k];
        return s;
    };
    A.taylor = [c](cplx z0, int K, std::vector<cplx>& a) {
        // repeated synthetic division by (z - z0)
        std::vector<cplx> w = c;
        a.assign(K + 1, 0.0);
        for (int k = 0; k <= K && !w.empty(); ++k) {
            for (size_t i = w.size() - 1; i-- > 0;) w[i] += z0 * w[i + 1];
            a[k] = w[0];
            w.erase(w.begin());
        }
    };
    return A;
}

OdeCoefficient OdeCoefficient::from_handle(const FunctionHandle& h, double radius)
{
    OdeCoefficient A;
    A.name = "handle";
    A.value = [h](cplx z) { return h.value(z); };
    A.taylor = [h, radius](cplx z0, int K, std::vector<cplx>& a) {
        CauchyResult c = cauchy_derivatives(h, z0, radius, K, 1e-13);
        a.resize(K + 1);
        double fact = 1.0;
        for (int k = 0; k <= K; ++k) {
            if (k > 0) fact *= k;
            a[k] = c.d[k] / fact;
        }
    };
    return A;
}

PairState NormalizedPair::advance(const PairState& s0, cplx z0, cplx z1, long* steps) const
{
    const int K = opt_.order;
    std::vector<cplx> a, c1(K + 1), c2(K + 1);
    PairState s = s0;
    cplx z = z0;
    long n = 0;
    while (std::abs(z1 - z) > 0.0) {
        A_.taylor(z, K, a);
        c1[0] = s.f1; c1[1] = s.d1;
        c2[0] = s.f2; c2[1] = s.d2;
        for (int k = 0; k + 2 <= K; ++k) {
            cplx t1 = 0.0, t2 = 0.0;
            for (int j = 0; j <= k; ++j) {
                t1 += a[j] * c1[k - j];
                t2 += a[j] * c2[k - j];
            }
            double den = double(k + 1) * (k + 2);
            c1[k + 2] = -t1 / den;
            c2[k + 2] = -t2 / den;
        }
        // step from the tail terms so that |c_k| h^k stays below tol * |state|
        double n1 = std::abs(c1[0]) + std::abs(c1[1]), n2 = std::abs(c2[0]) + std::abs(c2[1]);
        double h = 0.5;
        for (int k : {K - 1, K}) {
            for (auto [c, nm] : {std::pair{&c1, n1}, std::pair{&c2, n2}}) {
                double ck = std::abs((*c)[k]);
                if (ck > 0.0) h = std::min(h, std::pow(opt_.tol * nm / ck, 1.0 / k));
            }
        }
        double rest = std::abs(z1 - z);
        if (h < opt_.min_step && h < rest) throw PathRefusalError("ode: step size collapsed");
        if (++n > opt_.max_steps) throw PathRefusalError("ode: step budget exhausted");
        h = std::min(h, rest);
        cplx d = (z1 - z) / rest * h;
        cplx f1 = 0.0, g1 = 0.0, f2 = 0.0, g2 = 0.0;
        for (int k = K; k >= 0; --k) {
            f1 = f1 * d + c1[k];
            f2 = f2 * d + c2[k];
            if (k >= 1) {
                g1 = g1 * d + double(k) * c1[k];
                g2 = g2 * d + double(k) * c2[k];
            }
        }
        s = {f1, g1, f2, g2};
        z = (h == rest) ? z1 : z + d;
    }
    if (steps) *steps += n;
    return s;
}

cplx NormalizedPair::node(int i, int j) const
{
    return {region_.x0 + i * opt_.lattice, region_.y0 + j * opt_.lattice};
}

void NormalizedPair::checkpoint(cplx z, const PairState& s)
{
    cplx p = s.f1 * s.d2, q = s.d1 * s.f2;
    drift_.push_back({z, std::abs(p - q - 1.0) / (1.0 + std::abs(p) + std::abs(q))});
}

NormalizedPair::NormalizedPair(OdeCoefficient A, cplx base, Rect region, OdeOptions opt)
    : A_(std::move(A)), base_(base), region_(region), opt_(opt)
{
    if (!(region.x1 > region.x0 && region.y1 > region.y0)) throw std::invalid_argument("ode: empty region");
    const double d = opt_.lattice;
    nx_ = int(std::ceil((region.x1 - region.x0) / d - 1e-9)) + 1;
    ny_ = int(std::ceil((region.y1 - region.y0) / d - 1e-9)) + 1;
    grid_.resize(size_t(nx_) * ny_);

    // corridor: base -> left column -> along the column -> along each row
    auto walk = [&](PairState s, cplx a, cplx b) {
        int segs = std::max(1, int(std::ceil(std::abs(b - a) / d)));
        for (int k = 1; k <= segs; ++k) {
            cplx z0 = a + (b - a) * (double(k - 1) / segs), z1 = a + (b - a) * (double(k) / segs);
            s = advance(s, z0, z1, &steps_);
            checkpoint(z1, s);
        }
        return s;
    };
    PairState s{1.0, 0.0, 0.0, 1.0};
    checkpoint(base, s);
    cplx P(region.x0, base.imag());
    s = walk(s, base, P);
    int jb = std::clamp(int(std::lround((base.imag() - region.y0) / d)), 0, ny_ - 1);
    s = walk(s, P, node(0, jb));
    at(0, jb) = s;
    for (int j = jb + 1; j < ny_; ++j) at(0, j) = walk(at(0, j - 1), node(0, j - 1), node(0, j));
    for (int j = jb - 1; j >= 0; --j) at(0, j) = walk(at(0, j + 1), node(0, j + 1), node(0, j));
    for (int j = 0; j < ny_; ++j)
        for (int i = 1; i < nx_; ++i) at(i, j) = walk(at(i - 1, j), node(i - 1, j), node(i, j));
}

PairState NormalizedPair::state(cplx z) const
{
    const double d = opt_.lattice;
    int i = std::clamp(int(std::lround((z.real() - region_.x0) / d)), 0, nx_ - 1);
    int j = std::clamp(int(std::lround((z.imag() - region_.y0) / d)), 0, ny_ - 1);
    return advance(grid_[size_t(j) * nx_ + i], node(i, j), z);
}

cplx NormalizedPair::E(cplx z) const
{
    PairState s = state(z);
    return s.f1 * s.f2;
}

cplx NormalizedPair::dE(cplx z) const
{
    PairState s = state(z);
    return s.d1 * s.f2 + s.f1 * s.d2;
}

cplx NormalizedPair::d2E(cplx z) const
{
    PairState s = state(z);
    return -2.0 * A_.value(z) * s.f1 * s.f2 + 2.0 * s.d1 * s.d2;
}

double NormalizedPair::max_drift() const
{
    double m = 0.0;
    for (const auto& c : drift_) m = std::max(m, c.drift);
    return m;
}

FunctionHandle NormalizedPair::E_handle() const
{
    FunctionHandle h;
    const NormalizedPair* self = this;
    h.eval = [self](cplx z) { return ScaledComplex::from_complex(self->E(z)); };
    h.derivative = [self](cplx z) { return ScaledComplex::from_complex(self->dE(z)); };
    h.rects.push_back(region_);
    return h;
}

NormalizedPair ode_normalized_pair(const OdeCoefficient& A, cplx base, const Rect& region, const OdeOptions& opt)
{
    return NormalizedPair(A, base, region, opt);
}

std::vector<BankLaineZero> banklaine_check(const NormalizedPair& pair, const Rect& region, double tol)
{
    ZeroSet zs = locate_zeros(pair.E_handle(), region, tol);
    std::vector<BankLaineZero> out;
    for (size_t i = 0; i < zs.points.size(); ++i) {
        BankLaineZero b;
        b.z = zs.points[i];
        b.dE = pair.dE(b.z);
        double up = std::abs(b.dE - 1.0), dn = std::abs(b.dE + 1.0);
        b.residual = std::min(up, dn);
        b.sign = up <= dn ? 1 : -1;
        b.d2E = pair.d2E(b.z);
        b.simple = std::abs(b.dE) > 0.5;
        b.newton_iters = zs.newton_iters[i];
        out.push_back(b);
    }
    std::sort(out.begin(), out.end(), [](const BankLaineZero& a, const BankLaineZero& b) {
        return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
    });
    return out;
}

double banklaine_identity_residual(const NormalizedPair& pair, cplx center, double radius, int samples)
{
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        cplx z = center + std::polar(radius, kTwoPi * k / samples);
        PairState s = pair.state(z);
        cplx E = s.f1 * s.f2, dE = s.d1 * s.f2 + s.f1 * s.d2;
        cplx d2E = -2.0 * pair.A(z) * E + 2.0 * s.d1 * s.d2;
        cplx t1 = 4.0 * pair.A(z) * E * E, t2 = 2.0 * d2E * E, t3 = dE * dE;
        double scale = 1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3);
        worst = std::max(worst, std::abs(t1 + t2 - t3 + 1.0) / scale);
    }
    return worst;
}

} // namespace blwork
