#include "blwork/scaled_complex.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace blwork {

double wrap_phase(double t)
{
    if (t > -kPi && t <= kPi) return t;
    double r = std::remainder(t, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

ScaledComplex ScaledComplex::from_log(cplx logw)
{
    if (std::isinf(logw.real()) && logw.real() < 0) return zero();
    if (std::isinf(logw.real()) && logw.real() > 0) return pole();
    return {logw.real(), wrap_phase(logw.imag()), Kind::finite};
}

ScaledComplex ScaledComplex::from_complex(cplx w)
{
    if (w == cplx(0.0, 0.0)) return zero();
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return pole();
    return {std::log(std::abs(w)), wrap_phase(std::arg(w)), Kind::finite};
}

cplx ScaledComplex::to_complex() const
{
    if (kind == Kind::zero) return {0.0, 0.0};
    if (kind == Kind::pole) throw std::overflow_error("ScaledComplex: pole has no complex value");
    if (std::abs(log_modulus) > 700.0)
        throw std::overflow_error("ScaledComplex: modulus outside double range");
    return std::polar(std::exp(log_modulus), phase);
}

cplx ScaledComplex::to_complex_saturated() const
{
    if (kind == Kind::zero) return {0.0, 0.0};
    double inf = std::numeric_limits<double>::infinity();
    if (kind == Kind::pole) return {inf, inf};
    double lm = std::min(log_modulus, 709.0);
    return std::polar(std::exp(lm), phase);
}

ScaledComplex ScaledComplex::conj() const
{
    if (kind != Kind::finite) return *this;
    return {log_modulus, wrap_phase(-phase), kind};
}

ScaledComplex ScaledComplex::inv() const
{
    if (kind == Kind::zero) return pole();
    if (kind == Kind::pole) return zero();
    return {-log_modulus, wrap_phase(-phase), kind};
}

ScaledComplex ScaledComplex::pow(double p) const
{
    if (kind != Kind::finite) {
        if (p == 0.0) return {0.0, 0.0, Kind::finite};
        bool swap = p < 0.0;
        return (kind == Kind::zero) != swap ? zero() : pole();
    }
    return {p * log_modulus, wrap_phase(p * phase), kind};
}

ScaledComplex ScaledComplex::pow(cplx p) const
{
    if (p.imag() == 0.0) return pow(p.real());
    if (kind != Kind::finite) throw std::domain_error("ScaledComplex: complex power of zero or pole");
    return from_log(p * log());
}

ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b)
{
    using K = ScaledComplex::Kind;
    if (a.kind == K::finite && b.kind == K::finite)
        return {a.log_modulus + b.log_modulus, wrap_phase(a.phase + b.phase), K::finite};
    if ((a.kind == K::zero && b.kind == K::pole) || (a.kind == K::pole && b.kind == K::zero))
        throw std::domain_error("ScaledComplex: zero times pole");
    return (a.kind == K::zero || b.kind == K::zero) ? ScaledComplex::zero() : ScaledComplex::pole();
}

ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b)
{
    return a * b.inv();
}

cplx log1p_c(cplx u)
{
    double a = std::abs(u);
    if (a < 1e-4) {
        // alternating series, five terms reach double precision here
        cplx s = 0.0, p = u;
        for (int k = 1; k <= 6; ++k) {
            s += (k % 2 ? 1.0 : -1.0) * p / double(k);
            p *= u;
        }
        return s;
    }
    // |1+u| via log1p on the squared modulus to keep digits near u ~ -small real
    double re = std::log1p(u.real() * (2.0 + u.real()) + u.imag() * u.imag()) * 0.5;
    double im = std::atan2(u.imag(), 1.0 + u.real());
    return {re, im};
}

cplx log1p_exp(cplx u)
{
    if (u.real() > 0.0) return u + log1p_c(std::exp(-u));
    return log1p_c(std::exp(u));
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b)
{
    using K = ScaledComplex::Kind;
    if (a.kind == K::pole || b.kind == K::pole) return ScaledComplex::pole();
    if (a.kind == K::zero) return b;
    if (b.kind == K::zero) return a;
    const ScaledComplex& big = a.log_modulus >= b.log_modulus ? a : b;
    const ScaledComplex& small = a.log_modulus >= b.log_modulus ? b : a;
    cplx d = small.log() - big.log();
    cplx u = std::exp(d);
    if (std::abs(1.0 + u) == 0.0) return ScaledComplex::zero();
    return ScaledComplex::from_log(big.log() + log1p_c(u));
}

ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b)
{
    if (b.kind != ScaledComplex::Kind::finite) return a + b;
    return a + ScaledComplex{b.log_modulus, wrap_phase(b.phase + kPi), b.kind};
}

std::string ScaledComplex::str() const
{
    if (kind == Kind::zero) return "0";
    if (kind == Kind::pole) return "pole";
    char buf[96];
    std::snprintf(buf, sizeof buf, "exp(%.17g %+.17gi)", log_modulus, phase);
    return buf;
}

ScaledComplex scaled_exp(cplx w)
{
    return ScaledComplex::from_log(w);
}

double log_gap(const ScaledComplex& a, const ScaledComplex& b)
{
    if (a.kind != b.kind) return std::numeric_limits<double>::infinity();
    if (a.kind != ScaledComplex::Kind::finite) return 0.0;
    double dr = a.log_modulus - b.log_modulus;
    double di = wrap_phase(a.phase - b.phase);
    return std::hypot(dr, di) / std::max(1.0, std::abs(a.log()));
}

} // namespace blwork
