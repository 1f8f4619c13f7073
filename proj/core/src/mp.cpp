#include "mp.hpp"

namespace blwork::mp {

double log_abs(const Real& x)
{
    Real t(x.prec());
    mpfr_abs(t.p(), x.p(), MPFR_RNDN);
    mpfr_log(t.p(), t.p(), MPFR_RNDN);
    return t.d();
}

std::complex<double> log(const Complex& z)
{
    mpfr_prec_t pr = z.re.prec();
    Real r(pr), a(pr);
    mpfr_hypot(r.p(), z.re.p(), z.im.p(), MPFR_RNDN);
    mpfr_log(r.p(), r.p(), MPFR_RNDN);
    mpfr_atan2(a.p(), z.im.p(), z.re.p(), MPFR_RNDN);
    return {r.d(), a.d()};
}

void exp(Complex& out, const Complex& z)
{
    mpfr_prec_t pr = out.re.prec();
    Real m(pr), s(pr), c(pr);
    mpfr_exp(m.p(), z.re.p(), MPFR_RNDN);
    mpfr_sin_cos(s.p(), c.p(), z.im.p(), MPFR_RNDN);
    mpfr_mul(out.re.p(), m.p(), c.p(), MPFR_RNDN);
    mpfr_mul(out.im.p(), m.p(), s.p(), MPFR_RNDN);
}

void mul(Complex& out, const Complex& a, const Complex& b)
{
    mpfr_prec_t pr = out.re.prec();
    Real t1(pr), t2(pr), re(pr);
    mpfr_mul(t1.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_mul(t2.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    mpfr_sub(re.p(), t1.p(), t2.p(), MPFR_RNDN);
    mpfr_mul(t1.p(), a.re.p(), b.im.p(), MPFR_RNDN);
    mpfr_mul(t2.p(), a.im.p(), b.re.p(), MPFR_RNDN);
    mpfr_add(out.im.p(), t1.p(), t2.p(), MPFR_RNDN);
    mpfr_set(out.re.p(), re.p(), MPFR_RNDN);
}

void add(Complex& out, const Complex& a, const Complex& b)
{
    mpfr_add(out.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_add(out.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
}

void sub(Complex& out, const Complex& a, const Complex& b)
{
    mpfr_sub(out.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_sub(out.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
}

void abs(Real& out, const Complex& z)
{
    mpfr_hypot(out.p(), z.re.p(), z.im.p(), MPFR_RNDN);
}

std::vector<Real> from_rationals(const std::vector<mpq_class>& q, mpfr_prec_t prec)
{
    std::vector<Real> out;
    out.reserve(q.size());
    for (const auto& x : q) {
        out.emplace_back(prec);
        mpfr_set_q(out.back().p(), x.get_mpq_t(), MPFR_RNDN);
    }
    return out;
}

void horner(Complex& out, Real& abs_sum, const std::vector<Real>& c, const Complex& w)
{
    mpfr_prec_t pr = out.re.prec();
    Real aw(pr), ac(pr);
    abs(aw, w);
    mpfr_set_zero(out.re.p(), 1);
    mpfr_set_zero(out.im.p(), 1);
    mpfr_set_zero(abs_sum.p(), 1);
    for (size_t k = c.size(); k-- > 0;) {
        mul(out, out, w);
        mpfr_add(out.re.p(), out.re.p(), c[k].p(), MPFR_RNDN);
        mpfr_mul(abs_sum.p(), abs_sum.p(), aw.p(), MPFR_RNDN);
        mpfr_abs(ac.p(), c[k].p(), MPFR_RNDN);
        mpfr_add(abs_sum.p(), abs_sum.p(), ac.p(), MPFR_RNDN);
    }
}

void horner(Real& out, Real& abs_sum, const std::vector<Real>& c, const Real& w)
{
    mpfr_prec_t pr = out.prec();
    Real aw(pr), ac(pr);
    mpfr_abs(aw.p(), w.p(), MPFR_RNDN);
    mpfr_set_zero(out.p(), 1);
    mpfr_set_zero(abs_sum.p(), 1);
    for (size_t k = c.size(); k-- > 0;) {
        mpfr_mul(out.p(), out.p(), w.p(), MPFR_RNDN);
        mpfr_add(out.p(), out.p(), c[k].p(), MPFR_RNDN);
        mpfr_mul(abs_sum.p(), abs_sum.p(), aw.p(), MPFR_RNDN);
        mpfr_abs(ac.p(), c[k].p(), MPFR_RNDN);
        mpfr_add(abs_sum.p(), abs_sum.p(), ac.p(), MPFR_RNDN);
    }
}

} // namespace blwork::mp
