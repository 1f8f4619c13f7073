#pragma once

// Thin RAII layer over the MPFR C API; private to the core library.

#include <mpfr.h>
#include <gmpxx.h>

#include <complex>
#include <vector>

namespace blwork::mp {

class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(mpfr_prec_t prec, double x) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real& operator=(const Real& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr p() { return v_; }
    mpfr_srcptr p() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double d() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool zero() const { return mpfr_zero_p(v_) != 0; }

private:
    mpfr_t v_;
};

struct Complex {
    Real re, im;
    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
};

// log of a real positive (or negative) number as a double: log|x|
double log_abs(const Real& x);
// (log|z|, arg z) as doubles; z must be nonzero
std::complex<double> log(const Complex& z);

void exp(Complex& out, const Complex& z);
void mul(Complex& out, const Complex& a, const Complex& b);
void add(Complex& out, const Complex& a, const Complex& b);
void sub(Complex& out, const Complex& a, const Complex& b);
void abs(Real& out, const Complex& z);

// Exact rationals converted at the given precision.
std::vector<Real> from_rationals(const std::vector<mpq_class>& q, mpfr_prec_t prec);

// Horner evaluation of sum c_j w^j, also returning sum |c_j| |w|^j.
void horner(Complex& out, Real& abs_sum, const std::vector<Real>& c, const Complex& w);
// Real version.
void horner(Real& out, Real& abs_sum, const std::vector<Real>& c, const Real& w);

} // namespace blwork::mp
