#include "blwork/model.hpp"

#include "mp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace blwork {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLog2 = 0.69314718055994530942;
constexpr int kSeriesTerms = 48;
constexpr double kPoleTol = 1e-13;
constexpr double kCondSwitch = 1e3;

double log_abs_q(const mpq_class& q)
{
    mp::Real r(192);
    mpfr_set_q(r.p(), q.get_mpq_t(), MPFR_RNDN);
    return mp::log_abs(r);
}

int bucket(double bits)
{
    int b = int(std::ceil(bits / 64.0)) * 64;
    return std::clamp(b, 128, 1 << 17);
}

} // namespace

double PolyLog::cond() const
{
    if (exact_zero) return std::numeric_limits<double>::infinity();
    return std::exp(log_abs_sum - log_value.real());
}

struct Model::MpCache {
    std::mutex mu;
    std::map<int, std::shared_ptr<const std::vector<mp::Real>>> A, B;

    std::shared_ptr<const std::vector<mp::Real>> get(bool numerator, int bits,
                                                      const CoefficientTable& t)
    {
        std::lock_guard<std::mutex> lock(mu);
        auto& m = numerator ? B : A;
        auto it = m.find(bits);
        if (it != m.end()) return it->second;
        auto v = std::make_shared<const std::vector<mp::Real>>(
            mp::from_rationals(numerator ? t.B : t.A, bits));
        m.emplace(bits, v);
        return v;
    }
};

Model::Model(const PairIndex& pair)
    : table_(build_coefficients(pair)), mp_(std::make_unique<MpCache>())
{
    for (const auto& a : table_.A) logA_.push_back(log_abs_q(a));
    for (const auto& b : table_.B) {
        logB_.push_back(log_abs_q(b));
        sgnB_.push_back(sgn(b) < 0 ? -1.0 : 1.0);
    }
    for (const auto& c : remainder_series(table_, kSeriesTerms)) {
        if (sgn(c) == 0) {
            log_c_.push_back(-std::numeric_limits<double>::infinity());
            sgn_c_.push_back(0.0);
        } else {
            log_c_.push_back(log_abs_q(c));
            sgn_c_.push_back(sgn(c) < 0 ? -1.0 : 1.0);
        }
    }
    log_C_ = log_abs_q(table_.leading_product());
    mpz_class bn = binomial(pair.m + pair.L(), pair.m) * factorial(pair.N());
    log_binom_Nfact_ = log_abs_q(mpq_class(bn));
}

Model::~Model() = default;

std::shared_ptr<const Model> Model::get(const PairIndex& pair)
{
    static std::mutex mu;
    static std::map<PairIndex, std::shared_ptr<const Model>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(pair);
        if (it != cache.end()) return it->second;
    }
    // Build outside the lock; a racing builder produces an identical object.
    auto m = std::make_shared<const Model>(pair);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(pair, m);
    return it->second;
}

PolyLog Model::poly_log(bool numerator, cplx z) const
{
    const auto& lc = numerator ? logB_ : logA_;
    const size_t deg = lc.size() - 1;
    if (deg == 0) return {cplx(0.0, 0.0), 0.0};
    const double x = z.real(), y = wrap_phase(z.imag());

    double M = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j <= deg; ++j) M = std::max(M, lc[j] + double(j) * x);
    cplx sum = 0.0;
    double abs_sum = 0.0;
    for (size_t j = 0; j <= deg; ++j) {
        double a = std::exp(lc[j] + double(j) * x - M);
        double s = numerator ? sgnB_[j] : 1.0;
        abs_sum += a;
        sum += s * std::polar(a, double(j) * y);
    }
    PolyLog r;
    r.log_abs_sum = M + std::log(abs_sum);
    if (sum == cplx(0.0, 0.0)) return poly_log_mp(numerator, z, 1e30);
    r.log_value = cplx(M, 0.0) + std::log(sum);
    if (r.cond() > kCondSwitch) return poly_log_mp(numerator, z, r.cond());
    return r;
}

PolyLog Model::poly_log_mp(bool numerator, cplx z, double cond_hint) const
{
    double bits = 64.0 + std::log2(std::max(cond_hint, 1.0)) + 48.0;
    const double y = wrap_phase(z.imag());
    for (int attempt = 0; attempt < 6; ++attempt) {
        int pr = bucket(bits);
        auto coef = mp_->get(numerator, pr, table_);
        mp::Complex zz(pr), w(pr), val(pr);
        mpfr_set_d(zz.re.p(), z.real(), MPFR_RNDN);
        mpfr_set_d(zz.im.p(), y, MPFR_RNDN);
        mp::exp(w, zz);
        mp::Real abs_sum(pr), av(pr);
        mp::horner(val, abs_sum, *coef, w);
        mp::abs(av, val);
        PolyLog r;
        r.log_abs_sum = mp::log_abs(abs_sum);
        if (av.zero()) {
            if (pr >= (1 << 17)) {
                r.exact_zero = true;
                r.log_value = cplx(-std::numeric_limits<double>::infinity(), 0.0);
                return r;
            }
            bits = double(pr) * 4.0;
            continue;
        }
        r.log_value = mp::log(val);
        double lost = (r.log_abs_sum - r.log_value.real()) / kLog2;
        if (lost + 56.0 <= pr) return r;
        bits = lost + 112.0;
    }
    throw std::runtime_error("polynomial evaluation: precision escalation failed");
}

PolyLog Model::log_Q(cplx z) const { return poly_log(false, z); }
PolyLog Model::log_P(cplx z) const { return poly_log(true, z); }

cplx Model::log_eval(cplx z, Variant v) const
{
    PolyLog lq = log_Q(z);
    if (lq.exact_zero || lq.cond() > 1.0 / kPoleTol)
        throw PoleError("g" + pair().str() + " has a pole at the requested point");
    PolyLog lp = log_P(z);
    cplx w = std::exp(cplx(z.real(), wrap_phase(z.imag())));
    if (lp.exact_zero) {
        if (v == Variant::plain) return cplx(-std::numeric_limits<double>::infinity(), 0.0);
        return cplx(-kLog2, 0.0);
    }
    cplx lg = w + lp.log_value - lq.log_value;
    if (v == Variant::half_shift) return log1p_exp(lg) - kLog2;
    return lg;
}

ScaledComplex Model::eval(cplx z, Variant v) const
{
    try {
        return ScaledComplex::from_log(log_eval(z, v));
    } catch (const PoleError&) {
        return ScaledComplex::pole();
    }
}

ScaledComplex Model::derivative(cplx z, Variant v) const
{
    PolyLog lq = log_Q(z);
    if (lq.exact_zero || lq.cond() > 1.0 / kPoleTol)
        throw PoleError("derivative requested at a pole of g" + pair().str());
    cplx zr(z.real(), wrap_phase(z.imag()));
    cplx w = std::exp(zr);
    cplx lg = log_C_ + double(N()) * zr + w - 2.0 * lq.log_value;
    if (v == Variant::half_shift) lg -= kLog2;
    return ScaledComplex::from_log(lg);
}

double Model::log_g_real(double x, Variant v) const
{
    double lg = std::exp(x) + log_P(x).log_value.real() - log_Q(x).log_value.real();
    // near g = 1 the direct sum cancels; log1p of the accurate v - 1 does not
    if (lg < 1.0) return std::log1p(std::exp(log_gm1_real(x, v)));
    if (v == Variant::half_shift) return lg + std::log1p(std::exp(-lg)) - kLog2;
    return lg;
}

double Model::log_dg_real(double x, Variant v) const
{
    double r = log_C_ + double(N()) * x + std::exp(x) - 2.0 * log_Q(x).log_value.real();
    return v == Variant::half_shift ? r - kLog2 : r;
}

double Model::dlog_gm1_real(double x) const
{
    const double lq = log_Q(x).log_value.real();
    const double lp = log_P(x).log_value.real();
    const double lg = std::exp(x) + lp - lq;
    if (lg < 1.0) return std::exp(log_dg_real(x) - log_gm1_real(x));
    // g'/g = C w^N / (P Q), then divide by (1 - 1/g)
    return std::exp(log_C_ + double(N()) * x - lq - lp - std::log1p(-std::exp(-lg)));
}

double Model::log_gm1_real(double x, Variant v) const
{
    const double shift = v == Variant::half_shift ? kLog2 : 0.0;
    const double lq = log_Q(x).log_value.real();
    if (x <= -kLog2) {
        // D(w) = P(w)e^w - Q(w) = sum_{k>=N} c_k w^k
        double M = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < log_c_.size(); ++k)
            M = std::max(M, log_c_[k] + double(N() + k) * x);
        double s = 0.0, a = 0.0;
        for (size_t k = 0; k < log_c_.size(); ++k) {
            double t = std::exp(log_c_[k] + double(N() + k) * x - M);
            s += sgn_c_[k] * t;
            a += t;
        }
        if (s > 0.0 && a / s < kCondSwitch) return M + std::log(s) - lq - shift;
        return log_D_real_mp(x) - lq - shift;
    }
    PolyLog lp = log_P(x);
    const double w = std::exp(x);
    const double lg = w + lp.log_value.real() - lq;
    if (lg > 40.0) return lg + std::log1p(-std::exp(-lg)) - shift;
    double cond_p = lp.cond() > kCondSwitch ? 1.0 : lp.cond();
    double err = 4.0 * kEps * (w + cond_p + 2.0 + std::abs(lg));
    double rel = err / -std::expm1(-lg);
    if (lg > 0.0 && rel < 1e-14) return std::log(std::expm1(lg)) - shift;
    return log_D_real_mp(x) - lq - shift;
}

double Model::log_D_real_mp(double x) const
{
    double bits = 160.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        int pr = bucket(bits);
        auto A = mp_->get(false, pr, table_);
        auto B = mp_->get(true, pr, table_);
        mp::Real xx(pr, x), w(pr), ew(pr), P(pr), Pa(pr), Q(pr), Qa(pr), D(pr), S(pr);
        mpfr_exp(w.p(), xx.p(), MPFR_RNDN);
        mpfr_exp(ew.p(), w.p(), MPFR_RNDN);
        mp::horner(P, Pa, *B, w);
        mp::horner(Q, Qa, *A, w);
        mpfr_mul(D.p(), P.p(), ew.p(), MPFR_RNDN);
        mpfr_sub(D.p(), D.p(), Q.p(), MPFR_RNDN);
        mpfr_mul(S.p(), Pa.p(), ew.p(), MPFR_RNDN);
        mpfr_add(S.p(), S.p(), Qa.p(), MPFR_RNDN);
        if (D.zero() || mpfr_sgn(D.p()) < 0) {
            bits = double(pr) * 2.0;
            continue;
        }
        double lost = (mp::log_abs(S) - mp::log_abs(D)) / kLog2;
        if (lost + 56.0 <= pr) return mp::log_abs(D);
        bits = lost + 112.0;
    }
    throw std::runtime_error("log(g-1): precision escalation failed for g" + pair().str() +
                             " at x=" + std::to_string(x));
}

namespace {

std::vector<cplx> roots_of(const std::vector<mpq_class>& c)
{
    const int d = int(c.size()) - 1;
    std::vector<cplx> out;
    if (d <= 0) return out;
    if (d == 1) {
        out.push_back(-mpq_class(c[0] / c[1]).get_d());
        return out;
    }
    if (d == 2) {
        mpq_class disc = c[1] * c[1] - 4 * c[2] * c[0];
        double b = c[1].get_d(), a = c[2].get_d(), cc = c[0].get_d();
        cplx sq = std::sqrt(cplx(disc.get_d(), 0.0));
        cplx q = -0.5 * (cplx(b, 0.0) + (b >= 0 ? sq : -sq));
        out.push_back(q / a);
        out.push_back(cc / q);
        return out;
    }
    // Aberth-Ehrlich iteration in long double, scaled so the roots are O(1).
    using lc = std::complex<long double>;
    std::vector<long double> a(d + 1);
    long double scale = std::pow(std::abs(c[0].get_d() / c[d].get_d()), 1.0 / d);
    {
        mp::Real s(256), t(256);
        mpfr_set_ld(s.p(), scale, MPFR_RNDN);
        for (int k = 0; k <= d; ++k) {
            mpfr_set_q(t.p(), c[k].get_mpq_t(), MPFR_RNDN);
            mp::Real pw(256);
            mpfr_pow_ui(pw.p(), s.p(), k, MPFR_RNDN);
            mpfr_mul(t.p(), t.p(), pw.p(), MPFR_RNDN);
            a[k] = mpfr_get_ld(t.p(), MPFR_RNDN);
        }
        long double top = a[d];
        for (auto& v : a) v /= top;
    }
    auto eval = [&](lc z, lc& p, lc& dp) {
        p = a[d];
        dp = 0;
        for (int k = d - 1; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + a[k];
        }
    };
    std::vector<lc> r(d);
    for (int k = 0; k < d; ++k)
        r[k] = std::polar(1.0L, (long double)(2.0 * kPi * (k + 0.25) / d));
    for (int it = 0; it < 500; ++it) {
        long double maxstep = 0;
        for (int k = 0; k < d; ++k) {
            lc p, dp;
            eval(r[k], p, dp);
            if (p == lc(0)) continue;
            lc ratio = p / dp;
            lc s = 0;
            for (int j = 0; j < d; ++j)
                if (j != k) s += 1.0L / (r[k] - r[j]);
            lc step = ratio / (1.0L - ratio * s);
            r[k] -= step;
            maxstep = std::max(maxstep, std::abs(step) / std::max(1.0L, std::abs(r[k])));
        }
        if (maxstep < 1e-17L) break;
    }
    for (auto& z : r) out.push_back(cplx(double(z.real() * scale), double(z.imag() * scale)));
    return out;
}

} // namespace

std::vector<cplx> Model::zeros_w() const { return roots_of(table_.B); }
std::vector<cplx> Model::poles_w() const { return roots_of(table_.A); }

double Model::lemma3_residual(double y) const
{
    const double ly = std::log(y);
    double lhs = log_gm1_real(ly);
    double lq = log_Q(ly).log_value.real();
    double bracket = -log_binom_Nfact_ + y + double(N()) * ly - 2.0 * lq - std::log1p(y / N());
    return lhs - bracket;
}

ScaledComplex eval_model(const PairIndex& pair, cplx z, Variant v)
{
    return Model::get(pair)->eval(z, v);
}

ScaledComplex eval_model_derivative(const PairIndex& pair, cplx z, Variant v)
{
    return Model::get(pair)->derivative(z, v);
}

double lemma3_residual(const PairIndex& pair, double y)
{
    return Model::get(pair)->lemma3_residual(y);
}

} // namespace blwork
