#pragma once

#include "blwork/coefficients.hpp"
#include "blwork/scaled_complex.hpp"

#include <memory>
#include <vector>

namespace blwork {

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Result of a polynomial evaluation at w = e^z in log space.
struct PolyLog {
    cplx log_value;       // log of the polynomial value
    double log_abs_sum;   // log of sum |c_j| |w|^j
    bool exact_zero = false;
    double cond() const;  // sum |c_j||w|^j / |value|
};

// The model function g_{m,n} and its variants, evaluated without leaving log
// space. Instances are immutable and shared through Model::get.
class Model {
public:
    explicit Model(const PairIndex& pair);
    ~Model();
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;

    // Memoized, thread-safe.
    static std::shared_ptr<const Model> get(const PairIndex& pair);

    const PairIndex& pair() const { return table_.pair; }
    const CoefficientTable& table() const { return table_; }
    int N() const { return table_.pair.N(); }
    // log C with C = A_m B_{2n} = m!(2n)!/((m+2n)!)^2
    double log_C() const { return log_C_; }

    PolyLog log_Q(cplx z) const;
    PolyLog log_P(cplx z) const;

    // g(z) or (g(z)+1)/2; pole tag where |Q(e^z)| < 1e-13 * sum |A_i||e^z|^i.
    ScaledComplex eval(cplx z, Variant v = Variant::plain) const;
    // g'(z) = C e^{Nz} exp(e^z) / Q(e^z)^2 (halved for the half-shift variant).
    ScaledComplex derivative(cplx z, Variant v = Variant::plain) const;
    // log g(z) on the branch continuous from the real axis; pole -> PoleError.
    cplx log_eval(cplx z, Variant v = Variant::plain) const;

    // Real-axis helpers. The variant value v(x) > 1 is increasing.
    double log_g_real(double x, Variant v = Variant::plain) const;
    // log(v(x) - 1), accurate for x -> -inf and for large x.
    double log_gm1_real(double x, Variant v = Variant::plain) const;
    // log v'(x)
    double log_dg_real(double x, Variant v = Variant::plain) const;
    // d/dx log(v(x) - 1) = g'/(g - 1), free of the e^x cancellation
    double dlog_gm1_real(double x) const;

    // Roots in the w = e^z plane of P (zeros of g) and Q (poles of g).
    std::vector<cplx> zeros_w() const;
    std::vector<cplx> poles_w() const;

    // R(y,N) = log(h(y)-1) - [-log(binom(m+2n,m) N!) + y + N log y - 2 log Q(y) - log(1+y/N)]
    double lemma3_residual(double y) const;

private:
    double log_D_real_mp(double x) const;
    PolyLog poly_log(bool numerator, cplx z) const;
    PolyLog poly_log_mp(bool numerator, cplx z, double cond_hint) const;

    CoefficientTable table_;
    std::vector<double> logA_, logB_, sgnB_;
    std::vector<double> log_c_, sgn_c_;   // remainder series from k = N
    double log_C_ = 0.0;
    double log_binom_Nfact_ = 0.0;
    struct MpCache;
    std::unique_ptr<MpCache> mp_;
};

// Convenience wrappers matching the public operation names.
ScaledComplex eval_model(const PairIndex& pair, cplx z, Variant v = Variant::plain);
ScaledComplex eval_model_derivative(const PairIndex& pair, cplx z, Variant v = Variant::plain);
double lemma3_residual(const PairIndex& pair, double y);

} // namespace blwork
