#pragma once

#include <complex>
#include <string>

namespace blwork {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// Wrap an angle into (-pi, pi].
double wrap_phase(double t);

// Nonzero complex number kept as exp(log_modulus + i*phase), with explicit
// marks for exact zeros and poles. Nothing here materializes |w| unless asked.
struct ScaledComplex {
    enum class Kind { finite, zero, pole };

    double log_modulus = 0.0;
    double phase = 0.0;
    Kind kind = Kind::finite;

    static ScaledComplex from_log(cplx logw);
    static ScaledComplex from_complex(cplx w);
    static ScaledComplex zero() { return {0.0, 0.0, Kind::zero}; }
    static ScaledComplex pole() { return {0.0, 0.0, Kind::pole}; }

    bool is_finite() const { return kind == Kind::finite; }
    bool is_zero() const { return kind == Kind::zero; }
    bool is_pole() const { return kind == Kind::pole; }

    // log w on the principal branch; only valid for finite values.
    cplx log() const { return {log_modulus, phase}; }
    // Throws std::overflow_error when |log_modulus| > 700.
    cplx to_complex() const;
    // Saturating conversion for plotting and diagnostics.
    cplx to_complex_saturated() const;

    ScaledComplex conj() const;
    ScaledComplex inv() const;
    ScaledComplex pow(double p) const;
    ScaledComplex pow(cplx p) const;

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b);
    friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b);

    // Sum computed in log space; cancellation is resolved in double precision.
    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b);

    std::string str() const;
};

// exp(w) for complex w, kept in log space (phase wrapped).
ScaledComplex scaled_exp(cplx w);

// log(1 + e^u) for complex u, without overflow.
cplx log1p_exp(cplx u);
// log(1 + u) for complex u, accurate for small |u|.
cplx log1p_c(cplx u);

// Gap between two values in log space: |log a - log b| with the phase
// difference wrapped, relative to max(1, |log a|).
double log_gap(const ScaledComplex& a, const ScaledComplex& b);

} // namespace blwork
