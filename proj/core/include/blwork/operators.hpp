#pragma once

#include "blwork/scaled_complex.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace blwork {

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
    bool contains_disk(cplx c, double r) const;
};

struct Annulus {
    cplx center = 0.0;
    double r0 = 0, r1 = 0;
    bool contains_disk(cplx c, double r) const;
};

// An evaluator z -> ScaledComplex plus the region where it is analytic.
struct FunctionHandle {
    std::function<ScaledComplex(cplx)> eval;
    bool entire = false;
    std::vector<Rect> rects;
    std::vector<Annulus> annuli;
    // Optional exact derivative, used by counting routines when present.
    std::function<ScaledComplex(cplx)> derivative;
    // Optional entire function whose zeros are exactly the poles of eval.
    std::function<ScaledComplex(cplx)> pole_carrier;

    bool disk_allowed(cplx z, double r) const;
    cplx value(cplx z) const { return eval(z).to_complex(); }

    static FunctionHandle entire_function(std::function<cplx(cplx)> f);
    static FunctionHandle on_rect(std::function<cplx(cplx)> f, Rect r);
};

struct CauchyResult {
    std::vector<cplx> d;     // d[k] = f^{(k)}(z)
    int winding = 0;         // winding number of f(zeta) - shift around 0 on the circle
    int nodes = 0;
    bool converged = false;
};

// Derivatives f^{(k)}(z), k <= kmax, from f on |zeta - z| = r by composite
// Gauss-Legendre (64 nodes, doubling until successive estimates agree to rel_tol).
// The winding number is taken for f(zeta) - winding_shift.
CauchyResult cauchy_derivatives(const FunctionHandle& f, cplx z, double r, int kmax,
                                double rel_tol = 1e-10, cplx winding_shift = 0.0,
                                bool shift_is_center_value = false);

// B(E) = -2E''/E + (E'/E)^2 - 1/E^2
cplx apply_B(const FunctionHandle& E, cplx z, double radius);
// S(F) = F'''/F' - 1.5 (F''/F')^2
cplx apply_schwarzian(const FunctionHandle& F, cplx z, double radius);

} // namespace blwork
