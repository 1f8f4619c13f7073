#pragma once

#include "blwork/model.hpp"
#include "blwork/operators.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blwork {

// g_{m,n} (or the half-shift variant) with exact derivative and Q(e^z) as pole carrier.
FunctionHandle model_handle(const PairIndex& pair, Variant v = Variant::plain);

// ---- Argument principle ----

class BoundaryProximityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CountOptions {
    double tol = 1e-6;        // integer defect accepted
    int max_retries = 3;      // boundary nudges
    bool allow_nudge = true;
    int max_panels = 2048;    // per edge
    bool check_region = true;
};

struct CountResult {
    int Z = 0, P = 0;
    double value = 0.0;       // (1/2 pi i) contour integral of f'/f, i.e. Z - P
    double defect = 0.0;
    int retries = 0;
    Rect used;                // rectangle after nudging
    long nodes = 0;
};

CountResult count_zeros_poles(const FunctionHandle& f, const Rect& rect, const CountOptions& opt = {});

// Winding number of eval around the rectangle by adaptive phase tracking; used
// for evaluators without a derivative (pole carriers, glued maps).
double winding_by_phase(const std::function<ScaledComplex(cplx)>& eval, const Rect& rect, long* nodes = nullptr);

// ---- Zero localization ----

struct ZeroSet {
    enum class Kind { zero, pole } kind = Kind::zero;
    std::vector<cplx> points;
    std::vector<double> residual;       // |f| / local scale at the point
    std::vector<int> newton_iters;
};

struct LocateOptions {
    double cell_diameter = 0.02;   // subdivision floor
    int max_depth = 40;
    int max_newton = 60;
};

ZeroSet locate_zeros(const FunctionHandle& f, const Rect& region, double tol = 1e-10,
                     const LocateOptions& opt = {});
// Poles as zeros of the pole carrier; residual is 1/|f| relative to the carrier scale.
ZeroSet locate_poles(const FunctionHandle& f, const Rect& region, double tol = 1e-10,
                     const LocateOptions& opt = {});

// ---- Complex ODE f'' + A f = 0 ----

// Entire coefficient A with Taylor data at arbitrary centers.
struct OdeCoefficient {
    std::string name;
    std::function<cplx(cplx)> value;
    // a[k] = A^{(k)}(z0)/k!, k = 0..K
    std::function<void(cplx z0, int K, std::vector<cplx>& a)> taylor;

    static OdeCoefficient expq(int q);                 // e^z - q^2/16
    static OdeCoefficient poly(std::vector<cplx> c);   // sum c_k z^k
    // Taylor data from Cauchy integrals of an entire handle
    static OdeCoefficient from_handle(const FunctionHandle& A, double radius = 0.5);
};

class PathRefusalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OdeOptions {
    double lattice = 0.25;     // checkpoint spacing along paths
    int order = 32;            // Taylor order
    double tol = 1e-17;        // relative truncation target per step
    double min_step = 1e-6;
    long max_steps = 20000000;
};

struct PairState {
    cplx f1, d1, f2, d2;
};

struct WronskianCheckpoint {
    cplx z;
    double drift = 0.0;   // |W - 1| / (1 + |f1 f2'| + |f1' f2|)
};

class NormalizedPair {
public:
    NormalizedPair(OdeCoefficient A, cplx base, Rect region, OdeOptions opt = {});

    PairState state(cplx z) const;
    cplx A(cplx z) const { return A_.value(z); }
    cplx E(cplx z) const;
    cplx dE(cplx z) const;
    cplx d2E(cplx z) const;
    // E with exact derivative on the lattice region; valid while this pair lives
    FunctionHandle E_handle() const;

    cplx base() const { return base_; }
    const Rect& region() const { return region_; }
    const std::vector<WronskianCheckpoint>& drift_log() const { return drift_; }
    double max_drift() const;
    // Taylor steps taken while building the lattice
    long steps() const { return steps_; }

    // Integrate the state from z0 to z1 along a straight segment.
    PairState advance(const PairState& s, cplx z0, cplx z1, long* steps = nullptr) const;

private:
    cplx node(int i, int j) const;
    PairState& at(int i, int j) { return grid_[size_t(j) * nx_ + i]; }
    void checkpoint(cplx z, const PairState& s);

    OdeCoefficient A_;
    cplx base_;
    Rect region_;
    OdeOptions opt_;
    int nx_ = 0, ny_ = 0;
    std::vector<PairState> grid_;
    std::vector<WronskianCheckpoint> drift_;
    long steps_ = 0;
};

NormalizedPair ode_normalized_pair(const OdeCoefficient& A, cplx base, const Rect& region,
                                   const OdeOptions& opt = {});

struct BankLaineZero {
    cplx z;
    cplx dE;
    double residual = 0.0;   // min(|E'-1|, |E'+1|)
    int sign = 0;            // +1 or -1
    cplx d2E;
    bool simple = true;
    int newton_iters = 0;
};

std::vector<BankLaineZero> banklaine_check(const NormalizedPair& pair, const Rect& region,
                                           double tol = 1e-12);

// 4 A E^2 + 2 E'' E - E'^2 + 1 scaled by 1 + |4AE^2| + |2E''E| + |E'^2|, max over a circle
double banklaine_identity_residual(const NormalizedPair& pair, cplx center, double radius, int samples = 64);

// ---- Nevanlinna functionals ----

struct NevanlinnaSample {
    double r = 0.0;
    double m = 0.0;          // proximity function
    double N_count = 0.0;    // integrated counting function
    double T = 0.0;          // m + N_count
};

// Closed-form models: "exp_exp" for exp(e^z), "const:<c>" for a constant.
NevanlinnaSample nevanlinna_model(const std::string& tag, double r);

// m(r, f) by adaptive quadrature of log+|f| in log space; N from the counting
// function n(t) sampled at 64 log-spaced t (n(0) = n0 handled exactly).
NevanlinnaSample nevanlinna(const FunctionHandle& f, double r, const std::function<double(double)>& n,
                            double n0 = 0.0, int samples = 64);

double proximity(const std::function<ScaledComplex(cplx)>& f, double r, double tol = 1e-10);
// int_0^r (n(t) - n0)/t dt + n0 log r with trapezoid on log-spaced samples
double counting_integral(const std::function<double(double)>& n, double r, double n0 = 0.0, int samples = 64);
// exact N(r) = sum log(r/|a|) over points 0 < |a| <= r
double counting_integral_exact(const std::vector<double>& moduli, double r);

struct ExponentFit {
    double lambda = 0.0;         // slope of log n on log r
    double band_lo = 0.0, band_hi = 0.0;   // min and max of n / r^lambda
    double rms = 0.0;
    double loglog_beta = 0.0;    // slope of log n on log log r
    double loglog_rms = 0.0;
    double loglog_band_lo = 0.0, loglog_band_hi = 0.0;   // n / (log r)^beta
    bool prefer_loglog = false;
    int points = 0;
};

ExponentFit exponent_of_convergence(const std::vector<std::pair<double, double>>& counts);

} // namespace blwork
