#pragma once

#include "blwork/model.hpp"

#include <memory>
#include <string>
#include <vector>

namespace blwork {

struct ModelRef {
    PairIndex pair;
    Variant variant = Variant::plain;
    friend bool operator==(const ModelRef&, const ModelRef&) = default;
    std::string str() const;
};

// log(v(x) - 1) for the model v = g or (g+1)/2, and its log-derivative.
double model_F(const ModelRef& r, double x);

struct ShiftConstant {
    PairIndex pair;
    Variant variant = Variant::plain;
    double value = 0.0;
    double residual = 0.0;   // |log(v(s) - 1)| i.e. distance of v(s) from 2 in log space
};

// s with v(s) = 2; memoized.
ShiftConstant solve_shift(const PairIndex& pair, Variant variant);
inline double shift_of(const ModelRef& r) { return solve_shift(r.pair, r.variant).value; }

// r0 solving e^r + r + 1 = 0
double lemma3_trans_r0();

// Conjugating homeomorphism phi of the real line with dst = src o phi.
class DiffeoSpec {
public:
    DiffeoSpec(ModelRef src, ModelRef dst);

    const ModelRef& src() const { return src_; }
    const ModelRef& dst() const { return dst_; }
    double kappa() const { return kappa_; }
    double c() const { return c_; }
    double delta() const { return delta_; }
    bool identity() const { return src_ == dst_; }

    double phi(double x) const;
    // phi'(x) = F_dst'(x) / F_src'(phi(x)) with F = log(v - 1)
    double phi_prime(double x) const;
    double phi_prime_fd(double x, double h = 1e-6) const;
    // |F_dst(x) - F_src(phi)| / max(1, |F_dst(x)|) with F = log(v - 1)
    double residual(double x, double phi_x) const;

    std::string str() const;

private:
    ModelRef src_, dst_;
    std::shared_ptr<const Model> ms_, md_;
    double kappa_ = 1.0, c_ = 0.0, delta_ = 0.5;
    double src_offset_ = 0.0;  // log(binom N!) (+ log 2) of src
};

double solve_phi(const DiffeoSpec& spec, double x);

struct AsymptoticReport {
    bool exact = false;          // identity spec
    double decay_slope = 0.0;    // slope of log|phi(x)-x| on [5, X]
    double decay_intercept = 0.0;
    int decay_points = 0;
    double kappa_hat = 0.0, c_hat = 0.0;
    double dphi_plus = 0.0, dphi_minus = 0.0;   // central differences at +X, -X
    double max_residual = 0.0;   // conjugacy residual over the grid
    std::string str() const;
};

AsymptoticReport asymptotic_report(const DiffeoSpec& spec, double X = 40.0, double step = 0.25);

enum class Side { right, left };

// psi(x) = a*phi(x/b + s_{k+1}) - a*s_k; right half-plane a = b = l,
// left half-plane a = N_k, b = N_{k+1}.
class Psi {
public:
    Psi(ModelRef k, ModelRef k1, Side side, int l = 1);

    double operator()(double x) const;
    double derivative(double x) const;
    bool identity() const { return ident_; }
    const DiffeoSpec& spec() const { return spec_; }
    double outer() const { return a_; }
    double inner() const { return b_; }

private:
    DiffeoSpec spec_;
    double a_ = 1, b_ = 1, s0_ = 0, s1_ = 0;
    bool ident_ = false;
};

Psi build_psi(const std::vector<ModelRef>& chain, Side side, int l = 1);

struct FixedPointReport {
    bool identity = false;
    std::vector<double> points;
    std::vector<double> residuals;
    double logN = 0.0;
};

FixedPointReport find_fixed_points(const DiffeoSpec& spec, double a, double b, double step = 1e-3);

} // namespace blwork
