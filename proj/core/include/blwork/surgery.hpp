#pragma once

#include "blwork/diffeo.hpp"
#include "blwork/sequences.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace blwork {

// Spiral charts p(w) = w^mu on C \ (-inf, 0] and the inverse h.
struct SpiralCharts {
    double kappa = 1.0;
    cplx mu = 1.0;
    double a = 0.0;   // log(kappa) / (2 pi), so that 1/mu = 1 + i a

    cplx p(cplx w) const;
    // inverse onto the slit plane, arg h(z) in (-pi, pi]
    cplx h(cplx z) const;
    // exp((Log z + 2 pi i j)/mu)
    cplx h_branch(cplx z, int j) const;
    double order() const { return 1.0 / mu.real(); }
};

SpiralCharts spiral_charts(double kappa);

// psi on the strip |Im w| < 1 interpolating between phi on the lower edge of
// the positive axis (phi(x/kappa) on the negative axis) and the identity at
// Im w = -1; identity elsewhere. Only the lower half of the strip is used.
class StripHomeo {
public:
    explicit StripHomeo(DiffeoSpec spec);

    cplx operator()(cplx w) const;
    // {X_x, X_y, Y_x, Y_y}
    std::array<double, 4> jacobian(cplx w) const;
    std::array<double, 4> jacobian_fd(cplx w, double h = 1e-6) const;
    cplx beltrami(cplx w) const;
    const DiffeoSpec& spec() const { return spec_; }
    bool in_band(cplx w) const { return w.imag() <= 0.0 && w.imag() > -1.0; }

private:
    DiffeoSpec spec_;
};

StripHomeo build_strip_homeo(const DiffeoSpec& spec);

struct EvalResult {
    ScaledComplex value;
    int piece = 0;            // flavor-specific region tag
    int strip = 0;            // gluing strip index (0 when not strip based)
    bool band = false;        // inside an interpolation band
    bool uninterpolated = false;
};

struct Beltrami {
    cplx mu = 0.0;       // Beltrami coefficient of G
    double K = 1.0;
    cplx mu_q = 0.0;     // after composing out the declared affine pre-map
    double K_q = 1.0;
    bool band = false;
    bool indeterminate = false;
    int strip = 0;
};

double dilatation_of(cplx mu);

// Beltrami coefficient of a map with Jacobian entries {X_x, X_y, Y_x, Y_y}.
cplx beltrami_from_jacobian(const std::array<double, 4>& J);

// Two one-sided evaluations of a seam at parameter u.
struct Seam {
    std::string name;
    double u0 = 0.0, u1 = 1.0;
    std::function<std::pair<ScaledComplex, ScaledComplex>(double)> sides;
};

struct SeamReport {
    std::string name;
    double max_gap = 0.0;
    double worst_u = 0.0;
    int samples = 0;
};

// theta-interval on |z| = r where the dilatation may be nonzero
struct ThetaWindow {
    double t0 = 0.0, t1 = 0.0;
    int strip = 0;
};

class GluedMap {
public:
    virtual ~GluedMap() = default;
    virtual std::string flavor() const = 0;
    virtual EvalResult evaluate(cplx z) const = 0;
    ScaledComplex eval(cplx z) const { return evaluate(z).value; }
    virtual Beltrami beltrami_at(cplx z) const = 0;
    virtual std::vector<Seam> seams(double max_calN) const = 0;
    virtual std::vector<ThetaWindow> windows(double r) const = 0;
    // smallest geometric feature (strip height, band width) used for cell sizing
    virtual double feature_size(double r) const = 0;
    virtual std::string describe() const = 0;
    // zeros and poles with |z| <= r; flavors without closed-form counts throw
    virtual std::vector<cplx> zeros_within(double r) const;
    virtual std::vector<cplx> poles_within(double r) const;
};

std::vector<SeamReport> check_seams(const GluedMap& map, int samples = 64, double max_calN = 500.0);

// ---- spiral gluing (flavor thm3) of g_{m1,n1} and g_{m2,n2} ----

class SpiralMap : public GluedMap {
public:
    SpiralMap(PairIndex src, PairIndex dst);

    std::string flavor() const override { return "thm3-spiral"; }
    EvalResult evaluate(cplx z) const override;
    Beltrami beltrami_at(cplx z) const override;
    std::vector<Seam> seams(double max_calN) const override;
    std::vector<ThetaWindow> windows(double r) const override;
    double feature_size(double r) const override;
    std::string describe() const override;
    std::vector<cplx> zeros_within(double r) const override;
    std::vector<cplx> poles_within(double r) const override;

    const SpiralCharts& charts() const { return charts_; }
    const StripHomeo& psi() const { return psi_; }
    // value from the chart coordinate w = h(z) on either side of the slit
    ScaledComplex from_chart(cplx w, bool lower) const;

private:
    std::vector<cplx> preimages(const std::vector<cplx>& wroots, bool lower_model, double r) const;

    PairIndex src_, dst_;
    std::shared_ptr<const Model> g1_, g2_;
    SpiralCharts charts_;
    StripHomeo psi_;
};

// ---- strip gluing with affine pre-maps (flavors thm4, thm6) ----

class StripMap : public GluedMap {
public:
    // mixed = true gives the thm6 assembly (half-shift pieces where n_k = 1
    // in the upper half-plane, plain pieces below).
    StripMap(double lambda1, double lambda2, bool mixed, int kcap = 20000);

    std::string flavor() const override { return mixed_ ? "thm6-mixed" : "thm4-strip"; }
    EvalResult evaluate(cplx z) const override;
    Beltrami beltrami_at(cplx z) const override;
    std::vector<Seam> seams(double max_calN) const override;
    std::vector<ThetaWindow> windows(double r) const override;
    double feature_size(double r) const override;
    std::string describe() const override;
    std::vector<cplx> zeros_within(double r) const override;
    std::vector<cplx> poles_within(double r) const override;

    const CaseSelection& selection() const { return sel_; }
    const ProfileBundle& profiles() const { return prof_; }
    int l() const { return sel_.l; }
    ModelRef ref(int k, bool upper) const;
    // piece formula of strip k at (x, t); lower pieces are returned unconjugated
    ScaledComplex piece(int k, double x, double t, bool upper, Side side) const;
    bool active(int k, Side side, bool upper) const;
    int strip_cap() const { return kcap_; }

private:
    struct Half {
        std::vector<ModelRef> refs;              // index k-1
        std::vector<std::shared_ptr<const Psi>> right, left;
        std::vector<double> shift;
        std::vector<std::shared_ptr<const Model>> models;
        std::vector<int> active_strips;          // k with nonzero dilatation somewhere
    };
    void build_half(Half& h, bool upper);
    const Half& half(bool upper) const { return upper || !mixed_ ? up_ : low_; }
    std::vector<cplx> points_of(bool zeros, double r) const;

    double lambda1_, lambda2_;
    bool mixed_;
    int kcap_;
    CaseSelection sel_;
    ProfileBundle prof_;
    Half up_, low_;
};

// ---- power-map gluing (flavor thm5) ----

class PowerMap : public GluedMap {
public:
    PowerMap(double rho, double delta, int kcap = 4000);

    std::string flavor() const override { return "thm5-power"; }
    EvalResult evaluate(cplx z) const override;
    Beltrami beltrami_at(cplx z) const override;
    std::vector<Seam> seams(double max_calN) const override;
    std::vector<ThetaWindow> windows(double r) const override;
    double feature_size(double r) const override;
    std::string describe() const override;

    double rho() const { return rho_; }
    double gamma() const { return gamma_; }
    double sigma() const { return sigma_; }
    const ProfileBundle& profiles() const { return prof_; }
    const SlopeSequence& m_sequence() const { return m_seq_; }

    ScaledComplex U(cplx z) const;
    ScaledComplex V(cplx z) const;
    cplx Q(cplx z) const;
    ScaledComplex W(cplx z) const { return U(Q(z)); }
    // piece formulas used by seam checks
    ScaledComplex U_piece(int k, double x, double t, bool upper) const;
    ScaledComplex V_piece(int k, double x, double t, bool upper) const;

private:
    struct Half {
        std::vector<ModelRef> refs;
        std::vector<std::shared_ptr<const Psi>> right, left;   // built on first use
    };
    void build_half(Half& h, bool upper);
    std::shared_ptr<const Psi> psi_for(bool upper, int k, Side side) const;
    ScaledComplex U_half(cplx z, bool upper) const;
    ScaledComplex V_half(cplx z, bool upper) const;
    std::array<double, 4> Q_jacobian(cplx z) const;

    double rho_, delta_, gamma_, sigma_;
    SlopeSequence m_seq_, n_seq_;
    ProfileBundle prof_;
    mutable Half up_, low_;
    mutable std::mutex lazy_;
};

// ---- n >= 2 sector extension of a thm4 assembly ----

class SectorMap : public GluedMap {
public:
    // Lambda_i in [0, n]; the base strip map uses lambda_i = Lambda_i / n.
    SectorMap(int n, double Lambda1, double Lambda2, int kcap = 20000);

    std::string flavor() const override { return "sector"; }
    EvalResult evaluate(cplx z) const override;
    Beltrami beltrami_at(cplx z) const override;
    std::vector<Seam> seams(double max_calN) const override;
    std::vector<ThetaWindow> windows(double r) const override;
    double feature_size(double r) const override;
    std::string describe() const override;

    const StripMap& base() const { return base_; }
    int n() const { return n_; }

private:
    int n_;
    StripMap base_;
};

enum class Flavor { thm3, thm4, thm5, thm6, sector };
Flavor parse_flavor(const std::string& s);

struct AssembleParams {
    PairIndex src{0, 0}, dst{1, 1};
    double lambda1 = 0.0, lambda2 = 0.5;
    double rho = 0.75, delta = 1.0;
    int n = 2;
    int kcap = 20000;
};

std::shared_ptr<const GluedMap> assemble(Flavor flavor, const AssembleParams& params);

Beltrami beltrami_at(const GluedMap& map, cplx z);

// ---- Dilatation accounting ----

struct DilatationCell {
    cplx z;
    double abs_mu = 0.0;
    double K_minus_1 = 0.0;
};

struct DilatationReport {
    double r_min = 0, r_max = 0;
    double total = 0.0;
    std::vector<std::pair<double, double>> cumulative;   // (r, integral over [r_min, r])
    std::map<int, double> strip_sums;                     // per gluing strip
    std::vector<DilatationCell> cells;                    // retained when requested
    double max_abs_mu = 0.0;
    long cell_count = 0;
    long straddling = 0;
    std::vector<double> increments;                       // over unit radial steps
};

struct DilatationResolution {
    double dr = 0.25;           // radial ring width upper bound
    int cells_per_feature = 8;  // angular cells per feature size
    int min_cells_per_window = 16;
    bool keep_cells = false;
};

DilatationReport dilatation_integral(const GluedMap& map, double r_min, double r_max,
                                     const DilatationResolution& res = {});

} // namespace blwork
