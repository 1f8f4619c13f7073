#include "blwork/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blwork {

namespace {

cplx compose_mu(cplx mu_inner, cplx inner_z, cplx mu_outer)
{
    if (inner_z == cplx(0.0)) return mu_inner;
    const cplx th = std::conj(inner_z) / inner_z;
    return (mu_inner + mu_outer * th) / (1.0 + std::conj(mu_inner) * mu_outer * th);
}

cplx fz_of(const std::array<double, 4>& J)
{
    return {0.5 * (J[0] + J[3]), 0.5 * (J[2] - J[1])};
}

} // namespace

PowerMap::PowerMap(double rho, double delta, int kcap) : rho_(rho), delta_(delta)
{
    if (!(rho > 0.5 && rho < 1.0)) throw std::invalid_argument("thm5: rho must lie in (1/2, 1)");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("thm5: delta must lie in [0, 1]");
    if (kcap < 8) throw std::invalid_argument("thm5: kcap too small");
    gamma_ = 1.0 / (2.0 * rho - 1.0);
    sigma_ = rho / (2.0 * rho - 1.0);
    m_seq_ = build_lemma_1(gamma_, delta_, kcap);
    n_seq_ = build_lemma_2(gamma_, m_seq_);
    prof_ = build_profiles(m_seq_, n_seq_, gamma_);
    build_half(up_, true);
    build_half(low_, false);
}

void PowerMap::build_half(Half& h, bool upper)
{
    const int K = m_seq_.size();
    h.refs.resize(K);
    for (int k = 1; k <= K; ++k) {
        const PairIndex pr{m_seq_.at(k), n_seq_.at(k)};
        h.refs[k - 1] = ModelRef{pr, (upper && k >= 3) ? Variant::half_shift : Variant::plain};
    }
    h.right.resize(K - 1);
    h.left.resize(K - 1);
}

std::shared_ptr<const Psi> PowerMap::psi_for(bool upper, int k, Side side) const
{
    Half& h = upper ? up_ : low_;
    if (k < 1 || k >= int(h.refs.size())) throw std::out_of_range("thm5: strip index beyond cap");
    std::lock_guard<std::mutex> lk(lazy_);
    auto& slot = (side == Side::right ? h.right : h.left)[k - 1];
    if (!slot) slot = std::make_shared<const Psi>(h.refs[k - 1], h.refs[k], side, 1);
    return slot;
}

ScaledComplex PowerMap::U_piece(int k, double x, double t, bool upper) const
{
    const auto psi = psi_for(upper, k, Side::right);
    const ModelRef& ref = (upper ? up_ : low_).refs[k - 1];
    const double X = psi->identity() ? x : x + t * ((*psi)(x) - x);
    return Model::get(ref.pair)->eval(cplx(X + shift_of(ref), kTwoPi * t), ref.variant);
}

ScaledComplex PowerMap::V_piece(int k, double x, double t, bool upper) const
{
    const auto psi = psi_for(upper, k, Side::left);
    const ModelRef& ref = (upper ? up_ : low_).refs[k - 1];
    const double X = psi->identity() ? x : x + t * ((*psi)(x) - x);
    const double N = double(prof_.Nk(k));
    return Model::get(ref.pair)->eval(cplx(X / N + shift_of(ref), kTwoPi * t), ref.variant);
}

ScaledComplex PowerMap::U_half(cplx z, bool upper) const
{
    const double x = std::max(0.0, z.real()), y = std::max(0.0, z.imag());
    const int k = int(std::floor(y / kTwoPi)) + 1;
    const double t = y / kTwoPi - (k - 1);
    return U_piece(k, x, t, upper);
}

ScaledComplex PowerMap::V_half(cplx z, bool upper) const
{
    const double x = std::min(0.0, z.real()), y = std::max(0.0, z.imag());
    const int k = prof_.strip_of_height(y);
    const double t = (y / kTwoPi - double(prof_.calN[k - 1])) / double(prof_.Nk(k));
    return V_piece(k, x, t, upper);
}

ScaledComplex PowerMap::U(cplx z) const
{
    if (z.imag() < 0.0) return U_half(std::conj(z), false).conj();
    return U_half(z, true);
}

ScaledComplex PowerMap::V(cplx z) const
{
    if (z.imag() < 0.0) return V_half(std::conj(z), false).conj();
    return V_half(z, true);
}

cplx PowerMap::Q(cplx z) const
{
    const double x = z.real(), y = z.imag();
    if (x < 0.0) throw std::domain_error("thm5: Q is defined on the closed right half-plane");
    if (x >= 1.0) return z;
    const double ay = std::abs(y), sg = y < 0.0 ? -1.0 : 1.0;
    if (ay >= 1.0) return {x, sg * ((1.0 - x) * prof_.g(ay) + x * ay)};
    const double r = std::abs(z);
    if (r < 1.0) return r == 0.0 ? z : z * std::pow(r, gamma_ - 1.0);
    return z;
}

std::array<double, 4> PowerMap::Q_jacobian(cplx z) const
{
    const double x = z.real(), y = z.imag();
    if (x >= 1.0) return {1.0, 0.0, 0.0, 1.0};
    const double ay = std::abs(y), sg = y < 0.0 ? -1.0 : 1.0;
    if (ay >= 1.0) {
        const double g = prof_.g(ay);
        const int k = int(std::floor(g / kTwoPi)) + 1;
        const double slope = double(prof_.H.slope(k));
        const double dg = gamma_ * std::pow(ay, gamma_ - 1.0) / slope;
        return {1.0, 0.0, sg * (ay - g), (1.0 - x) * dg + x};
    }
    const double r = std::abs(z);
    if (r < 1.0 && r > 0.0) {
        const double p = std::pow(r, gamma_ - 1.0), q = (gamma_ - 1.0) * std::pow(r, gamma_ - 3.0);
        return {p + q * x * x, q * x * y, q * x * y, p + q * y * y};
    }
    return {1.0, 0.0, 0.0, 1.0};
}

EvalResult PowerMap::evaluate(cplx z) const
{
    EvalResult r;
    const bool upper = z.imag() >= 0.0;
    const cplx zu(z.real(), std::abs(z.imag()));
    const double th = std::arg(zu);
    if (th <= kPi / (2.0 * rho_)) {
        const cplx q = Q(std::pow(zu, rho_));
        r.piece = 1;
        r.strip = int(std::floor(q.imag() / kTwoPi)) + 1;
        r.value = U_half(q, upper);
    } else {
        const cplx w = -std::pow(-zu, sigma_);
        r.piece = 2;
        r.strip = prof_.strip_of_height(std::max(0.0, w.imag()));
        r.value = V_half(w, upper);
    }
    if (!upper) {
        r.value = r.value.conj();
        r.strip = -r.strip;
    }
    return r;
}

Beltrami PowerMap::beltrami_at(cplx z) const
{
    Beltrami b;
    if (z == cplx(0.0)) {
        b.indeterminate = true;
        return b;
    }
    const bool upper = z.imag() >= 0.0;
    const cplx zu(z.real(), std::abs(z.imag()));
    const double th = std::arg(zu);
    auto band_mu = [&](bool right, cplx w, int& strip) -> cplx {
        const double x = w.real(), y = std::max(0.0, w.imag());
        int k;
        double t, N = 1.0;
        if (right) {
            k = int(std::floor(y / kTwoPi)) + 1;
            t = y / kTwoPi - (k - 1);
        } else {
            k = prof_.strip_of_height(y);
            N = double(prof_.Nk(k));
            t = (y / kTwoPi - double(prof_.calN[k - 1])) / N;
        }
        strip = k;
        const auto pp = psi_for(upper, k, right ? Side::right : Side::left);
        const Psi& psi = *pp;
        if (psi.identity()) return 0.0;
        b.band = true;
        return beltrami_from_jacobian({1.0 + t * (psi.derivative(x) - 1.0), (psi(x) - x) / (kTwoPi * N), 0.0, 1.0});
    };
    int strip = 0;
    if (th <= kPi / (2.0 * rho_)) {
        const cplx zeta = std::pow(zu, rho_);
        const auto JQ = Q_jacobian(zeta);
        const cplx muQ = beltrami_from_jacobian(JQ);
        if (muQ != cplx(0.0)) b.band = true;
        const cplx muU = band_mu(true, Q(zeta), strip);
        const cplx muW = compose_mu(muQ, fz_of(JQ), muU);
        const cplx dz = rho_ * std::pow(zu, rho_ - 1.0);
        b.mu = muW * std::conj(dz) / dz;
        b.mu_q = muU;
    } else {
        const cplx w = -std::pow(-zu, sigma_);
        const cplx muV = band_mu(false, w, strip);
        const cplx dz = sigma_ * std::pow(-zu, sigma_ - 1.0);
        b.mu = muV * std::conj(dz) / dz;
        b.mu_q = muV;
    }
    if (!upper) {
        b.mu = std::conj(b.mu);
        b.mu_q = std::conj(b.mu_q);
    }
    b.strip = upper ? strip : -strip;
    b.K = dilatation_of(b.mu);
    b.K_q = dilatation_of(b.mu_q);
    return b;
}

std::vector<Seam> PowerMap::seams(double max_calN) const
{
    std::vector<Seam> out;
    int kmax = 0;
    while (kmax + 2 < m_seq_.size() && double(prof_.calN[kmax + 1]) <= max_calN) ++kmax;
    const double ymax_v = kTwoPi * double(prof_.calN[std::max(1, kmax)]);
    const double ymax = std::pow(ymax_v, 1.0 / gamma_);
    for (bool upper : {true, false}) {
        const std::string tag = upper ? "upper" : "lower";
        const double sg = upper ? 1.0 : -1.0;
        for (int k = 1; k <= kmax; ++k) {
            Seam u;
            u.name = tag + " U y=2pi*" + std::to_string(k);
            u.u0 = 0.0;
            u.u1 = 20.0;
            u.sides = [this, k, upper](double x) {
                return std::make_pair(U_piece(k, x, 1.0, upper), U_piece(k + 1, x, 0.0, upper));
            };
            out.push_back(u);
            Seam v;
            v.name = tag + " V y=2pi*calN_" + std::to_string(k);
            v.u0 = -20.0;
            v.u1 = 0.0;
            v.sides = [this, k, upper](double x) {
                return std::make_pair(V_piece(k, x, 1.0, upper), V_piece(k + 1, x, 0.0, upper));
            };
            out.push_back(v);
        }
        Seam ia;
        ia.name = tag + " U(ig(y)) = V(iy^gamma)";
        ia.u0 = 0.05;
        ia.u1 = ymax;
        ia.sides = [this, sg](double y) {
            return std::make_pair(U(cplx(0.0, sg * prof_.g(y))), V(cplx(0.0, sg * std::pow(y, gamma_))));
        };
        out.push_back(ia);
        Seam ray;
        ray.name = tag + " ray arg z = pi/(2 rho)";
        ray.u0 = 0.05;
        ray.u1 = std::pow(ymax, 1.0 / rho_);
        ray.sides = [this, sg](double r) {
            const cplx z = std::polar(r, kPi / (2.0 * rho_));
            const cplx zeta = std::pow(z, rho_);
            const cplx w = -std::pow(-z, sigma_);
            // both formulas evaluated at the same point of the ray
            auto a = U_half(Q(cplx(std::max(0.0, zeta.real()), zeta.imag())), sg > 0);
            auto b = V_half(cplx(std::min(0.0, w.real()), w.imag()), sg > 0);
            if (sg < 0) { a = a.conj(); b = b.conj(); }
            return std::make_pair(a, b);
        };
        out.push_back(ray);
        Seam qc;
        qc.name = tag + " Q |z|=1";
        qc.u0 = 0.0;
        qc.u1 = kPi / 2.0 - 1e-9;
        qc.sides = [this, sg](double a) {
            const cplx z = std::polar(1.0, sg * a);
            const cplx inner = z * std::pow(std::abs(z), gamma_ - 1.0);
            return std::make_pair(U(inner), U(z));
        };
        out.push_back(qc);
        Seam ql;
        ql.name = tag + " Q |Im z|=1";
        ql.u0 = 0.0;
        ql.u1 = 1.0;
        ql.sides = [this, sg](double x) {
            const cplx interp(x, sg * ((1.0 - x) * prof_.g(1.0) + x));
            const cplx other = std::abs(cplx(x, 1.0)) < 1.0 ? cplx(x, sg) * std::pow(std::abs(cplx(x, 1.0)), gamma_ - 1.0)
                                                              : cplx(x, sg);
            return std::make_pair(U(interp), U(other));
        };
        out.push_back(ql);
    }
    Seam ra;
    ra.name = "real axis";
    ra.u0 = -20.0;
    ra.u1 = 20.0;
    ra.sides = [this](double x) {
        if (x >= 0.0) {
            const cplx q = Q(cplx(std::pow(x, rho_), 0.0));
            return std::make_pair(U_half(q, true), U_half(q, false).conj());
        }
        const cplx w(-std::pow(-x, sigma_), 0.0);
        return std::make_pair(V_half(w, true), V_half(w, false).conj());
    };
    out.push_back(ra);
    return out;
}

std::vector<ThetaWindow> PowerMap::windows(double) const
{
    const double a = kPi / (2.0 * rho_);
    return {{-a, a, 1}, {a, kPi, 2}, {-kPi, -a, 2}};
}

double PowerMap::feature_size(double r) const
{
    return std::min(kTwoPi / (rho_ * std::pow(r, rho_ - 1.0)), kTwoPi / (sigma_ * std::pow(r, sigma_ - 1.0)));
}

std::string PowerMap::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "flavor=thm5-power rho=" << rho_ << " gamma=" << gamma_ << " sigma=" << sigma_
       << " delta=" << delta_ << " kcap=" << m_seq_.size();
    return os.str();
}

} // namespace blwork
