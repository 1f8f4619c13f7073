#include "blwork/surgery.hpp"

#include "blwork/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace blwork {

namespace {

using PsiKey = std::tuple<int, int, int, int, int, int, int, int>;

std::shared_ptr<const Psi> shared_psi(const ModelRef& a, const ModelRef& b, Side side, int l)
{
    static std::mutex mu;
    static std::map<PsiKey, std::shared_ptr<const Psi>> cache;
    const PsiKey key{a.pair.m, a.pair.n, int(a.variant), b.pair.m, b.pair.n, int(b.variant),
                     int(side), side == Side::right ? l : 0};
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto p = std::make_shared<const Psi>(a, b, side, l);
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(key, p).first->second;
}

// x with x + t (psi(x) - x) = X
double invert_band(const Psi& psi, double t, double X)
{
    if (psi.identity() || t == 0.0) return X;
    auto F = [&](double x) { return x + t * (psi(x) - x) - X; };
    auto dF = [&](double x) { return 1.0 + t * (psi.derivative(x) - 1.0); };
    return solve_increasing(F, dF, X, 1e-14, 1e-2).x;
}

double root_phase01(cplx q)
{
    double a = std::arg(q);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a / kTwoPi;
}

} // namespace

StripMap::StripMap(double lambda1, double lambda2, bool mixed, int kcap)
    : lambda1_(lambda1), lambda2_(lambda2), mixed_(mixed), kcap_(kcap),
      sel_(select_case(lambda1, lambda2, kcap)),
      prof_(build_profiles(sel_.m_seq, sel_.n_seq))
{
    if (kcap < 8) throw std::invalid_argument("strip map: kcap too small");
    build_half(up_, true);
    if (mixed_) build_half(low_, false);
}

void StripMap::build_half(Half& h, bool upper)
{
    const int K = kcap_;
    h.refs.resize(K);
    h.models.resize(K);
    h.shift.resize(K);
    for (int k = 1; k <= K; ++k) {
        const PairIndex pr{sel_.m_seq.at(k), sel_.n_seq.at(k)};
        const Variant v = (upper && mixed_ && pr.n == 1) ? Variant::half_shift : Variant::plain;
        h.refs[k - 1] = ModelRef{pr, v};
        h.models[k - 1] = Model::get(pr);
        h.shift[k - 1] = shift_of(h.refs[k - 1]);
    }
    h.right.resize(K - 1);
    h.left.resize(K - 1);
    for (int k = 1; k < K; ++k) {
        h.right[k - 1] = shared_psi(h.refs[k - 1], h.refs[k], Side::right, sel_.l);
        h.left[k - 1] = shared_psi(h.refs[k - 1], h.refs[k], Side::left, sel_.l);
        if (!h.right[k - 1]->identity() || prof_.Nk(k) != sel_.l || !h.left[k - 1]->identity())
            h.active_strips.push_back(k);
    }
}

ModelRef StripMap::ref(int k, bool upper) const { return half(upper).refs.at(k - 1); }

bool StripMap::active(int k, Side side, bool upper) const
{
    const Half& h = half(upper);
    if (side == Side::right) return !h.right.at(k - 1)->identity() || prof_.Nk(k) != sel_.l;
    return !h.left.at(k - 1)->identity();
}

ScaledComplex StripMap::piece(int k, double x, double t, bool upper, Side side) const
{
    if (k < 1 || k >= kcap_) throw std::out_of_range("strip map: strip index beyond cap");
    const Half& h = half(upper);
    const Psi& psi = side == Side::right ? *h.right[k - 1] : *h.left[k - 1];
    const double X = psi.identity() ? x : x + t * (psi(x) - x);
    const double a = side == Side::right ? double(sel_.l) : double(prof_.Nk(k));
    const cplx arg(X / a + h.shift[k - 1], kTwoPi * t);
    return h.models[k - 1]->eval(arg, h.refs[k - 1].variant);
}

EvalResult StripMap::evaluate(cplx z) const
{
    const bool upper = z.imag() >= 0.0;
    const double y = std::abs(z.imag()), x = z.real();
    const int k = prof_.strip_of_height(y);
    if (k >= kcap_) throw std::out_of_range("strip map: height beyond strip cap");
    const double t = (y / kTwoPi - double(prof_.calN[k - 1])) / double(prof_.Nk(k));
    const Side side = x >= 0.0 ? Side::right : Side::left;
    EvalResult r;
    r.value = piece(k, x, t, upper, side);
    if (!upper) r.value = r.value.conj();
    r.strip = upper ? k : -k;
    r.piece = side == Side::right ? 1 : 2;
    const Half& h = half(upper);
    r.band = !(side == Side::right ? h.right : h.left)[k - 1]->identity();
    return r;
}

Beltrami StripMap::beltrami_at(cplx z) const
{
    const bool upper = z.imag() >= 0.0;
    const double y = std::abs(z.imag()), x = z.real();
    const int k = prof_.strip_of_height(y);
    if (k >= kcap_) throw std::out_of_range("strip map: height beyond strip cap");
    const double Nk = double(prof_.Nk(k));
    const double t = (y / kTwoPi - double(prof_.calN[k - 1])) / Nk;
    const Side side = x >= 0.0 ? Side::right : Side::left;
    const Half& h = half(upper);
    const Psi& psi = side == Side::right ? *h.right[k - 1] : *h.left[k - 1];
    const double a = side == Side::right ? double(sel_.l) : Nk;
    double dX = 1.0, off = 0.0;
    if (!psi.identity()) {
        dX = 1.0 + t * (psi.derivative(x) - 1.0);
        off = psi(x) - x;
    }
    Beltrami b;
    b.strip = upper ? k : -k;
    b.band = !psi.identity();
    b.indeterminate = std::abs(x) < 1e-12 || t < 1e-12 || t > 1.0 - 1e-12;
    // G = g o chi~ with chi~(x, y) = (X/a + s, 2 pi t)
    b.mu = beltrami_from_jacobian({dX / a, off / (kTwoPi * Nk * a), 0.0, 1.0 / Nk});
    b.mu_q = psi.identity() ? cplx(0.0) : beltrami_from_jacobian({dX, off / (kTwoPi * a), 0.0, 1.0});
    if (!upper) {
        b.mu = std::conj(b.mu);
        b.mu_q = std::conj(b.mu_q);
    }
    b.K = dilatation_of(b.mu);
    b.K_q = dilatation_of(b.mu_q);
    return b;
}

std::vector<Seam> StripMap::seams(double max_calN) const
{
    std::vector<Seam> out;
    std::vector<bool> halves{true};
    if (mixed_) halves.push_back(false);
    for (bool upper : halves) {
        const std::string tag = upper ? "upper" : "lower";
        for (int k = 1; k + 1 < kcap_ && double(prof_.calN[k]) <= max_calN; ++k) {
            Seam s;
            s.name = tag + " y=2pi*calN_" + std::to_string(k);
            s.u0 = -20.0;
            s.u1 = 20.0;
            s.sides = [this, k, upper](double x) {
                const Side sd = x >= 0.0 ? Side::right : Side::left;
                return std::make_pair(piece(k, x, 1.0, upper, sd), piece(k + 1, x, 0.0, upper, sd));
            };
            out.push_back(s);
            Seam v;
            v.name = tag + " x=0 strip " + std::to_string(k);
            v.u0 = 0.0;
            v.u1 = 1.0;
            v.sides = [this, k, upper](double t) {
                return std::make_pair(piece(k, 0.0, t, upper, Side::right),
                                      piece(k, -0.0, t, upper, Side::left));
            };
            out.push_back(v);
        }
    }
    if (mixed_) {
        Seam r;
        r.name = "real axis";
        r.u0 = -20.0;
        r.u1 = 20.0;
        r.sides = [this](double x) {
            const Side sd = x >= 0.0 ? Side::right : Side::left;
            return std::make_pair(piece(1, x, 0.0, true, sd), piece(1, x, 0.0, false, sd).conj());
        };
        out.push_back(r);
    }
    return out;
}

std::vector<ThetaWindow> StripMap::windows(double r) const
{
    std::vector<ThetaWindow> out;
    for (bool upper : {true, false}) {
        const Half& h = half(upper);
        for (int k : h.active_strips) {
            const double y0 = kTwoPi * double(prof_.calN[k - 1]);
            if (y0 >= r) break;
            const double y1 = std::min(kTwoPi * double(prof_.calN[k]), r);
            const double a0 = std::asin(y0 / r), a1 = std::asin(y1 / r);
            const int id = upper ? k : -k;
            if (active(k, Side::right, upper)) {
                if (upper) out.push_back({a0, a1, id});
                else out.push_back({-a1, -a0, id});
            }
            if (active(k, Side::left, upper)) {
                if (upper) out.push_back({kPi - a1, kPi - a0, id});
                else out.push_back({-kPi + a0, -kPi + a1, id});
            }
        }
    }
    return out;
}

double StripMap::feature_size(double) const { return kTwoPi; }

std::string StripMap::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "flavor=" << flavor() << " case=" << sel_.case_id << " l=" << sel_.l
       << " lambda1=" << lambda1_ << " lambda2=" << lambda2_ << " kcap=" << kcap_;
    return os.str();
}

std::vector<cplx> StripMap::points_of(bool zeros, double r) const
{
    std::vector<cplx> out;
    for (bool upper : {true, false}) {
        const Half& h = half(upper);
        for (int k = 1; k < kcap_; ++k) {
            const double y0 = kTwoPi * double(prof_.calN[k - 1]);
            if (y0 > r) break;
            const ModelRef& ref = h.refs[k - 1];
            if (zeros && ref.variant == Variant::half_shift)
                throw std::logic_error("strip map: zeros of half-shift pieces have no closed form");
            const Model& m = *h.models[k - 1];
            const std::vector<cplx> roots = zeros ? m.zeros_w() : m.poles_w();
            const double Nk = double(prof_.Nk(k));
            for (const cplx& q : roots) {
                const double t = root_phase01(q);
                const double y = y0 + kTwoPi * Nk * t;
                if (y > r || (!upper && y == 0.0)) continue;
                const double u = std::log(std::abs(q)) - h.shift[k - 1];
                const Side sd = u >= 0.0 ? Side::right : Side::left;
                const double a = sd == Side::right ? double(sel_.l) : Nk;
                const Psi& psi = sd == Side::right ? *h.right[k - 1] : *h.left[k - 1];
                const double x = invert_band(psi, t, a * u);
                const cplx z(x, upper ? y : -y);
                if (std::abs(z) <= r) out.push_back(z);
            }
        }
    }
    return out;
}

std::vector<cplx> StripMap::zeros_within(double r) const { return points_of(true, r); }
std::vector<cplx> StripMap::poles_within(double r) const { return points_of(false, r); }

// ---- n >= 2 sectors ----

SectorMap::SectorMap(int n, double Lambda1, double Lambda2, int kcap)
    : n_(n), base_((n >= 2 ? Lambda1 / n : 0.0), (n >= 2 ? Lambda2 / n : 0.0), false, kcap)
{
    if (n < 2) throw std::invalid_argument("sector map: n must be at least 2");
}

namespace {

int sector_of(cplx z, int n)
{
    double th = std::arg(z);
    if (th < 0.0) th += kTwoPi;
    const int j = int(std::floor(th * n / kPi)) + 1;
    return std::clamp(j, 1, 2 * n);
}

} // namespace

EvalResult SectorMap::evaluate(cplx z) const
{
    EvalResult r;
    if (z == cplx(0.0)) {
        r.uninterpolated = true;
        r.value = base_.eval(0.0);
        return r;
    }
    const int j = sector_of(z, n_);
    const cplx w = std::pow(z, n_);
    const EvalResult b = base_.evaluate(w);
    r.piece = j;
    r.strip = b.strip;
    r.band = b.band;
    r.uninterpolated = std::abs(w.imag()) <= kTwoPi;
    r.value = (j == 1 || j == 2 * n_) ? b.value.inv() : b.value;
    return r;
}

Beltrami SectorMap::beltrami_at(cplx z) const
{
    if (z == cplx(0.0)) {
        Beltrami b;
        b.indeterminate = true;
        return b;
    }
    const cplx w = std::pow(z, n_);
    Beltrami b = base_.beltrami_at(w);
    // compose with the conformal power map: mu(z) = mu_0(w) conj(w')/w'
    const cplx dw = double(n_) * std::pow(z, n_ - 1);
    const cplx rot = std::conj(dw) / dw;
    b.mu *= rot;
    b.mu_q *= rot;
    if (std::abs(w.imag()) <= kTwoPi) b.indeterminate = true;
    return b;
}

std::vector<Seam> SectorMap::seams(double max_calN) const
{
    auto s = base_.seams(max_calN);
    for (auto& x : s) x.name = "sector base " + x.name;
    return s;
}

std::vector<ThetaWindow> SectorMap::windows(double r) const
{
    std::vector<ThetaWindow> out;
    const auto base = base_.windows(std::pow(r, n_));
    for (int j = 1; j <= 2 * n_; ++j) {
        const bool odd = j % 2 == 1;
        const double off = odd ? (j - 1) * kPi : j * kPi;
        for (const auto& w : base) {
            if ((w.t0 >= 0.0) != odd) continue;
            double t0 = (w.t0 + off) / n_, t1 = (w.t1 + off) / n_;
            if (t0 > kPi) { t0 -= kTwoPi; t1 -= kTwoPi; }
            out.push_back({t0, t1, w.strip});
        }
    }
    return out;
}

double SectorMap::feature_size(double r) const
{
    return base_.feature_size(std::pow(r, n_)) / (n_ * std::pow(r, n_ - 1));
}

std::string SectorMap::describe() const
{
    return "flavor=sector n=" + std::to_string(n_) + " base={" + base_.describe() + "}";
}

} // namespace blwork
