#include "blwork/surgery.hpp"

#include "blwork/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blwork {

Flavor parse_flavor(const std::string& s)
{
    if (s == "thm3" || s == "thm3-spiral") return Flavor::thm3;
    if (s == "thm4" || s == "thm4-strip") return Flavor::thm4;
    if (s == "thm5" || s == "thm5-power") return Flavor::thm5;
    if (s == "thm6" || s == "thm6-mixed") return Flavor::thm6;
    if (s == "sector") return Flavor::sector;
    throw std::invalid_argument("unknown flavor '" + s + "'");
}

std::shared_ptr<const GluedMap> assemble(Flavor flavor, const AssembleParams& p)
{
    switch (flavor) {
    case Flavor::thm3:
        check_pair(p.src);
        check_pair(p.dst);
        return std::make_shared<SpiralMap>(p.src, p.dst);
    case Flavor::thm4:
        return std::make_shared<StripMap>(p.lambda1, p.lambda2, false, p.kcap);
    case Flavor::thm6:
        return std::make_shared<StripMap>(p.lambda1, p.lambda2, true, p.kcap);
    case Flavor::thm5:
        return std::make_shared<PowerMap>(p.rho, p.delta, p.kcap);
    case Flavor::sector:
        if (!(p.lambda1 >= 0.0 && p.lambda2 <= p.n))
            throw std::invalid_argument("sector: Lambda values must lie in [0, n]");
        return std::make_shared<SectorMap>(p.n, p.lambda1, p.lambda2, p.kcap);
    }
    throw std::invalid_argument("assemble: unknown flavor");
}

namespace {

struct RingResult {
    std::vector<std::pair<int, double>> parts;   // (strip, contribution)
    std::vector<DilatationCell> cells;
    double max_mu = 0.0;
    long cells_n = 0;
    long straddle = 0;
    double area = 0.0, straddle_area = 0.0;
};

std::vector<double> edges_of(const std::vector<ThetaWindow>& ws)
{
    std::vector<double> e;
    for (const auto& w : ws) {
        e.push_back(w.t0);
        e.push_back(w.t1);
    }
    std::sort(e.begin(), e.end());
    return e;
}

RingResult ring(const GluedMap& map, double rc, double dr, const DilatationResolution& res)
{
    RingResult out;
    const auto ws = map.windows(rc);
    if (ws.empty()) return out;
    const auto e_in = edges_of(map.windows(std::max(rc - 0.5 * dr, 1e-300)));
    const auto e_out = edges_of(map.windows(rc + 0.5 * dr));
    const double cell_arc = map.feature_size(rc) / res.cells_per_feature;
    for (const auto& w : ws) {
        const double span = w.t1 - w.t0;
        if (!(span > 0.0)) continue;
        const int n = std::max(res.min_cells_per_window, int(std::ceil(span * rc / cell_arc)));
        const double dt = span / n;
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) {
            const double ta = w.t0 + i * dt, tb = ta + dt, th = ta + 0.5 * dt;
            const cplx z = std::polar(rc, th);
            const Beltrami b = map.beltrami_at(z);
            const double am = std::abs(b.mu);
            out.max_mu = std::max(out.max_mu, am);
            const double km1 = b.K - 1.0;
            const double area = rc * dr * dt;
            vals[i] = km1 / (rc * rc) * area;
            out.area += area;
            auto inside = [&](const std::vector<double>& e) {
                auto it = std::upper_bound(e.begin(), e.end(), ta);
                return it != e.end() && *it < tb;
            };
            if (inside(e_in) || inside(e_out)) {
                ++out.straddle;
                out.straddle_area += area;
            }
            if (res.keep_cells) out.cells.push_back({z, am, km1});
        }
        out.cells_n += n;
        out.parts.push_back({w.strip, pairwise_sum(vals)});
    }
    return out;
}

} // namespace

DilatationReport dilatation_integral(const GluedMap& map, double r_min, double r_max,
                                     const DilatationResolution& res)
{
    if (!(r_min > 0.0 && r_max > r_min)) throw std::invalid_argument("dilatation: need 0 < r_min < r_max");
    if (res.dr <= 0.0 || res.cells_per_feature < 1 || res.min_cells_per_window < 1)
        throw std::invalid_argument("dilatation: invalid resolution");
    DilatationReport rep;
    rep.r_min = r_min;
    rep.r_max = r_max;
    double total = 0.0, area = 0.0, straddle_area = 0.0;
    for (double a = r_min; a < r_max; a += 1.0) {
        const double b = std::min(a + 1.0, r_max);
        const double step = std::min(res.dr, map.feature_size(a) / res.cells_per_feature);
        const int n = std::max(1, int(std::ceil((b - a) / step)));
        const double dr = (b - a) / n;
        std::vector<double> ring_totals(n);
        for (int i = 0; i < n; ++i) {
            const RingResult rr = ring(map, a + (i + 0.5) * dr, dr, res);
            std::vector<double> parts;
            for (auto [s, v] : rr.parts) {
                rep.strip_sums[s] += v;
                parts.push_back(v);
            }
            ring_totals[i] = pairwise_sum(parts);
            rep.max_abs_mu = std::max(rep.max_abs_mu, rr.max_mu);
            rep.cell_count += rr.cells_n;
            rep.straddling += rr.straddle;
            area += rr.area;
            straddle_area += rr.straddle_area;
            if (res.keep_cells) rep.cells.insert(rep.cells.end(), rr.cells.begin(), rr.cells.end());
        }
        const double seg = pairwise_sum(ring_totals);
        total += seg;
        rep.cumulative.push_back({b, total});
        rep.increments.push_back(seg);
    }
    rep.total = total;
    if (area > 0.0 && straddle_area > 0.2 * area)
        throw std::runtime_error("dilatation: resolution too coarse, cells straddling seams exceed 20% of area");
    return rep;
}

} // namespace blwork
