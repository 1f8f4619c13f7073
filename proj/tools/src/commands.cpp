#include "commands.hpp"

#include "blwork/analysis.hpp"
#include "blwork/surgery.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace blwork::cli {

namespace {

constexpr double kRadiusBase = 50.0;

// Runs fn(i) for i in [0, n) on `threads` workers; results go to caller-owned slots.
template <class F>
void parallel_for(int n, int threads, F&& fn)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

PairIndex pair_of(std::pair<int, int> p) { return {p.first, p.second}; }

std::string b(bool v) { return v ? "true" : "false"; }

Check check(const std::string& id, bool pass, const std::string& detail) { return {id, pass, detail}; }

std::string kv(const std::string& k, double v) { return k + "=" + num(v); }

AssembleParams assembly_of(const ExperimentConfig& c)
{
    AssembleParams p;
    p.src = pair_of(c.pair("src"));
    p.dst = pair_of(c.pair("dst"));
    p.lambda1 = c.real("lambda1");
    p.lambda2 = c.real("lambda2");
    p.rho = c.real("rho");
    p.delta = c.real("delta");
    p.n = int(c.integer("n"));
    p.kcap = int(c.integer("kcap"));
    return p;
}

void value_row(Table& t, double x, double y, const ScaledComplex& v)
{
    const char* kind = v.is_zero() ? "zero" : v.is_pole() ? "pole" : "finite";
    cplx w = v.to_complex_saturated();
    t.rows.push_back({num(x), num(y), kind, num(v.log_modulus), num(v.phase), num(w.real()), num(w.imag())});
}

// ---- commands ----

RunResult cmd_coeffs(const ExperimentConfig& c)
{
    CoefficientTable t = build_coefficients(pair_of(c.pair("pair")));
    RunResult r;
    Table tab{"coefficients", {"poly", "index", "exact", "value"}, {}};
    for (size_t i = 0; i < t.A.size(); ++i) tab.rows.push_back({"A", num((long long)i), t.A[i].get_str(), num(t.A[i].get_d())});
    for (size_t j = 0; j < t.B.size(); ++j) tab.rows.push_back({"B", num((long long)j), t.B[j].get_str(), num(t.B[j].get_d())});
    mpq_class lp = t.leading_product(), iv = CoefficientTable::identity_value(t.pair);
    bool ok = t.identity_holds();
    Table id{"identity", {"pair", "leading_product", "closed_form", "holds"},
             {{t.pair.str(), lp.get_str(), iv.get_str(), b(ok)}}};
    r.tables = {tab, id};
    r.checks.push_back(check("identity", ok, "A_m B_2n = " + lp.get_str() + " vs " + iv.get_str()));
    return r;
}

RunResult cmd_eval(const ExperimentConfig& c)
{
    auto m = Model::get(pair_of(c.pair("pair")));
    Variant v = parse_variant(c.text("variant"));
    std::vector<std::pair<double, double>> pts = c.complexes("points");
    auto g = c.rect("grid");
    if (!g.empty()) {
        long long nx = c.integer("nx"), ny = c.integer("ny");
        if (nx < 1 || ny < 1) throw InputError("nx and ny must be positive");
        for (long long j = 0; j < ny; ++j)
            for (long long i = 0; i < nx; ++i)
                pts.emplace_back(g[0] + (nx > 1 ? (g[1] - g[0]) * i / double(nx - 1) : 0.0),
                                 g[2] + (ny > 1 ? (g[3] - g[2]) * j / double(ny - 1) : 0.0));
    }
    if (pts.empty()) throw InputError("eval needs points or grid");
    std::vector<ScaledComplex> vals(pts.size());
    parallel_for(int(pts.size()), c.threads, [&](int i) { vals[i] = m->eval(cplx(pts[i].first, pts[i].second), v); });
    RunResult r;
    Table t{"values", {"x", "y", "kind", "log_modulus", "phase", "re", "im"}, {}};
    for (size_t i = 0; i < pts.size(); ++i) value_row(t, pts[i].first, pts[i].second, vals[i]);
    r.tables = {t};
    return r;
}

RunResult cmd_phi(const ExperimentConfig& c)
{
    DiffeoSpec spec(ModelRef{pair_of(c.pair("src")), parse_variant(c.text("src_variant"))},
                    ModelRef{pair_of(c.pair("dst")), parse_variant(c.text("dst_variant"))});
    auto rg = c.reals("range");
    if (rg.size() != 3 || !(rg[2] > 0) || rg[1] < rg[0]) throw InputError("range must be a;b;step with a <= b, step > 0");
    std::vector<double> xs;
    for (long long i = 0;; ++i) {
        double x = rg[0] + i * rg[2];
        if (x > rg[1] + 1e-12 * std::max(1.0, std::abs(rg[1]))) break;
        xs.push_back(x);
    }
    std::vector<std::array<double, 3>> out(xs.size());
    parallel_for(int(xs.size()), c.threads, [&](int i) {
        double p = spec.phi(xs[i]);
        out[i] = {p, spec.phi_prime(xs[i]), spec.residual(xs[i], p)};
    });
    RunResult r;
    Table t{"phi", {"x", "phi", "phi_prime", "residual"}, {}};
    double worst = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        t.rows.push_back({num(xs[i]), num(out[i][0]), num(out[i][1]), num(out[i][2])});
        worst = std::max(worst, out[i][2]);
    }
    r.tables.push_back(t);
    r.checks.push_back(check("conjugacy", worst < c.tolerance(), kv("max_residual", worst)));
    if (c.boolean("report")) {
        AsymptoticReport a = asymptotic_report(spec);
        Table at{"asymptotics", {"quantity", "value"},
                 {{"exact", b(a.exact)}, {"decay_slope", num(a.decay_slope)}, {"decay_points", num((long long)a.decay_points)},
                  {"kappa_hat", num(a.kappa_hat)}, {"c_hat", num(a.c_hat)}, {"dphi_plus", num(a.dphi_plus)},
                  {"dphi_minus", num(a.dphi_minus)}, {"max_residual", num(a.max_residual)}}};
        r.tables.push_back(at);
    }
    return r;
}

RunResult cmd_shift(const ExperimentConfig& c)
{
    Variant v = parse_variant(c.text("variant"));
    auto pairs = c.pairs("pairs");
    if (pairs.empty()) throw InputError("shift needs at least one pair");
    std::vector<ShiftConstant> s(pairs.size());
    parallel_for(int(pairs.size()), c.threads, [&](int i) { s[i] = solve_shift(pair_of(pairs[i]), v); });
    RunResult r;
    Table t{"shift", {"pair", "variant", "s", "residual"}, {}};
    double worst = 0.0;
    for (const auto& x : s) {
        t.rows.push_back({x.pair.str(), variant_name(x.variant), num(x.value), num(x.residual)});
        worst = std::max(worst, x.residual);
    }
    r.tables = {t};
    r.checks.push_back(check("shift_residual", worst < c.tolerance(), kv("max_residual", worst)));
    return r;
}

RunResult cmd_seq(const ExperimentConfig& c)
{
    const std::string kind = c.text("kind");
    const int kcap = int(c.integer("kcap"));
    SlopeSequence m, n;
    double gamma = 1.0;
    if (kind == "lemma_a") {
        m = build_lemma_a(c.real("lambda"), kcap);
        n = zero_sequence(kcap);
    } else if (kind == "lemma_1") {
        gamma = c.real("gamma");
        m = build_lemma_1(gamma, c.real("delta"), kcap);
        n = build_lemma_2(gamma, m);
    } else {
        CaseSelection s = select_case(c.real("lambda1"), c.real("lambda2"), kcap);
        m = s.m_seq;
        n = s.n_seq;
    }
    RunResult r;
    Table t{"sequence", {}, {}};
    std::istringstream in(sequences_csv(m, n, int(c.integer("kmax"))));
    std::string line;
    auto cells = [](const std::string& l) {
        std::vector<std::string> v;
        std::string x;
        std::istringstream s(l);
        while (std::getline(s, x, ',')) v.push_back(x);
        return v;
    };
    std::getline(in, line);
    t.columns = cells(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(cells(line));
    r.tables.push_back(t);
    Table mk{"marked", {"sequence", "k"}, {}};
    for (int k : m.marked) mk.rows.push_back({"m", num((long long)k)});
    for (int k : n.marked) mk.rows.push_back({"n", num((long long)k)});
    r.tables.push_back(mk);

    long long samples = c.integer("check_samples");
    if (samples > 0) {
        ProfileBundle pb = build_profiles(m, n, gamma);
        double ymax = 0.9 * pb.H(kTwoPi * pb.H.size());
        double xmax = gamma == 1.0 ? ymax : std::pow(ymax, 1.0 / gamma);
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> U(0.0, xmax);
        double worst = 0.0;
        for (long long i = 0; i < samples; ++i) {
            double x = U(rng), y = pb.target(x);
            worst = std::max(worst, std::abs(pb.H(pb.g(x)) - y) / std::max(1.0, std::abs(y)));
        }
        r.checks.push_back(check("profile_inverse", worst < c.tolerance(), kv("max_rel_error", worst)));
    }
    return r;
}

Table seam_table(const std::vector<SeamReport>& s, double& worst)
{
    Table t{"seams", {"seam", "max_gap", "worst_u", "samples"}, {}};
    worst = 0.0;
    for (const auto& x : s) {
        t.rows.push_back({x.name, num(x.max_gap), num(x.worst_u), num((long long)x.samples)});
        worst = std::max(worst, x.max_gap);
    }
    return t;
}

RunResult cmd_assemble(const ExperimentConfig& c)
{
    auto map = assemble(parse_flavor(c.text("flavor")), assembly_of(c));
    RunResult r;
    double worst;
    r.tables.push_back(seam_table(check_seams(*map, int(c.integer("samples")), c.real("max_caln")), worst));
    r.checks.push_back(check("seams", worst < c.tolerance(), kv("max_gap", worst)));
    auto pts = c.complexes("points");
    if (!pts.empty()) {
        std::vector<EvalResult> ev(pts.size());
        parallel_for(int(pts.size()), c.threads, [&](int i) { ev[i] = map->evaluate(cplx(pts[i].first, pts[i].second)); });
        Table t{"values", {"x", "y", "kind", "log_modulus", "phase", "re", "im", "piece", "strip", "band", "uninterpolated"}, {}};
        for (size_t i = 0; i < pts.size(); ++i) {
            value_row(t, pts[i].first, pts[i].second, ev[i].value);
            auto& row = t.rows.back();
            row.insert(row.end(), {num((long long)ev[i].piece), num((long long)ev[i].strip), b(ev[i].band), b(ev[i].uninterpolated)});
        }
        r.tables.push_back(t);
    }
    Table d{"describe", {"flavor", "description"}, {{map->flavor(), map->describe()}}};
    r.tables.push_back(d);
    return r;
}

void dilatation_tables(const GluedMap& map, double r_min, double r_max, double dr, double tol, RunResult& r)
{
    DilatationResolution res;
    res.dr = dr;
    DilatationReport rep = dilatation_integral(map, r_min, r_max, res);
    Table cum{"cumulative", {"r", "integral"}, {}};
    for (auto [x, v] : rep.cumulative) cum.rows.push_back({num(x), num(v)});
    Table st{"strip_sums", {"strip", "sum"}, {}};
    for (auto [k, v] : rep.strip_sums) st.rows.push_back({num((long long)k), num(v)});
    Table inc{"increments", {"r0", "r1", "increment"}, {}};
    double late = 0.0;
    bool has_late = false;
    for (size_t i = 0; i < rep.increments.size(); ++i) {
        double a = r_min + double(i), e = std::min(r_max, a + 1.0);
        inc.rows.push_back({num(a), num(e), num(rep.increments[i])});
        if (a >= 100.0) {
            late = std::max(late, rep.increments[i]);
            has_late = true;
        }
    }
    Table sum{"dilatation_summary", {"quantity", "value"},
              {{"r_min", num(rep.r_min)}, {"r_max", num(rep.r_max)}, {"total", num(rep.total)},
               {"max_abs_mu", num(rep.max_abs_mu)}, {"cells", num((long long)rep.cell_count)},
               {"straddling", num((long long)rep.straddling)}}};
    r.tables.insert(r.tables.end(), {sum, cum, st, inc});
    r.checks.push_back(check("dilatation_finite", std::isfinite(rep.total) && rep.max_abs_mu < 1.0,
                             kv("total", rep.total) + " " + kv("max_abs_mu", rep.max_abs_mu)));
    if (has_late) r.checks.push_back(check("cauchy_increments", late < tol, kv("max_increment_beyond_100", late)));
}

RunResult cmd_dilatation(const ExperimentConfig& c)
{
    auto map = assemble(parse_flavor(c.text("flavor")), assembly_of(c));
    double a = c.real("r_min"), e = c.real("r_max");
    if (!(a > 0 && e > a)) throw InputError("need 0 < r_min < r_max");
    RunResult r;
    dilatation_tables(*map, a, e, c.real("dr"), c.tolerance(), r);
    return r;
}

struct CountSweep {
    std::vector<std::pair<double, double>> zeros, poles;
    bool zeros_available = true;
    std::string note;
};

CountSweep sweep(const GluedMap& map, const std::vector<double>& radii, int threads)
{
    CountSweep s;
    s.zeros.resize(radii.size());
    s.poles.resize(radii.size());
    std::vector<int> nz(radii.size(), -1);
    std::vector<int> np(radii.size());
    parallel_for(int(radii.size()), threads, [&](int i) {
        np[i] = int(map.poles_within(radii[i]).size());
        try {
            nz[i] = int(map.zeros_within(radii[i]).size());
        } catch (const std::logic_error& e) {
            nz[i] = -1;
        }
    });
    for (size_t i = 0; i < radii.size(); ++i) {
        if (nz[i] < 0) {
            s.zeros_available = false;
            s.note = "zeros of half-shift pieces have no closed form";
        }
        s.zeros[i] = {radii[i], double(std::max(nz[i], 0))};
        s.poles[i] = {radii[i], double(np[i])};
    }
    return s;
}

void fit_rows(Table& t, const std::string& what, const std::vector<std::pair<double, double>>& counts,
              std::optional<ExponentFit>& fit, std::string& err)
{
    try {
        fit = exponent_of_convergence(counts);
        t.rows.push_back({what, num(fit->lambda), num(fit->band_lo), num(fit->band_hi), num(fit->rms),
                          num(fit->loglog_beta), num(fit->loglog_band_lo), num(fit->loglog_band_hi),
                          num(fit->loglog_rms), b(fit->prefer_loglog), num((long long)fit->points)});
    } catch (const std::invalid_argument& e) {
        err = e.what();
    }
}

// ratio max/min of n / scale(r) over all radii; infinite when some n vanishes
double band_ratio(const std::vector<std::pair<double, double>>& counts, const std::function<double(double)>& scale)
{
    double lo = 1e300, hi = 0.0;
    for (auto [r, n] : counts) {
        double q = n / scale(r);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    return lo > 0.0 ? hi / lo : INFINITY;
}

void count_tables(const GluedMap& map, const std::vector<double>& radii, int threads, RunResult& r,
                  CountSweep& s, std::optional<ExponentFit>& fz, std::optional<ExponentFit>& fp)
{
    s = sweep(map, radii, threads);
    Table t{"counts", {"r", "n_zeros", "n_poles"}, {}};
    for (size_t i = 0; i < radii.size(); ++i)
        t.rows.push_back({num(radii[i]), s.zeros_available ? num(s.zeros[i].second) : "NA", num(s.poles[i].second)});
    r.tables.push_back(t);
    Table f{"exponent_fits", {"counts", "lambda", "band_lo", "band_hi", "rms", "loglog_beta", "loglog_band_lo",
                              "loglog_band_hi", "loglog_rms", "prefer_loglog", "points"}, {}};
    std::string ez, ep;
    if (s.zeros_available) fit_rows(f, "zeros", s.zeros, fz, ez);
    fit_rows(f, "poles", s.poles, fp, ep);
    r.tables.push_back(f);
}

RunResult cmd_zeros(const ExperimentConfig& c)
{
    RunResult r;
    const std::string flavor = c.text("flavor");
    if (flavor != "none") {
        AssembleParams p;
        p.src = pair_of(c.pair("src"));
        p.dst = pair_of(c.pair("dst"));
        p.lambda1 = c.real("lambda1");
        p.lambda2 = c.real("lambda2");
        auto map = assemble(parse_flavor(flavor), p);
        CountSweep s;
        std::optional<ExponentFit> fz, fp;
        count_tables(*map, c.reals("radii"), c.threads, r, s, fz, fp);
        return r;
    }
    auto rc = c.rect("rect");
    Rect rect{rc[0], rc[1], rc[2], rc[3]};
    FunctionHandle h = model_handle(pair_of(c.pair("pair")), parse_variant(c.text("variant")));
    CountResult cr = count_zeros_poles(h, rect);
    r.tables.push_back({"count", {"Z", "P", "contour_value", "defect", "retries", "nodes"},
                        {{num((long long)cr.Z), num((long long)cr.P), num(cr.value), num(cr.defect),
                          num((long long)cr.retries), num((long long)cr.nodes)}}});
    r.checks.push_back(check("integer_defect", cr.defect < 1e-6, kv("defect", cr.defect)));
    auto pts = [&](const ZeroSet& zs, const std::string& name) {
        Table t{name, {"x", "y", "residual", "newton_iters"}, {}};
        for (size_t i = 0; i < zs.points.size(); ++i)
            t.rows.push_back({num(zs.points[i].real()), num(zs.points[i].imag()), num(zs.residual[i]),
                              num((long long)zs.newton_iters[i])});
        return t;
    };
    ZeroSet z = locate_zeros(h, rect, c.tolerance());
    r.tables.push_back(pts(z, "zeros"));
    r.checks.push_back(check("zero_count", int(z.points.size()) == cr.Z,
                             "located " + std::to_string(z.points.size()) + " of " + std::to_string(cr.Z)));
    if (c.boolean("poles")) {
        ZeroSet p = locate_poles(h, rect, c.tolerance());
        r.tables.push_back(pts(p, "poles"));
        r.checks.push_back(check("pole_count", int(p.points.size()) == cr.P,
                                 "located " + std::to_string(p.points.size()) + " of " + std::to_string(cr.P)));
    }
    return r;
}

RunResult cmd_nevanlinna(const ExperimentConfig& c)
{
    const std::string model = c.text("model");
    auto radii = c.reals("radii");
    const int samples = int(c.integer("samples"));
    std::vector<NevanlinnaSample> out(radii.size());
    std::vector<double> exact(radii.size(), 0.0);
    if (model.rfind("pair:", 0) == 0) {
        auto parts = model.substr(5);
        auto comma = parts.find(',');
        if (comma == std::string::npos) throw InputError("model pair:<m>,<n> expected");
        PairIndex pi{std::stoi(parts.substr(0, comma)), std::stoi(parts.substr(comma + 1))};
        FunctionHandle h = model_handle(pi);
        auto ws = Model::get(pi)->poles_w();
        double rmax = *std::max_element(radii.begin(), radii.end());
        std::vector<double> moduli;
        for (cplx w : ws) {
            cplx l = std::log(w);
            long K = long(rmax / kTwoPi) + 2;
            for (long k = -K; k <= K; ++k) {
                double a = std::abs(l + cplx(0.0, kTwoPi * k));
                if (a <= rmax) moduli.push_back(a);
            }
        }
        std::sort(moduli.begin(), moduli.end());
        auto n = [&moduli](double t) {
            return double(std::upper_bound(moduli.begin(), moduli.end(), t) - moduli.begin());
        };
        parallel_for(int(radii.size()), c.threads, [&](int i) {
            out[i] = nevanlinna(h, radii[i], n, 0.0, samples);
            exact[i] = counting_integral_exact(moduli, radii[i]);
        });
    } else {
        parallel_for(int(radii.size()), c.threads, [&](int i) { out[i] = nevanlinna_model(model, radii[i]); });
    }
    RunResult r;
    Table t{"nevanlinna", {"r", "m", "N_count", "T", "N_exact"}, {}};
    bool nonneg = true;
    for (size_t i = 0; i < out.size(); ++i) {
        t.rows.push_back({num(out[i].r), num(out[i].m), num(out[i].N_count), num(out[i].T), num(exact[i])});
        nonneg = nonneg && out[i].m >= 0 && out[i].N_count >= 0 && out[i].T >= 0;
    }
    r.tables.push_back(t);
    r.checks.push_back(check("nonnegative", nonneg, "m, N_count, T"));
    return r;
}

OdeCoefficient parse_A(const std::string& s)
{
    if (s.rfind("expq:", 0) == 0) {
        int q;
        try {
            q = std::stoi(s.substr(5));
        } catch (const std::exception&) {
            throw InputError("A: expq:<q> needs an integer q");
        }
        return OdeCoefficient::expq(q);
    }
    if (s.rfind("poly:", 0) == 0) {
        std::vector<cplx> cs;
        std::istringstream in(s.substr(5));
        std::string x;
        while (std::getline(in, x, ',')) {
            try {
                size_t used;
                cs.push_back(std::stod(x, &used));
                if (used != x.size()) throw std::invalid_argument(x);
            } catch (const std::exception&) {
                throw InputError("A: poly coefficient '" + x + "' is not a real");
            }
        }
        if (cs.empty()) throw InputError("A: poly needs at least one coefficient");
        return OdeCoefficient::poly(cs);
    }
    throw InputError("A must be expq:<q> or poly:<c0>,<c1>,...");
}

RunResult cmd_banklaine(const ExperimentConfig& c)
{
    OdeCoefficient A = parse_A(c.text("A"));
    auto rc = c.rect("region");
    auto bz = c.complex("base");
    Rect region{rc[0], rc[1], rc[2], rc[3]};
    cplx base(bz.first, bz.second);
    NormalizedPair pair = ode_normalized_pair(A, base, region);
    auto zs = banklaine_check(pair, region, 1e-10);
    RunResult r;
    Table t{"zeros", {"x", "y", "dE_re", "dE_im", "residual", "sign", "simple"}, {}};
    double worst = 0.0;
    for (const auto& z : zs) {
        t.rows.push_back({num(z.z.real()), num(z.z.imag()), num(z.dE.real()), num(z.dE.imag()), num(z.residual),
                          num((long long)z.sign), b(z.simple)});
        worst = std::max(worst, z.residual);
    }
    double ident = banklaine_identity_residual(pair, base, 2.0);
    r.tables.push_back(t);
    r.tables.push_back({"summary", {"quantity", "value"},
                        {{"zeros", num((long long)zs.size())}, {"max_residual", num(worst)},
                         {"max_wronskian_drift", num(pair.max_drift())}, {"identity_residual", num(ident)},
                         {"taylor_steps", num((long long)pair.steps())}}});
    r.checks.push_back(check("banklaine_residual", worst < c.tolerance(), kv("max_residual", worst)));
    r.checks.push_back(check("wronskian_drift", pair.max_drift() < 1e-9, kv("max_drift", pair.max_drift())));
    r.checks.push_back(check("identity", ident < 1e-6, kv("scaled_residual", ident)));
    return r;
}

RunResult cmd_verify(const ExperimentConfig& c)
{
    const long long th = c.integer("theorem");
    if (th < 3 || th > 6) throw InputError("theorem must be 3, 4, 5 or 6");
    AssembleParams p = assembly_of(c);
    if (th == 5 && !(p.rho > 0.5 && p.rho < 1.0)) throw InputError("thm5 requires rho in (1/2, 1)");
    static const Flavor fl[] = {Flavor::thm3, Flavor::thm4, Flavor::thm5, Flavor::thm6};
    auto map = assemble(fl[th - 3], p);
    RunResult r;
    double worst;
    r.tables.push_back(seam_table(check_seams(*map, 64, c.real("max_caln")), worst));
    r.checks.push_back(check("seams", worst < c.tolerance(), kv("max_gap", worst)));
    dilatation_tables(*map, 1.0, c.real("r_dil"), 0.25, 1e-3, r);

    if (th == 3) {
        const auto& sm = dynamic_cast<const SpiralMap&>(*map);
        const SpiralCharts& ch = sm.charts();
        double lk = std::log(ch.kappa);
        double want = 1.0 + lk * lk / (4.0 * kPi * kPi), got = ch.order();
        r.tables.push_back({"order", {"kappa", "one_over_re_mu", "closed_form"}, {{num(ch.kappa), num(got), num(want)}}});
        r.checks.push_back(check("order_formula", std::abs(got - want) < 1e-12, kv("error", std::abs(got - want))));
    } else if (th == 4 || th == 6) {
        std::vector<double> radii;
        for (int k = 0; k <= 8; ++k) radii.push_back(kRadiusBase * std::pow(2.0, 0.5 * k));
        CountSweep s;
        std::optional<ExponentFit> fz, fp;
        count_tables(*map, radii, c.threads, r, s, fz, fp);
        if (s.zeros_available && p.lambda2 > 0.0) {
            bool ok = fz && std::abs(fz->lambda - p.lambda2) <= 0.15;
            r.checks.push_back(check("zero_exponent", ok, fz ? kv("lambda_hat", fz->lambda) : "fit unavailable"));
        }
        if (p.lambda1 == 0.0) {
            double band = band_ratio(s.poles, [](double x) { return std::pow(std::log(x), 2); });
            r.checks.push_back(check("pole_loglog_band", band <= 4.0, kv("band_ratio", band)));
        } else if (fp) {
            r.checks.push_back(check("pole_exponent", std::abs(fp->lambda - p.lambda1) <= 0.15, kv("lambda_hat", fp->lambda)));
        }
        if (!s.zeros_available) r.tables.push_back({"notes", {"note"}, {{s.note}}});
    } else {
        const auto& pm = dynamic_cast<const PowerMap&>(*map);
        const SlopeSequence& ms = pm.m_sequence();
        auto count_upto = [&](int K) {
            int n = 0;
            for (int k = 1; k <= std::min(K, ms.size()); ++k) n += ms.at(k) > 0;
            return n;
        };
        int half = count_upto(ms.size() / 2), all = count_upto(ms.size());
        r.tables.push_back({"pole_strips", {"k_max", "strips_with_poles"},
                            {{num((long long)ms.size() / 2), num((long long)half)}, {num((long long)ms.size()), num((long long)all)}}});
        if (p.delta == 0.0)
            r.checks.push_back(check("pole_strips_bounded", half == all, "strips with m_k > 0: " + std::to_string(all)));
    }
    return r;
}

} // namespace

RunResult run_command(const ExperimentConfig& cfg)
{
    validate(cfg);
    const std::string& c = cfg.command;
    if (c == "coeffs") return cmd_coeffs(cfg);
    if (c == "eval") return cmd_eval(cfg);
    if (c == "phi") return cmd_phi(cfg);
    if (c == "shift") return cmd_shift(cfg);
    if (c == "seq") return cmd_seq(cfg);
    if (c == "assemble") return cmd_assemble(cfg);
    if (c == "dilatation") return cmd_dilatation(cfg);
    if (c == "zeros") return cmd_zeros(cfg);
    if (c == "nevanlinna") return cmd_nevanlinna(cfg);
    if (c == "banklaine") return cmd_banklaine(cfg);
    if (c == "verify") return cmd_verify(cfg);
    throw InputError("unknown command '" + c + "'");
}

} // namespace blwork::cli
