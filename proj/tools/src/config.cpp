#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace blwork::cli {

namespace {

using T = ParamType;

std::vector<ParamSpec> assembly_params()
{
    return {
        {"flavor", T::choice, "thm4", {"thm3", "thm4", "thm5", "thm6", "sector"}, "assembly flavor"},
        {"src", T::pair, "0,0", {}, "thm3 source pair m,n"},
        {"dst", T::pair, "1,1", {}, "thm3 target pair m,n"},
        {"lambda1", T::real, "0", {}, "thm4/thm6/sector pole exponent"},
        {"lambda2", T::real, "0.5", {}, "thm4/thm6/sector zero exponent"},
        {"rho", T::real, "0.75", {}, "thm5 order in (1/2, 1)"},
        {"delta", T::real, "1", {}, "thm5 pole weight"},
        {"n", T::integer, "2", {}, "sector count parameter"},
        {"kcap", T::integer, "20000", {}, "strip cap"},
    };
}

std::vector<ParamSpec> with(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<CommandSchema> build_schemas()
{
    std::vector<CommandSchema> s;
    s.push_back({"coeffs", "exact coefficient table and leading-product identity", 0.0,
                 {{"pair", T::pair, "1,1", {}, "pair m,n"}}});
    s.push_back({"eval", "log-space model values at points or on a grid", 0.0,
                 {{"pair", T::pair, "1,1", {}, "pair m,n"},
                  {"variant", T::choice, "plain", {"plain", "half_shift"}, "model variant"},
                  {"points", T::complex_list, "", {}, "points x,y"},
                  {"grid", T::rect, "", {}, "grid rectangle x0,x1,y0,y1"},
                  {"nx", T::integer, "11", {}, "grid columns"},
                  {"ny", T::integer, "11", {}, "grid rows"}}});
    s.push_back({"phi", "conjugating diffeomorphism between two models", 1e-11,
                 {{"src", T::pair, "0,0", {}, "source pair"},
                  {"dst", T::pair, "1,1", {}, "target pair"},
                  {"src_variant", T::choice, "plain", {"plain", "half_shift"}, "source variant"},
                  {"dst_variant", T::choice, "plain", {"plain", "half_shift"}, "target variant"},
                  {"range", T::real_list, "-10;10;0.5", {}, "a;b;step"},
                  {"report", T::boolean, "false", {}, "add the asymptotic report"}}});
    s.push_back({"shift", "shift constants v(s) = 2", 1e-12,
                 {{"pairs", T::pair_list, "0,0;1,1", {}, "pairs m,n"},
                  {"variant", T::choice, "plain", {"plain", "half_shift"}, "model variant"}}});
    s.push_back({"seq", "slope sequences and step profiles", 1e-12,
                 {{"kind", T::choice, "lemma_a", {"lemma_a", "lemma_1", "case"}, "sequence family"},
                  {"lambda", T::real, "0.5", {}, "lemma_a exponent"},
                  {"gamma", T::real, "1.5", {}, "lemma_1 exponent"},
                  {"delta", T::real, "1", {}, "lemma_1 weight"},
                  {"lambda1", T::real, "0", {}, "case selection lambda1"},
                  {"lambda2", T::real, "0.5", {}, "case selection lambda2"},
                  {"kmax", T::integer, "100", {}, "rows written"},
                  {"kcap", T::integer, "100000", {}, "sequence length"},
                  {"check_samples", T::integer, "0", {}, "random x for H(g(x)) = target(x)"}}});
    s.push_back({"assemble", "glued map seams and point values", 1e-9,
                 with(assembly_params(), {{"samples", T::integer, "64", {}, "samples per seam"},
                                          {"max_caln", T::real, "500", {}, "largest strip height index"},
                                          {"points", T::complex_list, "", {}, "evaluation points"}})});
    s.push_back({"dilatation", "dilatation integral over an annulus", 1e-3,
                 with(assembly_params(), {{"r_min", T::real, "1", {}, "inner radius"},
                                          {"r_max", T::real, "100", {}, "outer radius"},
                                          {"dr", T::real, "0.25", {}, "ring width bound"}})});
    s.push_back({"zeros", "zeros and poles by argument principle or closed-form enumeration", 1e-10,
                 {{"pair", T::pair, "1,1", {}, "model pair"},
                  {"variant", T::choice, "plain", {"plain", "half_shift"}, "model variant"},
                  {"rect", T::rect, "-5,5,0,6.283185307179586", {}, "counting rectangle"},
                  {"poles", T::boolean, "true", {}, "also locate poles"},
                  {"flavor", T::choice, "none", {"none", "thm3", "thm4", "thm6"}, "count an assembled map instead"},
                  {"src", T::pair, "0,0", {}, "thm3 source pair"},
                  {"dst", T::pair, "1,1", {}, "thm3 target pair"},
                  {"lambda1", T::real, "0", {}, "thm4/thm6 lambda1"},
                  {"lambda2", T::real, "0.5", {}, "thm4/thm6 lambda2"},
                  {"radii", T::real_list, "50;70.710678118654755;100;141.42135623730951;200;282.84271247461902;400;565.68542494923802;800", {}, "count radii"}}});
    s.push_back({"nevanlinna", "proximity, counting and characteristic functions", 1e-10,
                 {{"model", T::text, "exp_exp", {}, "exp_exp, const:<c> or pair:<m>,<n>"},
                  {"radii", T::real_list, "30", {}, "radii"},
                  {"samples", T::integer, "64", {}, "log-spaced counting samples"}}});
    s.push_back({"banklaine", "zeros of E = f1 f2 and the Bank-Laine residuals", 1e-6,
                 {{"A", T::text, "expq:1", {}, "expq:<q> or poly:<c0>,<c1>,..."},
                  {"region", T::rect, "-2,6,-8,8", {}, "search rectangle"},
                  {"base", T::complex, "0,0", {}, "normalization point"}}});
    s.push_back({"verify", "per-theorem verification pipeline", 1e-9,
                 with({{"theorem", T::integer, "4", {}, "3, 4, 5 or 6"}},
                      with(assembly_params(), {{"r_dil", T::real, "100", {}, "dilatation outer radius"},
                                               {"max_caln", T::real, "500", {}, "largest strip height index"}}))});
    // verify selects the flavor from the theorem number
    auto& v = s.back().params;
    v.erase(std::remove_if(v.begin(), v.end(), [](const ParamSpec& p) { return p.name == "flavor"; }), v.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return out;
}

bool parse_real(const std::string& s, double& v)
{
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    auto r = std::from_chars(s.data(), end, v);
    return r.ec == std::errc() && r.ptr == end && std::isfinite(v);
}

bool parse_int(const std::string& s, long long& v)
{
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    auto r = std::from_chars(s.data(), end, v);
    return r.ec == std::errc() && r.ptr == end;
}

bool reals_of(const std::string& s, size_t count, std::vector<double>& v)
{
    auto parts = split(s, ',');
    if (parts.size() != count) return false;
    v.resize(count);
    for (size_t i = 0; i < count; ++i)
        if (!parse_real(parts[i], v[i])) return false;
    return true;
}

const char* type_name(ParamType t)
{
    switch (t) {
    case T::integer: return "an integer";
    case T::real: return "a finite real";
    case T::boolean: return "true or false";
    case T::text: return "text";
    case T::choice: return "one of the listed choices";
    case T::pair: case T::pair_list: return "a pair m,n of nonnegative integers";
    case T::real_list: return "a real";
    case T::complex: case T::complex_list: return "a point x,y";
    case T::rect: return "a rectangle x0,x1,y0,y1 with x0 < x1 and y0 < y1";
    }
    return "?";
}

const ParamSpec& spec_of(const std::string& command, const std::string& key)
{
    for (const auto& p : schema_of(command).params)
        if (p.name == key) return p;
    throw InputError("unknown parameter '" + key + "' for command '" + command + "'");
}

std::string where_of(const std::string& source, const YAML::Mark& m)
{
    if (m.is_null()) return source;
    return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

} // namespace

const std::vector<CommandSchema>& schemas()
{
    static const std::vector<CommandSchema> s = build_schemas();
    return s;
}

const CommandSchema& schema_of(const std::string& command)
{
    for (const auto& s : schemas())
        if (s.name == command) return s;
    throw InputError("unknown command '" + command + "'");
}

bool is_list(ParamType t) { return t == T::pair_list || t == T::real_list || t == T::complex_list; }

std::vector<std::string> split_list(const std::string& s)
{
    if (s.empty()) return {};
    return split(s, ';');
}

void validate_value(const ParamSpec& spec, const std::string& value, const std::string& where)
{
    auto fail = [&](const std::string& why) {
        throw InputError(where + ": parameter '" + spec.name + "' expects " + why + ", got '" + value + "'");
    };
    double d;
    long long i;
    std::vector<double> v;
    switch (spec.type) {
    case T::integer:
        if (!parse_int(value, i)) fail(type_name(spec.type));
        break;
    case T::real: case T::real_list:
        if (!parse_real(value, d)) fail(type_name(spec.type));
        break;
    case T::boolean:
        if (value != "true" && value != "false") fail(type_name(spec.type));
        break;
    case T::text:
        break;
    case T::choice:
        if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
            std::string all;
            for (const auto& c : spec.choices) all += (all.empty() ? "" : "|") + c;
            fail("one of {" + all + "}");
        }
        break;
    case T::pair: case T::pair_list: {
        auto parts = split(value, ',');
        long long a, b;
        if (parts.size() != 2 || !parse_int(parts[0], a) || !parse_int(parts[1], b) || a < 0 || b < 0)
            fail(type_name(spec.type));
        break;
    }
    case T::complex: case T::complex_list:
        if (!reals_of(value, 2, v)) fail(type_name(spec.type));
        break;
    case T::rect:
        if (!reals_of(value, 4, v) || !(v[0] < v[1] && v[2] < v[3])) fail(type_name(spec.type));
        break;
    }
}

void validate(const ExperimentConfig& cfg)
{
    const auto& sc = schema_of(cfg.command);
    for (const auto& [k, vals] : cfg.params) {
        const ParamSpec& p = spec_of(cfg.command, k);
        if (!is_list(p.type) && vals.size() != 1)
            throw InputError("parameter '" + k + "' takes a single value");
        for (const auto& v : vals) validate_value(p, v, "parameter " + k);
    }
    (void)sc;
    if (cfg.threads < 1) throw InputError("threads must be at least 1");
    if (cfg.format != "csv" && cfg.format != "json") throw InputError("format must be csv or json");
    if (cfg.tol && !(*cfg.tol > 0.0)) throw InputError("tol must be positive");
}

ExperimentConfig default_config(const std::string& command)
{
    schema_of(command);
    ExperimentConfig c;
    c.command = command;
    return c;
}

namespace {

std::vector<std::string> raw(const ExperimentConfig& c, const std::string& key)
{
    auto it = c.params.find(key);
    if (it != c.params.end()) return it->second;
    const ParamSpec& p = spec_of(c.command, key);
    if (is_list(p.type)) return split_list(p.fallback);
    return {p.fallback};
}

std::string one(const ExperimentConfig& c, const std::string& key)
{
    auto v = raw(c, key);
    if (v.size() != 1 || v[0].empty()) throw InputError("parameter '" + key + "' is not set");
    return v[0];
}

} // namespace

long long ExperimentConfig::integer(const std::string& key) const
{
    long long v;
    if (!parse_int(one(*this, key), v)) throw InputError("parameter '" + key + "' is not an integer");
    return v;
}

double ExperimentConfig::real(const std::string& key) const
{
    double v;
    if (!parse_real(one(*this, key), v)) throw InputError("parameter '" + key + "' is not a real");
    return v;
}

bool ExperimentConfig::boolean(const std::string& key) const { return one(*this, key) == "true"; }

std::string ExperimentConfig::text(const std::string& key) const
{
    auto v = raw(*this, key);
    return v.empty() ? "" : v[0];
}

std::pair<int, int> ExperimentConfig::pair(const std::string& key) const
{
    auto parts = split(one(*this, key), ',');
    return {std::stoi(parts.at(0)), std::stoi(parts.at(1))};
}

std::vector<std::pair<int, int>> ExperimentConfig::pairs(const std::string& key) const
{
    std::vector<std::pair<int, int>> out;
    for (const auto& s : raw(*this, key)) {
        auto parts = split(s, ',');
        out.emplace_back(std::stoi(parts.at(0)), std::stoi(parts.at(1)));
    }
    return out;
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& s : raw(*this, key)) {
        double v;
        if (!parse_real(s, v)) throw InputError("parameter '" + key + "' holds a non-real '" + s + "'");
        out.push_back(v);
    }
    return out;
}

std::pair<double, double> ExperimentConfig::complex(const std::string& key) const
{
    std::vector<double> v;
    if (!reals_of(one(*this, key), 2, v)) throw InputError("parameter '" + key + "' is not a point");
    return {v[0], v[1]};
}

std::vector<std::pair<double, double>> ExperimentConfig::complexes(const std::string& key) const
{
    std::vector<std::pair<double, double>> out;
    for (const auto& s : raw(*this, key)) {
        std::vector<double> v;
        if (!reals_of(s, 2, v)) throw InputError("parameter '" + key + "' holds a non-point '" + s + "'");
        out.emplace_back(v[0], v[1]);
    }
    return out;
}

std::vector<double> ExperimentConfig::rect(const std::string& key) const
{
    std::vector<double> v;
    auto r = raw(*this, key);
    if (r.size() != 1 || r[0].empty()) return {};
    if (!reals_of(r[0], 4, v)) throw InputError("parameter '" + key + "' is not a rectangle");
    return v;
}

double ExperimentConfig::tolerance() const { return tol ? *tol : schema_of(command).default_tol; }

std::string ExperimentConfig::to_yaml() const
{
    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "command" << YAML::Value << command;
    e << YAML::Key << "seed" << YAML::Value << seed;
    if (tol) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", *tol);
        e << YAML::Key << "tol" << YAML::Value << buf;
    }
    e << YAML::Key << "threads" << YAML::Value << threads;
    e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "format" << YAML::Value << format;
    if (!out_dir.empty()) e << YAML::Key << "dir" << YAML::Value << out_dir;
    e << YAML::EndMap;
    e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    for (const auto& p : schema_of(command).params) {
        auto it = params.find(p.name);
        if (it == params.end()) continue;
        e << YAML::Key << p.name << YAML::Value;
        if (is_list(p.type)) {
            e << YAML::Flow << YAML::BeginSeq;
            for (const auto& v : it->second) e << YAML::DoubleQuoted << v;
            e << YAML::EndSeq;
        } else {
            e << YAML::DoubleQuoted << it->second.at(0);
        }
    }
    e << YAML::EndMap << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& ex) {
        throw InputError(where_of(source, ex.mark) + ": " + ex.msg);
    }
    if (!root.IsMap()) throw InputError(source + ": top level must be a mapping");
    ExperimentConfig c;
    auto scalar = [&](const YAML::Node& n, const std::string& what) {
        if (!n.IsScalar()) throw InputError(where_of(source, n.Mark()) + ": " + what + " must be a scalar");
        return n.Scalar();
    };
    if (!root["command"]) throw InputError(source + ": missing 'command'");
    c.command = scalar(root["command"], "command");
    try {
        schema_of(c.command);
    } catch (const InputError& e) {
        throw InputError(where_of(source, root["command"].Mark()) + ": " + e.what());
    }
    for (auto it = root.begin(); it != root.end(); ++it) {
        const std::string key = it->first.Scalar();
        const YAML::Node& v = it->second;
        const std::string at = where_of(source, v.Mark());
        if (key == "command") continue;
        if (key == "seed") {
            long long s;
            if (!parse_int(scalar(v, "seed"), s) || s < 0) throw InputError(at + ": seed must be a nonnegative integer");
            c.seed = static_cast<unsigned long long>(s);
        } else if (key == "tol") {
            double t;
            if (!parse_real(scalar(v, "tol"), t) || t <= 0) throw InputError(at + ": tol must be a positive real");
            c.tol = t;
        } else if (key == "threads") {
            long long t;
            if (!parse_int(scalar(v, "threads"), t) || t < 1) throw InputError(at + ": threads must be a positive integer");
            c.threads = int(t);
        } else if (key == "output") {
            if (!v.IsMap()) throw InputError(at + ": output must be a mapping");
            for (auto o = v.begin(); o != v.end(); ++o) {
                const std::string ok = o->first.Scalar();
                const std::string oat = where_of(source, o->second.Mark());
                if (ok == "format") {
                    c.format = scalar(o->second, "output.format");
                    if (c.format != "csv" && c.format != "json") throw InputError(oat + ": output.format must be csv or json");
                } else if (ok == "dir") {
                    c.out_dir = scalar(o->second, "output.dir");
                } else {
                    throw InputError(where_of(source, o->first.Mark()) + ": unknown key 'output." + ok + "'");
                }
            }
        } else if (key == "params") {
            if (!v.IsMap()) throw InputError(at + ": params must be a mapping");
            for (auto p = v.begin(); p != v.end(); ++p) {
                const std::string pk = p->first.Scalar();
                const ParamSpec* spec = nullptr;
                for (const auto& s : schema_of(c.command).params)
                    if (s.name == pk) spec = &s;
                if (!spec)
                    throw InputError(where_of(source, p->first.Mark()) + ": unknown parameter '" + pk +
                                     "' for command '" + c.command + "'");
                std::vector<std::string> vals;
                const YAML::Node& pv = p->second;
                if (is_list(spec->type)) {
                    if (pv.IsSequence()) {
                        for (const auto& item : pv) {
                            std::string s = scalar(item, "list item");
                            validate_value(*spec, s, where_of(source, item.Mark()));
                            vals.push_back(s);
                        }
                    } else {
                        for (const auto& s : split_list(scalar(pv, pk))) {
                            validate_value(*spec, s, where_of(source, pv.Mark()));
                            vals.push_back(s);
                        }
                    }
                } else {
                    std::string s;
                    if (pv.IsSequence()) {
                        for (const auto& item : pv) s += (s.empty() ? "" : ",") + scalar(item, "item");
                    } else {
                        s = scalar(pv, pk);
                    }
                    validate_value(*spec, s, where_of(source, pv.Mark()));
                    vals.push_back(s);
                }
                c.params[pk] = vals;
            }
        } else {
            throw InputError(where_of(source, it->first.Mark()) + ": unknown key '" + key + "'");
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace blwork::cli
