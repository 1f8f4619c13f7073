#include "output.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace blwork::cli {

bool RunResult::all_pass() const { return first_failure() == nullptr; }

const Check* RunResult::first_failure() const
{
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(long long v) { return std::to_string(v); }

std::string to_csv(const Table& t)
{
    std::string s;
    for (size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += '\n';
    for (const auto& r : t.rows) {
        for (size_t i = 0; i < r.size(); ++i) {
            const std::string& c = r[i];
            bool quote = c.find_first_of(",\"\n") != std::string::npos;
            if (i) s += ',';
            if (quote) {
                s += '"';
                for (char ch : c) s += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                s += '"';
            } else {
                s += c;
            }
        }
        s += '\n';
    }
    return s;
}

namespace {

nlohmann::json cell(const std::string& c)
{
    double v;
    const char* end = c.data() + c.size();
    auto r = std::from_chars(c.data(), end, v);
    if (!c.empty() && r.ec == std::errc() && r.ptr == end) return v;
    if (c == "true") return true;
    if (c == "false") return false;
    return c;
}

nlohmann::json table_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json o = nlohmann::json::object();
        for (size_t i = 0; i < r.size() && i < t.columns.size(); ++i) o[t.columns[i]] = cell(r[i]);
        rows.push_back(o);
    }
    return {{"name", t.name}, {"columns", t.columns}, {"rows", rows}};
}

} // namespace

std::string to_json(const std::vector<Table>& tables)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : tables) j.push_back(table_json(t));
    return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

Manifest emit(const ExperimentConfig& cfg, const RunResult& res, double wall_seconds, std::ostream& out)
{
    Manifest m;
    const std::string canon = cfg.to_yaml();
    nlohmann::json j;
    j["tool"] = "blwork";
    j["version"] = BLWORK_VERSION;
    j["command"] = cfg.command;
    j["config_hash"] = sha256_hex(canon);
    j["config"] = canon;
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tolerance();
    j["threads"] = cfg.threads;
    j["wall_time_s"] = wall_seconds;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : res.checks) checks.push_back({{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = checks;
    j["pass"] = res.all_pass();

    nlohmann::json files = nlohmann::json::array();
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        auto write = [&](const std::string& name, const std::string& body) {
            std::ofstream f(std::filesystem::path(cfg.out_dir) / name, std::ios::binary);
            if (!f) throw InputError("cannot write '" + name + "' in '" + cfg.out_dir + "'");
            f << body;
        };
        for (const auto& t : res.tables) {
            std::string name = cfg.command + "_" + t.name + (cfg.format == "json" ? ".json" : ".csv");
            std::string body = cfg.format == "json" ? to_json({t}) : to_csv(t);
            write(name, body);
            std::string d = sha256_hex(body);
            m.files.emplace_back(name, d);
            files.push_back({{"file", name}, {"sha256", d}, {"bytes", body.size()}});
        }
        j["outputs"] = files;
        m.json = j.dump(2) + "\n";
        write("manifest.json", m.json);
    } else {
        if (cfg.format == "json") {
            out << to_json(res.tables);
        } else {
            for (size_t i = 0; i < res.tables.size(); ++i) {
                if (res.tables.size() > 1) out << "# " << res.tables[i].name << '\n';
                out << to_csv(res.tables[i]);
                if (i + 1 < res.tables.size()) out << '\n';
            }
        }
        j["outputs"] = files;
        m.json = j.dump(2) + "\n";
    }
    return m;
}

} // namespace blwork::cli
