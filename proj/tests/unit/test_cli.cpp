#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace blwork::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("blwork_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args)
{
    std::string cmd = std::string(BLWORK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config: canonical YAML round-trips for every command")
{
    for (const auto& s : schemas()) {
        ExperimentConfig c = default_config(s.name);
        c.seed = 42;
        c.threads = 3;
        c.tol = 1e-7;
        c.format = "json";
        c.out_dir = "some/dir";
        for (const auto& p : s.params)
            if (!p.fallback.empty()) c.params[p.name] = is_list(p.type) ? split_list(p.fallback) : std::vector{p.fallback};
        ExperimentConfig back = parse_config(c.to_yaml());
        CHECK_MESSAGE(back == c, s.name);
        CHECK(back.to_yaml() == c.to_yaml());
    }
}

TEST_CASE("config: list values as strings or sequences")
{
    ExperimentConfig a = parse_config("command: zeros\nparams:\n  radii: \"50;100;200\"\n");
    ExperimentConfig b = parse_config("command: zeros\nparams:\n  radii: [50, 100, 200]\n");
    CHECK(a.reals("radii") == b.reals("radii"));
    CHECK(a.reals("radii") == std::vector<double>{50, 100, 200});
}

TEST_CASE("config: unspecified tolerances default to module defaults")
{
    CHECK(parse_config("command: zeros\n").tolerance() == 1e-10);
    CHECK(parse_config("command: banklaine\n").tolerance() == 1e-6);
    CHECK(parse_config("command: dilatation\n").tolerance() == 1e-3);
    CHECK(parse_config("command: zeros\ntol: 1e-8\n").tolerance() == 1e-8);
}

TEST_CASE("config: typed getters fall back to schema defaults")
{
    ExperimentConfig c = parse_config("command: zeros\nparams:\n  pair: \"2,3\"\n");
    CHECK(c.pair("pair") == std::pair{2, 3});
    CHECK(c.text("variant") == "plain");
    CHECK(c.boolean("poles"));
    CHECK(c.rect("rect").size() == 4);
}

TEST_CASE("config: schema errors carry positions")
{
    try {
        parse_config("command: zeros\nparams:\n  bogus: 1\n", "x.yaml");
        FAIL("expected an input error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).rfind("x.yaml:3:", 0) == 0);
    }
    CHECK_THROWS_AS(parse_config("command: nope\n"), InputError);
    CHECK_THROWS_AS(parse_config("command: zeros\nthreads: -2\n"), InputError);
    CHECK_THROWS_AS(parse_config("command: zeros\nparams:\n  variant: sideways\n"), InputError);
    CHECK_THROWS_AS(parse_config("command: zeros\nparams:\n  pair: \"1;x\"\n"), InputError);
    CHECK_THROWS_AS(parse_config("command: [unterminated\n"), InputError);
    CHECK_THROWS_AS(load_config("/nonexistent/blwork.yaml"), InputError);
}

TEST_CASE("coeffs (1,1): exact table and identity check")
{
    ExperimentConfig c = default_config("coeffs");
    c.params["pair"] = {"1,1"};
    RunResult r = run_command(c);
    CHECK(r.all_pass());
    std::string csv = to_csv(r.tables.at(0));
    CHECK(csv.find("A,1,1/3,") != std::string::npos);
    CHECK(csv.find("B,2,1/6,") != std::string::npos);
    CHECK(to_csv(r.tables.at(1)).find("1/18,1/18,true") != std::string::npos);
}

TEST_CASE("coeffs (0,0) and (21,17)")
{
    ExperimentConfig c = default_config("coeffs");
    c.params["pair"] = {"0,0"};
    RunResult r = run_command(c);
    CHECK(r.all_pass());
    CHECK(r.tables.at(0).rows.size() == 2);
    c.params["pair"] = {"21,17"};
    CHECK(run_command(c).all_pass());
}

TEST_CASE("banklaine poly:0 and poly:1")
{
    ExperimentConfig c = default_config("banklaine");
    c.params["A"] = {"poly:0"};
    c.params["region"] = {"-1,1,-1,1"};
    RunResult r = run_command(c);
    CHECK(r.all_pass());
    CHECK(r.tables.at(0).rows.size() == 1);
    c.params["A"] = {"poly:1"};
    c.params["region"] = {"-4,4,-1,1"};
    r = run_command(c);
    CHECK(r.all_pass());
    CHECK(r.tables.at(0).rows.size() == 5);
}

TEST_CASE("manifest: identical configs give identical digests")
{
    ExperimentConfig c = default_config("zeros");
    c.params["pair"] = {"1,1"};
    std::string hashes[2];
    std::vector<std::pair<std::string, std::string>> files[2];
    for (int i = 0; i < 2; ++i) {
        c.out_dir = scratch("manifest" + std::to_string(i)).string();
        RunResult r = run_command(c);
        std::ostringstream sink;
        Manifest m = emit(c, r, 0.0, sink);
        files[i] = m.files;
        auto j = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "manifest.json"));
        hashes[i] = j.at("config_hash").get<std::string>();
        CHECK(j.at("pass").get<bool>());
        for (const auto& [name, digest] : m.files) CHECK(sha256_hex(slurp(fs::path(c.out_dir) / name)) == digest);
        fs::remove_all(c.out_dir);
    }
    CHECK(files[0] == files[1]);
    CHECK(!files[0].empty());
    // out_dir is part of the config, so compare hashes of equal configs
    ExperimentConfig a = default_config("zeros"), b = default_config("zeros");
    CHECK(sha256_hex(a.to_yaml()) == sha256_hex(b.to_yaml()));
}

TEST_CASE("output: CSV quoting, JSON tables and SHA-256")
{
    Table t{"t", {"a", "b"}, {{"1,2", "x\"y"}}};
    CHECK(to_csv(t) == "a,b\n\"1,2\",\"x\"\"y\"\n");
    auto j = nlohmann::json::parse(to_json({t}));
    REQUIRE(j.is_array());
    CHECK(j.size() == 1);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(num(0.1) == "0.10000000000000001");
}

TEST_CASE("cli binary: exit codes")
{
    CHECK(run_cli("coeffs --pair 1,1") == 0);
    CHECK(run_cli("coeffs --pair 1,x") == 3);
    CHECK(run_cli("coeffs --pair 20000,1") == 3);
    CHECK(run_cli("frobnicate") == 3);
    CHECK(run_cli("--config /nonexistent/blwork.yaml") == 3);
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("verify --theorem 5 --rho 0.4") == 3);
}

TEST_CASE("cli binary: config file drives a run and writes a manifest")
{
    fs::path dir = scratch("cfg");
    fs::path cfg = dir / "run.yaml";
    std::ofstream(cfg) << "command: coeffs\nparams:\n  pair: \"2,1\"\n";
    CHECK(run_cli("--config " + cfg.string() + " --out " + (dir / "out").string() + " --format json") == 0);
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    auto j = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(j.at("command") == "coeffs");
    CHECK(j.at("outputs").size() >= 1);
    fs::remove_all(dir);
}

} // TEST_SUITE
