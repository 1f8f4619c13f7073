#include "commands.hpp"

#include "blwork/analysis.hpp"
#include "blwork/coefficients.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <map>

using namespace blwork::cli;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheck = 2;
constexpr int kExitInput = 3;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"blwork: model functions, gluing assemblies and zero statistics"};
    app.set_version_flag("--version", std::string(BLWORK_VERSION));
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path, out_dir, format;
    double tol = 0.0;
    int threads = 0;
    long long seed = -1;
    app.add_option("--config", config_path, "experiment config (YAML)")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "directory for tables and manifest.json");
    app.add_option("--tol", tol, "check tolerance (default per command)")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);

    // one option per schema parameter; lists are repeated or ';' separated
    std::map<std::string, std::map<std::string, std::vector<std::string>>> given;
    std::map<std::string, CLI::App*> subs;
    for (const auto& s : schemas()) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        subs[s.name] = sub;
        for (const auto& p : s.params) {
            std::string help = p.help;
            if (!p.fallback.empty()) help += " [" + p.fallback + "]";
            sub->add_option("--" + p.name, given[s.name][p.name], help)->allow_extra_args(false);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    try {
        ExperimentConfig cfg;
        std::string chosen;
        for (auto& [name, sub] : subs)
            if (sub->parsed()) chosen = name;
        if (!config_path.empty()) {
            cfg = load_config(config_path);
            if (!chosen.empty() && chosen != cfg.command)
                throw InputError("subcommand '" + chosen + "' does not match config command '" + cfg.command + "'");
        } else if (!chosen.empty()) {
            cfg = default_config(chosen);
        } else {
            std::cerr << app.help();
            return kExitInput;
        }
        const CommandSchema& sc = schema_of(cfg.command);
        for (const auto& p : sc.params) {
            const auto& v = given[cfg.command][p.name];
            if (v.empty()) continue;
            std::vector<std::string> vals;
            for (const auto& x : v) {
                if (is_list(p.type)) {
                    for (const auto& y : split_list(x)) vals.push_back(y);
                } else {
                    vals.push_back(x);
                }
            }
            cfg.params[p.name] = vals;
        }
        if (tol > 0.0) cfg.tol = tol;
        if (threads > 0) cfg.threads = threads;
        if (!format.empty()) cfg.format = format;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);

        auto t0 = std::chrono::steady_clock::now();
        RunResult res = run_command(cfg);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(cfg, res, wall, std::cout);
        for (const auto& c : res.checks)
            std::cerr << "check " << c.id << ": " << (c.pass ? "PASS" : "FAIL") << " (" << c.detail << ")\n";
        if (const Check* f = res.first_failure()) {
            std::cerr << "failing check: " << f->id << "\n";
            return kExitCheck;
        }
        return kExitPass;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::length_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const blwork::ContractViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "failing check: runtime (" << e.what() << ")\n";
        return kExitCheck;
    }
}
