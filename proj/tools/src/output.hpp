#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace blwork::cli {

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Check {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct RunResult {
    std::vector<Table> tables;
    std::vector<Check> checks;
    bool all_pass() const;
    const Check* first_failure() const;
};

// 17 significant digits
std::string num(double v);
std::string num(long long v);

std::string to_csv(const Table& t);
std::string to_json(const std::vector<Table>& tables);
std::string sha256_hex(const std::string& bytes);

struct Manifest {
    std::string json;
    std::vector<std::pair<std::string, std::string>> files;   // name, digest
};

// Writes tables (one file each) and manifest.json into cfg.out_dir, or prints
// tables to `out` when no directory is set. Returns the manifest.
Manifest emit(const ExperimentConfig& cfg, const RunResult& res, double wall_seconds, std::ostream& out);

} // namespace blwork::cli
