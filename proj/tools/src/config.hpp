#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace blwork::cli {

// Input problems: bad config text, schema violations, unparseable values. Exit code 3.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParamType { integer, real, boolean, text, choice, pair, pair_list, real_list, complex, complex_list, rect };

struct ParamSpec {
    std::string name;
    ParamType type;
    std::string fallback;                // canonical default; lists use ';' between items
    std::vector<std::string> choices;    // for choice
    std::string help;
};

struct CommandSchema {
    std::string name;
    std::string help;
    double default_tol;
    std::vector<ParamSpec> params;
};

const std::vector<CommandSchema>& schemas();
const CommandSchema& schema_of(const std::string& command);
bool is_list(ParamType t);

// A validated experiment description. Every parameter value is kept as the
// canonical text it was given in, so serialization round-trips exactly.
struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::vector<std::string>> params;
    std::optional<double> tol;
    int threads = 1;
    std::string format = "csv";
    std::string out_dir;
    unsigned long long seed = 1;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

    // typed access; defaults come from the schema
    long long integer(const std::string& key) const;
    double real(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::pair<int, int> pair(const std::string& key) const;
    std::vector<std::pair<int, int>> pairs(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::pair<double, double> complex(const std::string& key) const;
    std::vector<std::pair<double, double>> complexes(const std::string& key) const;
    std::vector<double> rect(const std::string& key) const;   // x0, x1, y0, y1
    bool has(const std::string& key) const { return params.count(key) > 0; }
    double tolerance() const;

    // canonical YAML text, parameters in schema order
    std::string to_yaml() const;
};

ExperimentConfig default_config(const std::string& command);
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// Checks one value against its type; throws InputError naming `where`.
void validate_value(const ParamSpec& spec, const std::string& value, const std::string& where);
void validate(const ExperimentConfig& cfg);

// Splits a list given on the command line or in the config ("a;b;c").
std::vector<std::string> split_list(const std::string& s);

} // namespace blwork::cli
