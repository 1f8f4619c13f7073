#pragma once

#include "config.hpp"
#include "output.hpp"

namespace blwork::cli {

RunResult run_command(const ExperimentConfig& cfg);

} // namespace blwork::cli
