#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace epifit {

// A named output file produced by a command. Commands never touch the
// filesystem themselves (beyond reading inputs); callers decide where the
// documents land, so results are byte-identical however they are run.
struct ResultDoc {
    std::string name;
    std::string content;
};

// Executes one of: simulate, scan, estimate, bounds, covid. The first
// document is the command's primary output; every run also includes the
// effective config echo.
std::vector<ResultDoc> run_command(const RunConfig& config, const std::string& command);

} // namespace epifit
