#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fransim/config.hpp"

namespace fransim {

struct RunOutput {
    std::string csv;
    nlohmann::json summary;
};

// Computes a subcommand's CSV table and summary without touching the
// filesystem. Throws Error on runtime failures.
RunOutput execute(const RunConfig& cfg);

// Validates, executes and writes results. With format csv the table goes to
// output_path (or `out`); with json-summary the summary goes to `out` and the
// table to output_path when one is set. Nothing is written unless validation
// and execution both succeed.
//
// Exit codes: 0 success, 1 validation failure or unwritable output,
// 2 runtime error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct SelfCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<SelfCheck> run_selftest();

}  // namespace fransim
