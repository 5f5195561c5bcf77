#ifndef CLASSFORGE_CLI_HPP
#define CLASSFORGE_CLI_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace classforge {
namespace cli {

struct Verdict {
    std::string claim;
    std::string status; // PASS | FAIL | SKIPPED
};

struct RunReport {
    std::string command;
    std::map<std::string, std::string> inputs;
    nlohmann::json results = nlohmann::json::object();
    std::vector<Verdict> verdicts;
    long elapsed_ms = 0;
    bool include_timing = false; // timing breaks byte-identical output; opt-in

    int exit_code() const; // 0 iff no FAIL verdict
    nlohmann::json to_json() const;
    std::string to_tsv() const;
};

// Runs one subcommand, writes the report to `out` (JSON by default, TSV
// with --format tsv) and returns the exit code: 0 all-PASS, 1 any FAIL,
// 2 usage or input error (diagnostic on `err`).
int dispatch(const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err);

// Same, exposing the report for in-process callers.
int dispatch(const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err, RunReport& report);

} // namespace cli
} // namespace classforge

#endif
