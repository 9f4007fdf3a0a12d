#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsec::cli {

enum ExitCode { ok = 0, input_error = 1, unsupported = 2, mismatch = 3 };

struct RunConfig {
    std::string command;
    std::string source;
    std::string target;
    bool free = false;
    std::string format = "text";
    std::string out;
    std::string path;    // validate
    std::string matrix;  // snf: inline JSON or a file path
    std::string xmod;    // hoang: preset name or file path
    std::string cup;     // crosscheck: cup table override
    long long sweep = 3;
};

struct Outcome {
    int code = ok;
    std::string output;
    std::string error;
};

Outcome run(const RunConfig& config);

// Parses argv-style arguments, runs, and writes to out/err (or to --out). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hsec::cli
