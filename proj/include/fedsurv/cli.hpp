#pragma once

#include <string>
#include <vector>

namespace fedsurv {

// Entry point of the fedsurv tool; returns the process exit code. Exposed so
// tests can drive the CLI in-process.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);  // without the program name

}  // namespace fedsurv
