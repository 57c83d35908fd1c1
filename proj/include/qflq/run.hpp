#ifndef QFLQ_RUN_HPP
#define QFLQ_RUN_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "qflq/config.hpp"

namespace qflq {

// Executes a validated config and writes its artifacts. Returns the paths
// written. Identical configs produce byte-identical files.
std::vector<std::filesystem::path> run(const RunConfig& config);

// Full command-line entry point, including exception-to-exit-code mapping:
// 0 ok, 2 config, 3 resonance, 4 accuracy. Diagnostics go to stderr.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace qflq

#endif
