#ifndef QFLQ_CONFIG_HPP
#define QFLQ_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qflq/lambda.hpp"
#include "qflq/qp_operator.hpp"

namespace qflq {

enum class Task { effective_hamiltonian, evolve, lambda_demo, sambe_compare };

std::string task_name(Task task);
std::optional<Task> task_from_name(std::string_view name);

struct GridConfig {
  double t0;
  double t1;
  int steps;
};

// Fully validated run description. Every matrix shape and Hermitian pairing
// check happens during parsing, before any computation starts.
struct RunConfig {
  Task task;
  std::optional<QPOperator> system;
  std::optional<DriveSpec> drive;
  std::optional<int> order;
  std::optional<int> cutoff;
  std::optional<GridConfig> grid;
  std::optional<double> resonance_threshold;
  int output_stride = 1;
  std::vector<std::pair<int, int>> elements;  // evolve; empty means all
  std::string output;
};

// Parses and schema-validates a JSON config. Violations throw ConfigError
// naming the offending key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);

}  // namespace qflq

#endif
