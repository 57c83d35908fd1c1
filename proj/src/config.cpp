#include "qflq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qflq/errors.hpp"

namespace qflq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config error at " + (path.empty() ? "/" : path) + ": " + message);
}

const json& require_key(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "required key is missing");
  return *it;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown key");
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Complex as_complex(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected a [re, im] pair");
  return {as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]")};
}

std::vector<double> as_omega(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of frequencies");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) {
    const double w = as_double(v[i], path + "[" + std::to_string(i) + "]");
    if (!(w > 0.0)) fail(path + "[" + std::to_string(i) + "]", "frequency must be > 0");
    out.push_back(w);
  }
  return out;
}

MultiIndex as_index(const json& v, const std::string& path, int d) {
  if (!v.is_array() || static_cast<int>(v.size()) != d)
    fail(path, "expected an integer array of length " + std::to_string(d));
  std::vector<int> entries;
  for (size_t i = 0; i < v.size(); ++i)
    entries.push_back(as_int(v[i], path + "[" + std::to_string(i) + "]"));
  return MultiIndex(std::move(entries));
}

Matrix as_matrix(const json& v, const std::string& path, int dim) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = v[static_cast<size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(rp, "expected " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = as_complex(row[static_cast<size_t>(c)], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

QPOperator parse_system(const json& v, const std::string& path) {
  reject_unknown(v, path, {"dim", "omega", "terms"});
  const int dim = as_int(require_key(v, path, "dim"), path + "/dim");
  if (dim < 1) fail(path + "/dim", "dim must be >= 1");
  FrequencyVector omega(as_omega(require_key(v, path, "omega"), path + "/omega"));

  const json& terms = require_key(v, path, "terms");
  if (!terms.is_array() || terms.empty()) fail(path + "/terms", "expected a non-empty array");
  QPOperator::TermMap map;
  for (size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = path + "/terms[" + std::to_string(i) + "]";
    reject_unknown(terms[i], tp, {"n", "matrix"});
    MultiIndex n = as_index(require_key(terms[i], tp, "n"), tp + "/n", omega.dims());
    if (map.count(n)) fail(tp + "/n", "duplicate index " + n.to_string());
    map.emplace(std::move(n), as_matrix(require_key(terms[i], tp, "matrix"), tp + "/matrix", dim));
  }

  QPOperator op(dim, std::move(omega), std::move(map));
  for (const auto& [n, m] : op.terms()) {
    if ((op.term(-n) - m.adjoint()).norm() > 1e-12 * std::max(1.0, m.norm()))
      fail(path + "/terms", "term at " + n.to_string() +
                                " has no Hermitian partner at " + (-n).to_string());
  }
  return op;
}

DriveSpec parse_drive(const json& v, const std::string& path) {
  reject_unknown(v, path, {"omega", "coeffs"});
  FrequencyVector omega(as_omega(require_key(v, path, "omega"), path + "/omega"));

  const json& coeffs = require_key(v, path, "coeffs");
  if (!coeffs.is_array() || coeffs.empty()) fail(path + "/coeffs", "expected a non-empty array");
  std::map<MultiIndex, Complex> map;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    const std::string cp = path + "/coeffs[" + std::to_string(i) + "]";
    reject_unknown(coeffs[i], cp, {"n", "f"});
    MultiIndex n = as_index(require_key(coeffs[i], cp, "n"), cp + "/n", omega.dims());
    if (n.is_zero()) fail(cp + "/n", "static Fourier component f_0 must vanish");
    if (map.count(n)) fail(cp + "/n", "duplicate index " + n.to_string());
    map.emplace(std::move(n), as_complex(require_key(coeffs[i], cp, "f"), cp + "/f"));
  }
  return DriveSpec(std::move(omega), std::move(map));
}

GridConfig parse_grid(const json& v, const std::string& path) {
  reject_unknown(v, path, {"t0", "t1", "steps"});
  GridConfig grid{as_double(require_key(v, path, "t0"), path + "/t0"),
                  as_double(require_key(v, path, "t1"), path + "/t1"),
                  as_int(require_key(v, path, "steps"), path + "/steps")};
  if (!(grid.t1 > grid.t0)) fail(path + "/t1", "t1 must exceed t0");
  if (grid.steps < 1) fail(path + "/steps", "steps must be >= 1");
  return grid;
}

}  // namespace

std::string task_name(Task task) {
  switch (task) {
    case Task::effective_hamiltonian: return "effective-hamiltonian";
    case Task::evolve: return "evolve";
    case Task::lambda_demo: return "lambda-demo";
    case Task::sambe_compare: return "sambe-compare";
  }
  return "?";
}

std::optional<Task> task_from_name(std::string_view name) {
  if (name == "effective-hamiltonian") return Task::effective_hamiltonian;
  if (name == "evolve") return Task::evolve;
  if (name == "lambda-demo") return Task::lambda_demo;
  if (name == "sambe-compare") return Task::sambe_compare;
  return std::nullopt;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");

  const std::string name = as_string(require_key(root, "", "task"), "/task");
  const auto task = task_from_name(name);
  if (!task) fail("/task", "unknown task '" + name + "'");

  RunConfig config;
  config.task = *task;

  std::set<std::string> allowed = {"task", "output", "resonance_threshold"};
  switch (config.task) {
    case Task::effective_hamiltonian:
      allowed.insert({"system", "order"});
      break;
    case Task::evolve:
      allowed.insert({"system", "grid", "elements", "output_stride"});
      break;
    case Task::lambda_demo:
      allowed.insert({"drive", "grid", "output_stride"});
      break;
    case Task::sambe_compare:
      allowed.insert({"system", "cutoff", "grid", "output_stride"});
      break;
  }
  reject_unknown(root, "", allowed);

  try {
    if (allowed.count("system"))
      config.system = parse_system(require_key(root, "", "system"), "/system");
    if (allowed.count("drive")) config.drive = parse_drive(require_key(root, "", "drive"), "/drive");
    if (allowed.count("grid")) config.grid = parse_grid(require_key(root, "", "grid"), "/grid");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }

  if (allowed.count("order")) {
    config.order = as_int(require_key(root, "", "order"), "/order");
    if (*config.order < 1) fail("/order", "order must be >= 1");
  }
  if (allowed.count("cutoff")) {
    config.cutoff = as_int(require_key(root, "", "cutoff"), "/cutoff");
    if (*config.cutoff < 0) fail("/cutoff", "cutoff must be >= 0");
    for (const auto& [n, m] : config.system->terms())
      if (n.max_abs() > *config.cutoff)
        fail("/cutoff", "cutoff smaller than support index " + n.to_string());
  }
  if (auto it = root.find("resonance_threshold"); it != root.end()) {
    config.resonance_threshold = as_double(*it, "/resonance_threshold");
    if (!(*config.resonance_threshold > 0.0))
      fail("/resonance_threshold", "threshold must be > 0");
  }
  if (auto it = root.find("output_stride"); it != root.end()) {
    config.output_stride = as_int(*it, "/output_stride");
    if (config.output_stride < 1) fail("/output_stride", "stride must be >= 1");
  }
  if (auto it = root.find("elements"); it != root.end()) {
    if (!it->is_array()) fail("/elements", "expected an array of [row, col] pairs");
    for (size_t i = 0; i < it->size(); ++i) {
      const std::string ep = "/elements[" + std::to_string(i) + "]";
      const json& pair = (*it)[i];
      if (!pair.is_array() || pair.size() != 2) fail(ep, "expected a [row, col] pair");
      const int r = as_int(pair[0], ep + "[0]");
      const int c = as_int(pair[1], ep + "[1]");
      const int dim = config.system->dim();
      if (r < 0 || c < 0 || r >= dim || c >= dim) fail(ep, "index outside matrix");
      config.elements.emplace_back(r, c);
    }
  }
  if (auto it = root.find("output"); it != root.end())
    config.output = as_string(*it, "/output");

  return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qflq
