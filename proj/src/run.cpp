#include "qflq/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qflq/curve_table.hpp"
#include "qflq/magnus.hpp"
#include "qflq/propagator.hpp"
#include "qflq/sambe.hpp"

namespace qflq {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  out << bytes;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

double resolve_threshold(const RunConfig& config, const FrequencyVector& omega) {
  return config.resonance_threshold ? *config.resonance_threshold
                                    : default_resonance_threshold(omega);
}

std::filesystem::path require_output(const RunConfig& config) {
  if (config.output.empty())
    throw ConfigError("config error at /output: no output path given (config key or --out)");
  return config.output;
}

std::vector<std::filesystem::path> run_effective_hamiltonian(const RunConfig& config) {
  const QPOperator& h = *config.system;
  const double threshold = resolve_threshold(config, h.omega());
  const MagnusSeries series = expand(h, *config.order, threshold);

  json out;
  out["task"] = task_name(config.task);
  out["dim"] = h.dim();
  out["d"] = h.dims();
  out["omega"] = h.omega().entries();
  out["order"] = series.max_order();
  out["resonance_threshold"] = threshold;
  out["input_hash"] = series.input_hash;
  json orders = json::array();
  for (const auto& term : series.terms) {
    json o;
    o["order"] = term.order;
    o["hq"] = matrix_to_json(term.hq);
    o["hq_frobenius_norm"] = term.hq.norm();
    orders.push_back(std::move(o));
  }
  out["orders"] = std::move(orders);
  out["hq_total"] = matrix_to_json(effective_hamiltonian(series, series.max_order()));

  const auto path = require_output(config);
  write_file(path, out.dump(2) + "\n");
  return {path};
}

std::vector<std::filesystem::path> run_evolve(const RunConfig& config) {
  const QPOperator& h = *config.system;
  const TimeGrid grid(config.grid->t0, config.grid->t1, config.grid->steps);
  const PropagatorTrace trace = evolve_exact(h, grid);

  std::vector<std::pair<int, int>> elements = config.elements;
  if (elements.empty())
    for (int r = 0; r < h.dim(); ++r)
      for (int c = 0; c < h.dim(); ++c) elements.emplace_back(r, c);

  CurveTable table;
  table.header = {"t"};
  for (const auto& [r, c] : elements) {
    table.header.push_back("re_U_" + std::to_string(r) + "_" + std::to_string(c));
    table.header.push_back("im_U_" + std::to_string(r) + "_" + std::to_string(c));
  }
  table.header.push_back("unitarity_residual");

  const auto id = Matrix::Identity(h.dim(), h.dim());
  for (size_t k = 0; k < trace.times.size(); k += static_cast<size_t>(config.output_stride)) {
    std::vector<double> row{trace.times[k]};
    const Matrix& u = trace.unitaries[k];
    for (const auto& [r, c] : elements) {
      row.push_back(u(r, c).real());
      row.push_back(u(r, c).imag());
    }
    row.push_back((u.adjoint() * u - id).norm());
    table.append_row(std::move(row));
  }

  const auto path = require_output(config);
  write_file(path, table.to_csv());
  return {path};
}

std::vector<std::filesystem::path> run_lambda_demo(const RunConfig& config) {
  const LambdaExperiment experiment{*config.drive,
                                    TimeGrid(config.grid->t0, config.grid->t1, config.grid->steps)};
  const CurveTable table = run_experiment(experiment, config.output_stride);
  const auto path = require_output(config);
  write_file(path, table.to_csv());
  return {path};
}

std::vector<std::filesystem::path> run_sambe_compare(const RunConfig& config) {
  const QPOperator& h = *config.system;
  const TimeGrid grid(config.grid->t0, config.grid->t1, config.grid->steps);
  const ExtendedOperator k = build_extended(h, *config.cutoff);

  const PropagatorTrace trace = evolve_exact(h, grid);
  std::vector<double> times;
  std::vector<const Matrix*> reference;
  for (size_t i = 0; i < trace.times.size(); i += static_cast<size_t>(config.output_stride)) {
    times.push_back(trace.times[i]);
    reference.push_back(&trace.unitaries[i]);
  }
  const std::vector<Matrix> from_extended = extended_propagator_trace(k, times);

  CurveTable table;
  table.header = {"t", "frobenius_error"};
  for (size_t i = 0; i < times.size(); ++i)
    table.append_row({times[i], (from_extended[i] - *reference[i]).norm()});

  const auto path = require_output(config);
  write_file(path, table.to_csv());

  json qe;
  qe["task"] = task_name(config.task);
  qe["cutoff"] = *config.cutoff;
  qe["omega"] = h.omega().entries();
  qe["quasienergies"] = quasienergies(k);
  auto qe_path = path;
  qe_path.replace_extension(".quasienergies.json");
  write_file(qe_path, qe.dump(2) + "\n");
  return {path, qe_path};
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

int sweep_threads() {
  if (const char* env = std::getenv("QFLQ_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int run_sweep(Task task, const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << "sweep: " << dir << " is not a directory\n";
    return 2;
  }
  std::vector<std::filesystem::path> configs;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      configs.push_back(entry.path());
  std::sort(configs.begin(), configs.end());
  const std::filesystem::path out_dir = dir / "out";
  std::filesystem::create_directories(out_dir);

  std::vector<int> codes(configs.size(), 0);
  std::vector<std::string> messages(configs.size());
  std::atomic<size_t> next{0};
  const int workers = std::min<int>(sweep_threads(), std::max<size_t>(configs.size(), 1));

  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1)) {
      try {
        std::ifstream in(configs[i], std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string bytes = buf.str();
        RunConfig config = parse_config(bytes);
        if (config.task != task)
          throw ConfigError("config error at /task: expected " + task_name(task) + ", found " +
                            task_name(config.task));
        const char* ext = config.task == Task::effective_hamiltonian ? ".json" : ".csv";
        config.output = (out_dir / (hex16(fnv1a(bytes)) + ext)).string();
        run(config);
      } catch (const ResonanceError& e) {
        codes[i] = 3;
        messages[i] = e.what();
      } catch (const AccuracyError& e) {
        codes[i] = 4;
        messages[i] = e.what();
      } catch (const ConfigError& e) {
        codes[i] = 2;
        messages[i] = e.what();
      } catch (const std::exception& e) {
        codes[i] = 1;
        messages[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < configs.size(); ++i)
    if (codes[i] != 0) std::cerr << configs[i].string() << ": " << messages[i] << "\n";
  for (int code : codes)
    if (code != 0) return code;
  return 0;
}

}  // namespace

std::vector<std::filesystem::path> run(const RunConfig& config) {
  switch (config.task) {
    case Task::effective_hamiltonian: return run_effective_hamiltonian(config);
    case Task::evolve: return run_evolve(config);
    case Task::lambda_demo: return run_lambda_demo(config);
    case Task::sambe_compare: return run_sambe_compare(config);
  }
  throw std::logic_error("run: unreachable task");
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Effective Hamiltonians for quasi-periodically driven quantum systems"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string config_path;
    std::string out_path;
    int order = 0;
    int cutoff = -1;
    std::string sweep_dir;
  };
  std::map<Task, SubArgs> args;
  std::map<Task, CLI::App*> subs;
  for (Task task : {Task::effective_hamiltonian, Task::evolve, Task::lambda_demo, Task::sambe_compare}) {
    CLI::App* sub = app.add_subcommand(task_name(task));
    SubArgs& a = args[task];
    sub->add_option("--config", a.config_path, "JSON config file");
    sub->add_option("--out", a.out_path, "output path override");
    sub->add_option("--order", a.order, "expansion order override");
    sub->add_option("--cutoff", a.cutoff, "harmonic cutoff override");
    sub->add_option("--sweep", a.sweep_dir, "run every *.json config in a directory");
    subs[task] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Task task = Task::effective_hamiltonian;
  for (const auto& [t, sub] : subs)
    if (sub->parsed()) task = t;
  const SubArgs& a = args[task];

  try {
    if (!a.sweep_dir.empty()) return run_sweep(task, a.sweep_dir);
    if (a.config_path.empty()) throw ConfigError("missing --config (or --sweep)");

    RunConfig config = load_config_file(a.config_path);
    if (config.task != task)
      throw ConfigError("config error at /task: expected " + task_name(task) + ", found " +
                        task_name(config.task));
    if (!a.out_path.empty()) config.output = a.out_path;
    if (a.order > 0) {
      if (task != Task::effective_hamiltonian)
        throw ConfigError("--order does not apply to task " + task_name(task));
      config.order = a.order;
    }
    if (a.cutoff >= 0) {
      if (task != Task::sambe_compare)
        throw ConfigError("--cutoff does not apply to task " + task_name(task));
      config.cutoff = a.cutoff;
    }
    run(config);
    return 0;
  } catch (const ResonanceError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const AccuracyError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("qflq");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qflq
