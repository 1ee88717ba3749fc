#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hemi/harness.hpp"

namespace fs = std::filesystem;
using namespace hemi;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kNotConverged = 2;
constexpr int kInvalidConfig = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

// Accepts "32", "1/32" or "0.03125".
int parse_denominator(const std::string& text) {
  try {
    if (text.rfind("1/", 0) == 0) {
      std::size_t used = 0;
      const int n = std::stoi(text.substr(2), &used);
      if (used + 2 != text.size()) throw std::invalid_argument(text);
      return n;
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    if (v < 1.0) return mesh_denominator(v);
    if (v != std::floor(v)) throw std::invalid_argument(text);
    return static_cast<int>(v);
  } catch (const InputError&) {
    throw ConfigError("invalid mesh size '" + text + "'");
  } catch (const std::exception&) {
    throw ConfigError("invalid mesh size '" + text + "'");
  }
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  for (const auto& name : split_list(text)) {
    try {
      out.push_back(parse_method(name));
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.empty()) throw ConfigError("empty method list");
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

struct Options {
  std::string config_path;
  int example = 0;
  std::string method;
  std::string h_denominator;
  std::string out = "out";
  std::string methods = "opt,al,pdas";
  std::string h_list = "2,4,8,16,32";
  std::string reference = "128";
  std::string solution;
};

ProblemConfig resolve_config(const Options& o, int default_example) {
  ProblemConfig config = !o.config_path.empty() ? load_config(o.config_path)
                         : o.example > 0        ? example_config(o.example)
                                                : example_config(default_example);
  if (!o.method.empty()) {
    try {
      config.method = parse_method(o.method);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!o.h_denominator.empty()) config.h_denominator = parse_denominator(o.h_denominator);
  config.seed = seed_from_env(config.seed);
  config.validate();
  return config;
}

int cmd_solve(const Options& o) {
  const ProblemConfig config = resolve_config(o, 1);
  const ExampleRun run = run_example(config);
  write_example_artifacts(run, o.out);
  const auto& r = run.result;
  double max_u_nu = -INFINITY;
  for (const auto& c : r.contact) max_u_nu = std::max(max_u_nu, c.u_nu);
  std::cout << "method " << to_string(r.method) << "  h = 1/" << r.denominator << "  status " << to_string(r.status)
            << "  iterations " << r.iterations << "\n"
            << "||u||_V " << fmt("%.10e", v_norm(run.system->M_V, r.u)) << "  max u_nu "
            << fmt("%.4e", r.contact.empty() ? 0.0 : max_u_nu) << "  time " << fmt("%.3f", r.seconds) << " s\n"
            << "wrote " << (fs::path(o.out) / "displacements.csv").string() << ", contact.csv, deformed.svg\n";
  return r.converged() ? kOk : kNotConverged;
}

int cmd_converge(const Options& o) {
  const ProblemConfig config = resolve_config(o, 5);
  std::vector<int> hs;
  for (const auto& item : split_list(o.h_list)) hs.push_back(parse_denominator(item));
  const int reference = parse_denominator(o.reference);
  const ConvergenceStudy study = convergence_study(config, parse_methods(o.methods), hs, reference);
  const ErrorReport& report = study.report;
  write_text(fs::path(o.out) / "errors.csv", errors_csv(report));
  write_text(fs::path(o.out) / "errors.svg", error_plot_svg(report));
  for (const auto& [method, why] : report.failures) std::cout << to_string(method) << ": " << why << "\n";
  for (Method s : report.methods) {
    for (Method r : report.methods) {
      const auto slope = report.slope(s, r);
      if (!slope) continue;
      std::cout << to_string(s) << " vs " << to_string(r) << ": slope " << fmt("%.3f", *slope) << "\n";
    }
  }
  std::cout << "wrote " << (fs::path(o.out) / "errors.csv").string() << ", errors.svg\n";
  return report.failures.empty() ? kOk : kNotConverged;
}

int cmd_compare(const Options& o) {
  const ProblemConfig config = resolve_config(o, 5);
  std::shared_ptr<const DiscreteSystem> system;
  const MethodComparison cmp = compare_methods(config, config.h_denominator, &system);
  for (const auto& [method, result] : cmp.results) {
    std::cout << to_string(method) << ": " << fmt("%.4f", result.seconds) << " s, " << result.iterations
              << " iterations\n";
  }
  for (const auto& [method, why] : cmp.failures) std::cout << to_string(method) << ": failed (" << why << ")\n";
  const std::string table = comparison_csv(*system, cmp);
  std::cout << table;
  if (!o.out.empty()) write_text(fs::path(o.out) / "compare.csv", table);
  return cmp.failures.empty() ? kOk : kNotConverged;
}

int cmd_verify(const Options& o) {
  ProblemConfig config = load_config(o.config_path);
  config.seed = seed_from_env(config.seed);
  const DisplacementField field = read_displacement_csv(o.solution);
  const auto system = build_system(config, field.denominator);
  const Eigen::VectorXd u = restrict_to_dofs(system->dofs(), field.nodal);
  const HviReport report = verify_hvi(*system, config.law, u, 200, config.seed);
  std::cout << "directions " << report.directions << "  min " << fmt("%.6e", report.min_value) << "  tolerance "
            << fmt("%.6e", report.tolerance) << "  " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return report.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static frictional contact on a nonmonotone foundation"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Solve one problem and write CSV/SVG artifacts");
  auto* cfg = solve->add_option("--config", o.config_path, "Config file")->check(CLI::ExistingFile);
  solve->add_option("--example", o.example, "Built-in example data set")->check(CLI::IsMember({1, 2, 3, 4}))->excludes(cfg);
  solve->add_option("--method", o.method, "opt, al or pdas");
  solve->add_option("--h-denominator", o.h_denominator, "Mesh size as 1/h");
  solve->add_option("--out", o.out, "Output directory");

  auto* converge = app.add_subcommand("converge", "Convergence study with cross-method references");
  converge->add_option("--config", o.config_path, "Config file (default: model problem)")->check(CLI::ExistingFile);
  converge->add_option("--methods", o.methods, "Comma separated methods");
  converge->add_option("--h-list", o.h_list, "Comma separated mesh sizes (N, 1/N or h)");
  converge->add_option("--reference", o.reference, "Reference mesh size");
  converge->add_option("--out", o.out, "Output directory");

  auto* compare = app.add_subcommand("compare", "Run all methods and compare");
  compare->add_option("--config", o.config_path, "Config file (default: model problem)")->check(CLI::ExistingFile);
  compare->add_option("--h-denominator", o.h_denominator, "Mesh size as 1/h");
  compare->add_option("--out", o.out, "Output directory");

  auto* verify = app.add_subcommand("verify", "Check the hemivariational inequality at a solution");
  verify->add_option("--solution", o.solution, "displacements.csv")->required()->check(CLI::ExistingFile);
  verify->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*converge) return cmd_converge(o);
    if (*compare) return cmd_compare(o);
    if (*verify) return cmd_verify(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
