#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hemi/harness.hpp"

using namespace hemi;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hemi_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

ProblemConfig small(int example, Method method, int n = 4) {
  ProblemConfig c = example_config(example);
  c.method = method;
  c.h_denominator = n;
  return c;
}

}  // namespace

TEST_CASE("numbers are printed round-trip exact") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("zero load writes an all-zero displacement table") {
  ProblemConfig config = small(1, Method::Opt);
  config.load = BodyLoad{};
  const ExampleRun run = run_example(config);
  CHECK(run.result.converged());
  const std::string csv = displacement_csv(*run.system, run.result.u);
  CHECK(csv.rfind("node_id,x,y,ux,uy\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 25);
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) CHECK(line.substr(line.size() - 4) == ",0,0");
}

TEST_CASE("artifacts are written and deterministic") {
  const ExampleRun run = run_example(small(5, Method::PDAS, 8));
  REQUIRE(run.result.converged());
  const fs::path a = scratch_dir("artifacts_a"), b = scratch_dir("artifacts_b");
  write_example_artifacts(run, a);
  write_example_artifacts(run_example(small(5, Method::PDAS, 8)), b);
  for (const char* name : {"displacements.csv", "contact.csv", "deformed.svg"}) {
    CHECK(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK_FALSE(fs::exists(a / "FAILED"));
  const std::string contact = slurp(a / "contact.csv");
  CHECK(contact.rfind("node_id,x,u_nu,u_taux,sigma_nu,sigma_taux,normal_state,tangential_state\n", 0) == 0);
  CHECK(count_lines(contact) == 1 + 8);
  const std::string svg = slurp(a / "deformed.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("non-converged runs leave a failure marker") {
  ProblemConfig config = small(1, Method::PDAS, 16);
  config.pdas.max_outer = 1;
  const ExampleRun run = run_example(config);
  REQUIRE_FALSE(run.result.converged());
  const fs::path dir = scratch_dir("failed");
  write_example_artifacts(run, dir);
  CHECK(fs::exists(dir / "FAILED"));
  CHECK(fs::exists(dir / "displacements.csv"));
}

TEST_CASE("displacement table reads back exactly") {
  const ExampleRun run = run_example(small(2, Method::AL, 8));
  const fs::path dir = scratch_dir("roundtrip");
  write_example_artifacts(run, dir);
  const DisplacementField field = read_displacement_csv(dir / "displacements.csv");
  CHECK(field.denominator == 8);
  CHECK(restrict_to_dofs(run.system->dofs(), field.nodal) == run.result.u);

  write_text(dir / "bad_header.csv", "id,x,y,ux,uy\n");
  CHECK_THROWS_AS(read_displacement_csv(dir / "bad_header.csv"), InputError);
  write_text(dir / "short.csv", "node_id,x,y,ux,uy\n0,0,0,0,0\n1,1,0,0,0\n");
  CHECK_THROWS_AS(read_displacement_csv(dir / "short.csv"), InputError);
  std::string moved = slurp(dir / "displacements.csv");
  moved.replace(moved.find("\n1,") + 3, 5, "0.2");  // node 1 sits at x = 0.125
  write_text(dir / "moved.csv", moved);
  CHECK_THROWS_AS(read_displacement_csv(dir / "moved.csv"), InputError);
  CHECK_THROWS_AS(read_displacement_csv(dir / "missing.csv"), InputError);
}

TEST_CASE("inequality check at rest and off the solution") {
  ProblemConfig config = small(5, Method::AL, 8);
  const ExampleRun run = run_example(config);
  REQUIRE(run.result.converged());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(run.result.u.size());
  CHECK(hvi_value(*run.system, config.law, run.result.u, zero) == 0.0);

  const HviReport good = verify_hvi(*run.system, config.law, run.result.u);
  CHECK(good.passed());
  CHECK(good.directions == 200 + 2 * 2 * 8);
  CHECK(good.tolerance == doctest::Approx(1e-4 * run.system->F.norm()));

  const HviReport bad = verify_hvi(*run.system, config.law, run.result.u + Eigen::VectorXd::Constant(zero.size(), 0.1));
  CHECK_FALSE(bad.passed());
  CHECK(bad.min_value < -1e-3);
}

TEST_CASE("inequality check is deterministic in the seed") {
  const ExampleRun run = run_example(small(1, Method::PDAS, 8));
  const HviReport a = verify_hvi(*run.system, run.config.law, run.result.u, 50, 3);
  const HviReport b = verify_hvi(*run.system, run.config.law, run.result.u, 50, 3);
  CHECK(a.min_value == b.min_value);
  CHECK(a.worst_direction == b.worst_direction);
}

TEST_CASE("small convergence study") {
  const ConvergenceStudy study =
      convergence_study(example_config(5), {Method::AL, Method::PDAS}, {8, 2, 4}, 16);
  const ErrorReport& report = study.report;
  CHECK(report.failures.empty());
  CHECK(report.h_denominators == std::vector<int>{2, 4, 8});
  CHECK(report.entries.size() == 2u * 2u * 3u);
  for (const auto& e : report.entries) CHECK(e.v_error > 0.0);
  for (Method s : report.methods) {
    for (Method r : report.methods) {
      const auto curve = report.curve(s, r);
      REQUIRE(curve.size() == 3);
      CHECK(curve[2] < curve[0]);
      CHECK(report.slope(s, r).has_value());
    }
  }
  const std::string csv = errors_csv(report);
  CHECK(csv.rfind("method_solution,method_reference,h_denominator,v_error\nal,al,2,", 0) == 0);
  CHECK(count_lines(csv) == 1 + 12);
  const std::string svg = error_plot_svg(report);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("study rejects meshes that do not nest") {
  const ProblemConfig c = example_config(5);
  CHECK_THROWS_AS(convergence_study(c, {Method::AL}, {3, 4}, 16), ConfigError);
  CHECK_THROWS_AS(convergence_study(c, {Method::AL}, {2, 16}, 16), ConfigError);
  CHECK_THROWS_AS(convergence_study(c, {Method::AL}, {2, 6}, 24), ConfigError);
  CHECK_THROWS_AS(convergence_study(c, {}, {2}, 16), ConfigError);
}

TEST_CASE("slope of a synthetic first-order curve") {
  ErrorReport report;
  report.methods = {Method::Opt};
  report.h_denominators = {2, 4, 8, 16};
  for (int n : report.h_denominators) report.entries.push_back({Method::Opt, Method::Opt, n, 3.0 / n});
  CHECK(*report.slope(Method::Opt, Method::Opt) == doctest::Approx(1.0));
  CHECK(*report.slope(Method::Opt, Method::Opt, 4) == doctest::Approx(1.0));
  CHECK_FALSE(report.slope(Method::Opt, Method::Opt, 5).has_value());
  CHECK_FALSE(report.slope(Method::Opt, Method::AL).has_value());
}

TEST_CASE("method comparison") {
  ProblemConfig rest = small(1, Method::PDAS);
  rest.load = BodyLoad{};
  std::shared_ptr<const DiscreteSystem> system;
  const MethodComparison zero = compare_methods(rest, 4, &system);
  CHECK(zero.failures.empty());
  CHECK(zero.relative_difference(*system, Method::Opt, Method::PDAS) == 0.0);

  const MethodComparison ex4 = compare_methods(example_config(4), 8, &system);
  REQUIRE(ex4.failures.empty());
  CHECK(ex4.relative_difference(*system, Method::AL, Method::PDAS) < 1e-8);
  CHECK(ex4.relative_difference(*system, Method::Opt, Method::PDAS) < 1e-4);
  const std::string csv = comparison_csv(*system, ex4);
  CHECK(count_lines(csv) == 4);
  CHECK(csv.find("al,opt,8,") != std::string::npos);
}

TEST_CASE("seed override from the environment") {
  const char* outer = std::getenv("HEMI_SEED");
  const std::string saved = outer ? outer : "";
  ::unsetenv("HEMI_SEED");
  CHECK(seed_from_env(7) == 7u);
  ::setenv("HEMI_SEED", "123", 1);
  CHECK(seed_from_env(7) == 123u);
  ::setenv("HEMI_SEED", "12x", 1);
  CHECK_THROWS_AS(seed_from_env(7), ConfigError);
  ::setenv("HEMI_SEED", "-4", 1);
  CHECK_THROWS_AS(seed_from_env(7), ConfigError);
  if (outer) {
    ::setenv("HEMI_SEED", saved.c_str(), 1);
  } else {
    ::unsetenv("HEMI_SEED");
  }
}
