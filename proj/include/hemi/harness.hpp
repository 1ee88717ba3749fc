#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hemi/problem.hpp"
#include "hemi/result.hpp"
#include "hemi/schur.hpp"

namespace hemi {

struct ExampleRun {
  ProblemConfig config;
  std::shared_ptr<const DiscreteSystem> system;
  SolveResult result;
};

/// Solves `config` with its own method and mesh size.
ExampleRun run_example(const ProblemConfig& config);

/**
 * Writes displacements.csv, contact.csv and deformed.svg into `dir`. A
 * solution that did not converge also gets a FAILED marker file.
 */
void write_example_artifacts(const ExampleRun& run, const std::filesystem::path& dir);

struct ErrorEntry {
  Method solution = Method::Opt;
  Method reference = Method::Opt;
  int h_denominator = 0;
  double v_error = 0.0;
};

struct ErrorReport {
  std::vector<Method> methods;
  std::vector<int> h_denominators;  // ascending
  int reference_denominator = 0;
  std::vector<ErrorEntry> entries;  // sorted by (solution, reference, h_denominator)
  std::map<Method, std::string> failures;

  std::optional<double> error(Method solution, Method reference, int n) const;
  /// Errors of one curve, ordered like h_denominators; empty if the curve is missing.
  std::vector<double> curve(Method solution, Method reference) const;
  /// Least-squares slope of log(error) against log(h) over the finest `points` entries.
  std::optional<double> slope(Method solution, Method reference, int points = 3) const;
};

struct ConvergenceStudy {
  ErrorReport report;
  std::map<Method, std::vector<SolveResult>> solutions;  // per method, ordered like h_denominators
  std::map<Method, SolveResult> references;
};

/**
 * For every method solves the coarsest mesh from zero and each finer mesh
 * from the prolonged previous solution, then the reference mesh from the
 * finest one. Fills the error of every (solution, reference) pair.
 */
ConvergenceStudy convergence_study(const ProblemConfig& config, const std::vector<Method>& methods,
                                   std::vector<int> h_denominators, int reference_denominator);

/**
 * Value of <Ku - F, v> + sum_i w_i [j_nu^0(u_nu; v_nu) + h_tau j_tau^0(u_tau; v_tau)],
 * nonnegative for every v at a solution. Trace values with magnitude at most
 * `kink_tol` use the full subdifferential at zero.
 */
double hvi_value(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v, double kink_tol = 1e-7);

struct HviReport {
  double min_value = 0.0;
  double f_norm = 0.0;
  double tolerance = 0.0;  // relative_tol * f_norm
  int directions = 0;
  int worst_direction = -1;

  bool passed() const { return min_value >= -tolerance; }
};

/**
 * Evaluates hvi_value on `random_directions` unit random directions and on
 * both signs of every contact coordinate direction.
 */
HviReport verify_hvi(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                     int random_directions = 200, std::uint64_t seed = 1, double relative_tol = 1e-4,
                     double kink_tol = 1e-7);

struct MethodComparison {
  std::map<Method, SolveResult> results;
  std::map<Method, std::string> failures;

  /// ||u_a - u_b||_V / max(||u_b||_V, tiny); zero when both vanish.
  double relative_difference(const DiscreteSystem& system, Method a, Method b) const;
};

MethodComparison compare_methods(const ProblemConfig& config, int n,
                                 std::shared_ptr<const DiscreteSystem>* system_out = nullptr);

/// Seed from HEMI_SEED when set, otherwise `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

// ---- output ----------------------------------------------------------------

std::string format_number(double value);
std::string displacement_csv(const DiscreteSystem& system, const Eigen::VectorXd& u);
std::string contact_csv(const std::vector<ContactNodeResult>& contact);
std::string errors_csv(const ErrorReport& report);
std::string comparison_csv(const DiscreteSystem& system, const MethodComparison& comparison);
std::string deformed_svg(const DiscreteSystem& system, const SolveResult& result, double magnification = 0.0);
std::string error_plot_svg(const ErrorReport& report);

/**
 * Parses a displacement CSV back into free-DOF values on the mesh it
 * describes. Throws InputError on malformed rows or a non-square node count.
 */
struct DisplacementField {
  int denominator = 0;
  Eigen::VectorXd nodal;  // 2 * num_nodes
};
DisplacementField read_displacement_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hemi
