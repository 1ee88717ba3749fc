#include "hemi/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

namespace hemi {

ExampleRun run_example(const ProblemConfig& config) {
  config.validate();
  ExampleRun run;
  run.config = config;
  run.system = build_system(config, config.h_denominator);
  const ReducedSystem reduced(run.system);
  run.result = solve(config, config.method, reduced);
  return run;
}

std::optional<double> ErrorReport::error(Method solution, Method reference, int n) const {
  for (const auto& e : entries) {
    if (e.solution == solution && e.reference == reference && e.h_denominator == n) return e.v_error;
  }
  return std::nullopt;
}

std::vector<double> ErrorReport::curve(Method solution, Method reference) const {
  std::vector<double> out;
  for (int n : h_denominators) {
    const auto e = error(solution, reference, n);
    if (!e) return {};
    out.push_back(*e);
  }
  return out;
}

std::optional<double> ErrorReport::slope(Method solution, Method reference, int points) const {
  const std::vector<double> errors = curve(solution, reference);
  const int count = static_cast<int>(errors.size());
  if (points < 2 || count < points) return std::nullopt;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int k = count - points; k < count; ++k) {
    if (!(errors[k] > 0.0)) return std::nullopt;
    const double x = std::log(1.0 / h_denominators[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

ConvergenceStudy convergence_study(const ProblemConfig& config, const std::vector<Method>& methods,
                                   std::vector<int> h_denominators, int reference_denominator) {
  config.validate();
  if (methods.empty() || h_denominators.empty()) throw ConfigError("study needs methods and mesh sizes");
  std::sort(h_denominators.begin(), h_denominators.end());
  h_denominators.erase(std::unique(h_denominators.begin(), h_denominators.end()), h_denominators.end());
  for (int n : h_denominators) {
    if (!valid_denominator(n) || reference_denominator % n != 0 || n >= reference_denominator) {
      throw ConfigError("mesh sizes must be nested in and coarser than the reference mesh");
    }
    const int ratio = reference_denominator / n;
    if ((ratio & (ratio - 1)) != 0) throw ConfigError("mesh sizes must be dyadic refinements");
  }
  for (std::size_t k = 1; k < h_denominators.size(); ++k) {
    const int ratio = h_denominators[k] / h_denominators[k - 1];
    if (h_denominators[k] % h_denominators[k - 1] != 0 || (ratio & (ratio - 1)) != 0) {
      throw ConfigError("mesh sizes must be dyadic refinements of each other");
    }
  }

  ConvergenceStudy study;
  study.report.methods = methods;
  study.report.h_denominators = h_denominators;
  study.report.reference_denominator = reference_denominator;

  std::vector<std::shared_ptr<const ReducedSystem>> reduced;
  for (int n : h_denominators) reduced.push_back(std::make_shared<const ReducedSystem>(build_system(config, n)));
  const ReducedSystem fine(build_system(config, reference_denominator));

  for (Method method : methods) {
    std::vector<SolveResult> sequence;
    std::optional<Eigen::VectorXd> warm;
    bool failed = false;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      if (k > 0) {
        warm = prolong_to(reduced[k - 1]->system().disc, sequence.back().u, reduced[k]->system().disc);
      }
      SolveResult r = solve(config, method, *reduced[k], warm);
      if (!r.converged()) {
        study.report.failures[method] = "not converged at h = 1/" + std::to_string(h_denominators[k]) + " (" +
                                        std::string(to_string(r.status)) + ")";
        failed = true;
        break;
      }
      sequence.push_back(std::move(r));
    }
    if (failed) continue;
    const auto warm_ref = prolong_to(reduced.back()->system().disc, sequence.back().u, fine.system().disc);
    SolveResult ref = solve(config, method, fine, warm_ref);
    if (!ref.converged()) {
      study.report.failures[method] = "reference not converged (" + std::string(to_string(ref.status)) + ")";
      continue;
    }
    study.solutions[method] = std::move(sequence);
    study.references[method] = std::move(ref);
  }

  for (Method solution : methods) {
    if (!study.solutions.count(solution)) continue;
    for (Method reference : methods) {
      if (!study.references.count(reference)) continue;
      for (std::size_t k = 0; k < h_denominators.size(); ++k) {
        const double err = v_error(fine.system(), study.references[reference].u, reduced[k]->system().disc,
                                   study.solutions[solution][k].u);
        study.report.entries.push_back({solution, reference, h_denominators[k], err});
      }
    }
  }
  return study;
}

double hvi_value(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v, double kink_tol) {
  const auto& dofs = system.dofs();
  if (u.size() != dofs.num_dofs() || v.size() != dofs.num_dofs()) {
    throw InputError("displacement or direction has the wrong length");
  }
  double value = (system.K * u - system.F).dot(v);
  const auto trace_u = contact_trace(dofs, u);
  const auto trace_v = contact_trace(dofs, v);
  const auto& w = system.weights();
  for (std::size_t i = 0; i < trace_u.size(); ++i) {
    const double xi = std::abs(trace_u[i].u_nu) <= kink_tol ? 0.0 : trace_u[i].u_nu;
    const double ut = std::abs(trace_u[i].u_tau) <= kink_tol ? 0.0 : trace_u[i].u_tau;
    const double normal = d_j_nu(xi, law).support(trace_v[i].u_nu);
    const double tangential = d_j_tau(Eigen::Vector2d{ut, 0.0}).support(Eigen::Vector2d{trace_v[i].u_tau, 0.0});
    value += w[i] * (normal + law.h_tau * tangential);
  }
  return value;
}

HviReport verify_hvi(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                     int random_directions, std::uint64_t seed, double relative_tol, double kink_tol) {
  if (random_directions < 0 || !(relative_tol > 0.0)) throw InputError("invalid verification settings");
  const int n = system.dofs().num_dofs();
  HviReport report;
  report.f_norm = system.F.norm();
  report.tolerance = relative_tol * report.f_norm;
  report.min_value = std::numeric_limits<double>::infinity();

  const auto consider = [&](const Eigen::VectorXd& v) {
    const double value = hvi_value(system, law, u, v, kink_tol);
    if (value < report.min_value) {
      report.min_value = value;
      report.worst_direction = report.directions;
    }
    ++report.directions;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < random_directions; ++k) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    consider(v / v.norm());
  }
  for (int dof : system.dofs().contact_dofs) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      v[dof] = sign;
      consider(v);
    }
  }
  if (report.directions == 0) report.min_value = 0.0;
  return report;
}

double MethodComparison::relative_difference(const DiscreteSystem& system, Method a, Method b) const {
  const auto& ua = results.at(a).u;
  const auto& ub = results.at(b).u;
  const double diff = v_norm(system.M_V, ua - ub);
  const double scale = v_norm(system.M_V, ub);
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

MethodComparison compare_methods(const ProblemConfig& config, int n,
                                 std::shared_ptr<const DiscreteSystem>* system_out) {
  config.validate();
  auto system = build_system(config, n);
  const ReducedSystem reduced(system);
  MethodComparison out;
  for (Method m : {Method::Opt, Method::AL, Method::PDAS}) {
    SolveResult r = solve(config, m, reduced);
    if (r.converged()) {
      out.results[m] = std::move(r);
    } else {
      out.failures[m] = std::string(to_string(r.status));
    }
  }
  if (system_out) *system_out = system;
  return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* text = std::getenv("HEMI_SEED");
  if (!text || !*text) return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text, &end, 10);
  if (*end != '\0' || !std::isdigit(static_cast<unsigned char>(text[0]))) throw ConfigError(std::string("HEMI_SEED is not an unsigned integer: ") + text);
  return value;
}

}  // namespace hemi
