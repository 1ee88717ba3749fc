#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "hemi/assembly.hpp"
#include "hemi/augmented_lagrangian.hpp"
#include "hemi/contact_laws.hpp"
#include "hemi/pdas.hpp"
#include "hemi/powell.hpp"
#include "hemi/result.hpp"

namespace hemi {

/// Invalid or incomplete configuration (CLI exit code 3).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct ProblemConfig {
  MaterialLaw material;
  BodyLoad load;
  ContactLaw law;
  int h_denominator = 32;
  Method method = Method::PDAS;
  PowellConfig opt;
  ALConfig al;
  PdasConfig pdas;
  std::uint64_t seed = 20240917;

  /// Throws ConfigError when any field breaks its admissible range.
  void validate() const;
};

/**
 * Parses flat `key = value` text. Blank lines and `#` comments are skipped.
 * Recognized keys: f0_x, f0_y, fN_x, fN_y, h_tau, q_max, p_const, lambda,
 * eta, h_denominator, method, seed, and the method blocks
 * opt_{f_tol,x_tol,max_iters,reset_period,initial_step,growth,max_expansions,tolerance},
 * al_{eps_init,eps_factor,eps_min,eps_max,outer_max,outer_tol,newton_tol,newton_max,damping},
 * pdas_{eps_stab,max_outer,cycle_history}.
 * Missing keys keep their defaults.
 */
ProblemConfig parse_config(std::istream& in);
ProblemConfig load_config(const std::string& path);

/// Writes every key in a form parse_config reads back exactly.
std::string format_config(const ProblemConfig& config);

/// Figure data sets 1 to 4, and 5 for the convergence-study model problem.
ProblemConfig example_config(int id);

/// Mesh denominators of 1 / h accepted by the solvers.
bool valid_denominator(int n);

/// Assembles and condenses the system for `config` on mesh 1 / n.
std::shared_ptr<const DiscreteSystem> build_system(const ProblemConfig& config, int n);

/**
 * Runs `method` on `reduced`. `warm_start` is a full displacement on the same
 * mesh (already prolonged).
 */
SolveResult solve(const ProblemConfig& config, Method method, const ReducedSystem& reduced,
                  const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

/// Convenience overload: builds mesh 1 / n and solves from zero.
SolveResult solve(const ProblemConfig& config, Method method, int n);

}  // namespace hemi
