#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace hemi {

/// Scalar objective over R^n for derivative-free minimization.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual double value(const Eigen::VectorXd& x) const = 0;

  /**
   * The restriction t -> f(x + t d) - f(x). Implementations with structure
   * (e.g. a quadratic part) can override this to evaluate increments without
   * cancellation; the default evaluates `value` twice.
   */
  virtual std::function<double(double)> along(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const;
};

/// Wraps a plain callable.
class FunctionObjective final : public Objective {
 public:
  explicit FunctionObjective(std::function<double(const Eigen::VectorXd&)> f) : f_(std::move(f)) {}
  double value(const Eigen::VectorXd& x) const override { return f_(x); }

 private:
  std::function<double(const Eigen::VectorXd&)> f_;
};

struct LineSearchConfig {
  double initial_step = 0.1;
  double growth = 2.0;
  int max_expansions = 80;
  double tolerance = 1e-10;  // final golden-section bracket width
};

struct PowellConfig {
  double f_tol = 1e-10;
  double x_tol = 1e-9;
  int max_iters = 200;  // cycles through the direction set
  int reset_period = 0;  // 0 means every 2 * dim cycles
  LineSearchConfig line_search;
};

struct PowellResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int cycles = 0;
  long evaluations = 0;
  bool converged = false;
  std::vector<double> history;  // objective after each cycle
};

/// One-dimensional minimizer of a convex function on R: bracketing then golden section.
struct LineMinimum {
  double t = 0.0;
  double decrease = 0.0;  // phi(0) - phi(t) >= 0
  long evaluations = 0;
};

LineMinimum line_minimize(const std::function<double(double)>& phi, double initial_step,
                          const LineSearchConfig& config);

/**
 * Powell's conjugate direction method. Each cycle line-minimizes along every
 * direction of the set, then replaces the direction of largest decrease by
 * the net displacement of the cycle when Powell's test accepts it.
 */
PowellResult powell_minimize(const Objective& objective, Eigen::VectorXd x0, const PowellConfig& config);

}  // namespace hemi
