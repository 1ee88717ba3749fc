#include <doctest.h>

#include <cmath>

#include "hemi/powell.hpp"
#include "properties.hpp"

using namespace hemi;

TEST_CASE("line search brackets a parabola") {
  const auto phi = [](double t) { return (t - 3.0) * (t - 3.0) - 9.0; };
  const LineMinimum m = line_minimize(phi, 0.1, LineSearchConfig{});
  CHECK(m.t == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(m.decrease == doctest::Approx(9.0));
}

TEST_CASE("line search searches backwards and never goes uphill") {
  const auto back = [](double t) { return (t + 2.0) * (t + 2.0) - 4.0; };
  CHECK(line_minimize(back, 0.1, LineSearchConfig{}).t == doctest::Approx(-2.0).epsilon(1e-8));
  const auto flat_min = [](double t) { return t * t; };
  const LineMinimum m = line_minimize(flat_min, 0.1, LineSearchConfig{});
  CHECK(m.t == 0.0);
  CHECK(m.decrease == 0.0);
}

TEST_CASE("smooth bowl") {
  const FunctionObjective bowl([](const Eigen::VectorXd& x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 10.0 * (x[1] - 2.0) * (x[1] - 2.0) + (x[0] - 1.0) * (x[1] - 2.0);
  });
  const PowellResult r = powell_minimize(bowl, Eigen::VectorXd::Zero(2), PowellConfig{});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.f < 1e-12);
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1]);
}

TEST_CASE("kink at the minimizer") {
  const FunctionObjective kinked([](const Eigen::VectorXd& x) { return std::abs(x[0] - 1.0) + 0.5 * x[0] * x[0]; });
  const PowellResult r = powell_minimize(kinked, Eigen::VectorXd::Zero(1), PowellConfig{});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("separable kinks with coupling") {
  // 0.5 x'Ax - b'x + |x0| + |x1|, minimizer (0, 0.5) with x0 held on its kink.
  const FunctionObjective f([](const Eigen::VectorXd& x) {
    const double quad = x[0] * x[0] + x[1] * x[1] + 0.5 * x[0] * x[1];
    return quad - 0.5 * x[0] - 2.0 * x[1] + std::abs(x[0]) + std::abs(x[1]);
  });
  const PowellResult r = powell_minimize(f, Eigen::VectorXd::Constant(2, 1.0), PowellConfig{});
  CHECK(r.converged);
  CHECK(std::abs(r.x[0]) < 1e-7);
  CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("iteration budget is reported") {
  PowellConfig config;
  config.max_iters = 1;
  const FunctionObjective rosenbrock([](const Eigen::VectorXd& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  });
  const PowellResult r = powell_minimize(rosenbrock, Eigen::VectorXd::Constant(2, -1.0), config);
  CHECK_FALSE(r.converged);
  CHECK(r.cycles == 1);
  config.max_iters = 0;
  CHECK_THROWS_AS(powell_minimize(rosenbrock, Eigen::VectorXd::Zero(2), config), std::invalid_argument);
}

TEST_CASE("empty problem") {
  const FunctionObjective nothing([](const Eigen::VectorXd&) { return 4.0; });
  const PowellResult r = powell_minimize(nothing, Eigen::VectorXd(), PowellConfig{});
  CHECK(r.converged);
  CHECK(r.f == 4.0);
}

TEST_CASE("quadratic energy matches the direct solve") {
  for (int n : {2, 4, 8}) CHECK(props::powell_quadratic_gap(n) <= 1e-6);
}
