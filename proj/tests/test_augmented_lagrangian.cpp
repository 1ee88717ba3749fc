#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "hemi/augmented_lagrangian.hpp"
#include "hemi/direct_opt.hpp"
#include "hemi/harness.hpp"
#include "hemi/newton.hpp"
#include "hemi/problem.hpp"

using namespace hemi;

TEST_CASE("residual vanishes at rest") {
  ProblemConfig config = example_config(1);
  config.load = BodyLoad{};
  const auto system = build_system(config, 4);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(system->dofs().num_dofs());
  const Multipliers lambda = Multipliers::Zero(2 * system->num_contact_nodes());
  CHECK(al_residual(*system, config.law, u, lambda, 1.0, 1.0).norm() == 0.0);
}

TEST_CASE("multiplier block on the open branch") {
  ProblemConfig config = example_config(1);
  config.law = ContactLaw{0.1, 0.0, 0.0};
  const auto system = build_system(config, 4);
  const int n = system->dofs().num_dofs();
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Multipliers lambda = Multipliers::Zero(2 * system->num_contact_nodes());
  lambda[2 * 1] = 0.2;
  const Eigen::VectorXd r = al_residual(*system, config.law, u, lambda, 1.0, 1.0);
  const double w = system->weights()[1];
  CHECK(r[n + 2] == doctest::Approx(w * -0.2));
  CHECK(r[n + 3] == 0.0);
  CHECK_THROWS_AS(al_residual(*system, config.law, u, Multipliers::Zero(1), 1.0, 1.0), InputError);
}

TEST_CASE("residual is the gradient of the merit") {
  const ProblemConfig config = example_config(5);
  const auto system = build_system(config, 4);
  const int n = system->dofs().num_dofs();
  const int m = 2 * system->num_contact_nodes();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 0.2);
  constexpr double step = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd u(n);
    Multipliers lambda(m);
    for (auto& x : u) x = normal(rng);
    for (auto& x : lambda) x = normal(rng);
    const double eps = 0.5 + trial;
    const Eigen::VectorXd r = al_residual(*system, config.law, u, lambda, eps, eps);
    for (int k = 0; k < n + m; ++k) {
      Eigen::VectorXd up = u, um = u;
      Multipliers lp = lambda, lm = lambda;
      if (k < n) {
        up[k] += step;
        um[k] -= step;
      } else {
        lp[k - n] += step;
        lm[k - n] -= step;
      }
      const double fd = (al_merit(*system, config.law, up, lp, eps, eps) -
                         al_merit(*system, config.law, um, lm, eps, eps)) /
                        (2 * step);
      CHECK(std::abs(fd - r[k]) <= 1e-5 * std::max(1.0, std::abs(r[k])));
    }
  }
}

TEST_CASE("reduced Jacobian matches differences of the reduced residual") {
  const ProblemConfig config = example_config(5);
  const ReducedSystem reduced(build_system(config, 4));
  const int m = reduced.size();
  Eigen::VectorXd z(2 * m);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 0.3);
  for (auto& x : z) x = normal(rng);
  const Eigen::MatrixXd J = al_reduced_jacobian(reduced, config.law, z, 1.0, 1.0);
  constexpr double step = 1e-7;
  for (int k = 0; k < 2 * m; ++k) {
    Eigen::VectorXd zp = z;
    zp[k] += step;
    const Eigen::VectorXd fd = (al_reduced_residual(reduced, config.law, zp, 1.0, 1.0) -
                                al_reduced_residual(reduced, config.law, z, 1.0, 1.0)) /
                               step;
    CHECK((fd - J.col(k)).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("semismooth Newton on a kinked scalar equation") {
  const ResidualFn r = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] + std::max(0.0, x[0]) - 1.0);
  };
  const JacobianFn j = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Constant(1, 1, x[0] > 0.0 ? 2.0 : 1.0);
  };
  const NewtonResult out = semismooth_newton(r, j, Eigen::VectorXd::Constant(1, -3.0), NewtonConfig{});
  CHECK(out.converged);
  CHECK(out.x[0] == doctest::Approx(0.5));
}

TEST_CASE("semismooth Newton solves a linear system in one step") {
  Eigen::Matrix2d A;
  A << 4, 1, 1, 3;
  const Eigen::Vector2d b(1, 2);
  const NewtonResult out = semismooth_newton([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x - b; },
                                             [&](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; },
                                             Eigen::VectorXd::Zero(2), NewtonConfig{});
  CHECK(out.converged);
  CHECK(out.iterations == 1);
  CHECK((A * out.x - b).norm() < 1e-12);
}

TEST_CASE("semismooth Newton reports a budget overrun") {
  NewtonConfig config;
  config.max_iters = 1;
  const NewtonResult out = semismooth_newton(
      [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, std::exp(x[0]) - 2.0); },
      [](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Constant(1, 1, std::exp(x[0])); },
      Eigen::VectorXd::Constant(1, 3.0), config);
  CHECK_FALSE(out.converged);
}

TEST_CASE("linear problem: one Newton step and zero multipliers") {
  ProblemConfig config = example_config(5);
  config.law = ContactLaw{};
  const ReducedSystem reduced(build_system(config, 4));
  const SolveResult r = solve_al(reduced, config.law, config.al);
  CHECK(r.converged());
  CHECK(r.multipliers.cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd exact = reduced.recover_interior(reduced.S().ldlt().solve(reduced.g()));
  CHECK(v_norm(reduced.system().M_V, r.u - exact) < 1e-10);
}

TEST_CASE("zero load gives zero displacement") {
  ProblemConfig config = example_config(1);
  config.load = BodyLoad{};
  const ReducedSystem reduced(build_system(config, 4));
  const SolveResult r = solve_al(reduced, config.law, config.al);
  CHECK(r.converged());
  CHECK(r.u.norm() == 0.0);
}

TEST_CASE("augmented Lagrangian agrees with direct optimization") {
  const ProblemConfig config = example_config(5);
  const ReducedSystem reduced(build_system(config, 8));
  const SolveResult al = solve_al(reduced, config.law, config.al);
  const SolveResult opt = solve_direct(reduced, config.law, config.opt);
  REQUIRE(al.converged());
  REQUIRE(opt.converged());
  const auto& M = reduced.system().M_V;
  CHECK(v_norm(M, al.u - opt.u) <= 1e-4 * v_norm(M, al.u));
}

TEST_CASE("foundation force grows with penetration") {
  const ProblemConfig config = example_config(1);
  const ReducedSystem reduced(build_system(config, 16));
  const SolveResult r = solve_al(reduced, config.law, config.al);
  REQUIRE(r.converged());
  std::vector<std::pair<double, double>> pressed;
  for (std::size_t i = 0; i < r.contact.size(); ++i) {
    if (r.contact[i].u_nu > 1e-8) pressed.emplace_back(r.contact[i].u_nu, r.multipliers[2 * i]);
  }
  REQUIRE(pressed.size() >= 3);
  std::sort(pressed.begin(), pressed.end());
  for (std::size_t k = 1; k < pressed.size(); ++k) CHECK(pressed[k].second > pressed[k - 1].second);
  // Multipliers estimate the pressure recovered from equilibrium.
  for (std::size_t i = 0; i < r.contact.size(); ++i) {
    CHECK(r.multipliers[2 * i] == doctest::Approx(r.contact[i].pressure()).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("friction multipliers respect the bound and complementarity") {
  const ProblemConfig config = example_config(5);
  const ReducedSystem reduced(build_system(config, 16));
  const SolveResult r = solve_al(reduced, config.law, config.al);
  REQUIRE(r.converged());
  const double h = config.law.h_tau;
  for (std::size_t i = 0; i < r.contact.size(); ++i) {
    const double force = r.multipliers[2 * i + 1];
    CHECK(std::abs(force) <= h + 1e-8);
    const double slip = r.contact[i].u_tau;
    if (std::abs(slip) > 1e-8) CHECK(force == doctest::Approx(std::copysign(h, slip)).epsilon(1e-8));
  }
}

TEST_CASE("invalid configuration") {
  ALConfig bad;
  bad.eps_init = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = ALConfig{};
  bad.damping = 1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}
