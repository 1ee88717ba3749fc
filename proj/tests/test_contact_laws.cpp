#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hemi/contact_laws.hpp"

using namespace hemi;

namespace {

const ContactLaw kModel{0.3, 2.0, 0.5};

// inf over v of q max(-v, 0) + lambda (xi - v) + eps (xi - v)^2 / 2 by dense sampling.
double normal_oracle(double xi, double lambda, double eps, double q) {
  double best = lambda * xi + 0.5 * eps * xi * xi;  // v = 0
  for (int k = -400000; k <= 400000; ++k) {
    const double v = xi + 1e-5 * k;
    const double d = xi - v;
    best = std::min(best, q * std::max(-v, 0.0) + lambda * d + 0.5 * eps * d * d);
  }
  return best;
}

// Same construction for h ||v|| restricted to the x axis.
double tangential_oracle(double u, double lambda, double eps, double h) {
  double best = lambda * u + 0.5 * eps * u * u;  // v = 0
  for (int k = -400000; k <= 400000; ++k) {
    const double v = u + 1e-5 * k;
    const double d = u - v;
    best = std::min(best, h * std::abs(v) + lambda * d + 0.5 * eps * d * d);
  }
  return best;
}

}  // namespace

TEST_CASE("normal potential and its subdifferential") {
  CHECK(j_nu(-1.0, kModel) == 0.0);
  CHECK(j_nu(0.0, kModel) == 0.0);
  CHECK(j_nu(2.0, kModel) == doctest::Approx(4.6));
  CHECK(p_response(2.0, kModel) == doctest::Approx(4.0));
  CHECK(p_response(-2.0, kModel) == 0.0);

  const auto open = d_j_nu(-0.1, kModel);
  CHECK(open.lo == 0.0);
  CHECK(open.hi == 0.0);
  const auto kink = d_j_nu(0.0, kModel);
  CHECK(kink.lo == 0.0);
  CHECK(kink.hi == doctest::Approx(0.3));
  CHECK(kink.contains(0.15));
  CHECK_FALSE(kink.contains(0.31));
  const auto pressed = d_j_nu(1.0, kModel);
  CHECK(pressed.lo == doctest::Approx(2.3));
  CHECK(pressed.hi == doctest::Approx(2.3));
}

TEST_CASE("subdifferential graph is nondecreasing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xi(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    double a = xi(rng), b = xi(rng);
    if (k % 10 == 0) a = 0.0;
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    CHECK(d_j_nu(a, kModel).hi <= d_j_nu(b, kModel).lo);
    // growth bound |g| <= q_max + p_const |xi|
    CHECK(d_j_nu(b, kModel).hi <= kModel.q_max + kModel.p_const * std::abs(b) + 1e-15);
  }
}

TEST_CASE("friction potential") {
  CHECK(j_tau(Eigen::Vector2d(0.3, -0.4)) == doctest::Approx(0.5));
  const auto zero = d_j_tau(Eigen::Vector2d::Zero());
  CHECK(zero.radius == 1.0);
  CHECK(zero.contains(Eigen::Vector2d(0.6, 0.8)));
  const auto slip = d_j_tau(Eigen::Vector2d(-2.0, 0.0));
  CHECK(slip.radius == 0.0);
  CHECK(slip.center.x() == doctest::Approx(-1.0));
  CHECK(slip.support(Eigen::Vector2d(3.0, 0.0)) == doctest::Approx(-3.0));
  CHECK(zero.support(Eigen::Vector2d(3.0, 4.0)) == doctest::Approx(5.0));
}

TEST_CASE("boundary functional") {
  const std::vector<double> one{1.0};
  const std::vector<TracePoint> pressed{{2.0, 0.0}};
  CHECK(j_boundary(pressed, one, kModel) == doctest::Approx(4.6));

  const std::vector<double> half{0.5};
  const std::vector<TracePoint> open{{-1.0, 0.3}};
  CHECK(j_boundary(open, half, ContactLaw{0.3, 2.0, 0.1}) == doctest::Approx(0.015));

  const std::vector<double> two{0.5, 0.5};
  CHECK_THROWS_AS(j_boundary(open, two, kModel), InputError);
}

TEST_CASE("law validation") {
  CHECK_NOTHROW(kModel.validate());
  CHECK_NOTHROW((ContactLaw{0.0, 0.0, 0.0}.validate()));
  CHECK_THROWS_AS((ContactLaw{-0.1, 0.0, 0.0}.validate()), InputError);
  CHECK_THROWS_AS((ContactLaw{0.1, NAN, 0.0}.validate()), InputError);
  CHECK_THROWS_AS((ContactLaw{0.1, 0.0, INFINITY}.validate()), InputError);
}

TEST_CASE("augmented normal term, threshold branch") {
  const auto r = l_nu(0.2, -0.5, 1.0, 0.1);
  CHECK(r.branch == NormalAugmented::Branch::Threshold);
  CHECK(r.value == doctest::Approx(-0.1));
  CHECK(r.d_xi == doctest::Approx(-0.1));
  CHECK(r.d_lambda == doctest::Approx(0.4));
  CHECK(r.value == doctest::Approx(normal_oracle(0.2, -0.5, 1.0, 0.1)).epsilon(1e-8));
}

TEST_CASE("augmented normal term, contact branch") {
  const auto r = l_nu(-0.1, 0.05, 1.0, 0.1);
  CHECK(r.branch == NormalAugmented::Branch::Contact);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.d_xi == doctest::Approx(-0.05));
  CHECK(r.d_lambda == doctest::Approx(-0.1));
}

TEST_CASE("augmented normal term, open branch") {
  const auto r = l_nu(0.0, 0.2, 1.0, 0.1);
  CHECK(r.branch == NormalAugmented::Branch::Open);
  CHECK(r.value == doctest::Approx(-0.02));
  CHECK(r.d_xi == 0.0);
  CHECK(r.d_lambda == doctest::Approx(-0.2));
  CHECK_THROWS_AS(l_nu(0.0, 0.0, 0.0, 0.1), InputError);
}

TEST_CASE("augmented normal term matches its inf-convolution") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double xi = uni(rng), lambda = uni(rng), eps = 0.5 + std::abs(uni(rng)), q = 0.3;
    CHECK(l_nu(xi, lambda, eps, q).value == doctest::Approx(normal_oracle(xi, lambda, eps, q)).epsilon(1e-7));
  }
}

TEST_CASE("augmented friction term, stick branch") {
  const auto r = l_tau({0.2, 0.0}, {0.1, 0.0}, 1.0, 0.5);
  CHECK(r.stick);
  CHECK(r.value == doctest::Approx(0.04));
  CHECK(r.d_u.x() == doctest::Approx(0.3));
  CHECK(r.d_lambda.x() == doctest::Approx(0.2));

  const auto origin = l_tau(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), 1.0, 0.5);
  CHECK(origin.value == 0.0);
  CHECK(origin.d_u.norm() == 0.0);
  CHECK(origin.d_lambda.norm() == 0.0);
}

TEST_CASE("augmented friction term, slip branch") {
  const auto r = l_tau({0.1, 0.0}, {0.7, 0.0}, 1.0, 0.5);
  CHECK_FALSE(r.stick);
  CHECK(r.value == doctest::Approx(0.03));
  CHECK(r.d_u.x() == doctest::Approx(0.5));
  CHECK(r.d_u.y() == 0.0);
  CHECK(r.d_lambda.x() == doctest::Approx(-0.2));
  CHECK(r.d_lambda.y() == 0.0);
  CHECK(r.value == doctest::Approx(tangential_oracle(0.1, 0.7, 1.0, 0.5)).epsilon(1e-8));
  CHECK_THROWS_AS(l_tau(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), -1.0, 0.5), InputError);
}

TEST_CASE("augmented friction term matches its inf-convolution") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double u = uni(rng), lambda = uni(rng), eps = 0.5 + std::abs(uni(rng));
    const double expected = tangential_oracle(u, lambda, eps, 0.5);
    CHECK(l_tau({u, 0.0}, {lambda, 0.0}, eps, 0.5).value == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("Hessian blocks are consistent with gradients") {
  const double step = 1e-7;
  const auto base = l_tau({0.3, -0.2}, {0.4, 0.5}, 2.0, 0.5);
  REQUIRE_FALSE(base.stick);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector2d e = Eigen::Vector2d::Unit(k) * step;
    const auto moved = l_tau(Eigen::Vector2d(0.3, -0.2) + e, {0.4, 0.5}, 2.0, 0.5);
    const Eigen::Vector2d fd = (moved.d_u - base.d_u) / step;
    CHECK((fd - base.h_uu.col(k)).norm() < 1e-5);
  }
  const auto n1 = l_nu(0.1, -0.5, 1.0, 0.3);
  const auto n2 = l_nu(0.1 + step, -0.5, 1.0, 0.3);
  CHECK((n2.d_xi - n1.d_xi) / step == doctest::Approx(n1.h_xi_xi).epsilon(1e-5));
}
