#include "conekit/kernels.hpp"
#include "conekit/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace conekit;

namespace {

Point vec(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

Point random_in(const DomainSpec& dom, std::mt19937_64& rng, double box) {
  std::uniform_real_distribution<double> U(-box, box);
  Point x(dom.dim());
  do {
    for (int i = 0; i < dom.dim(); ++i) x(i) = U(rng);
  } while (!dom.contains(x));
  return x;
}

}  // namespace

TEST_CASE("fundamental constants") {
  CHECK(fundamental_constant(1.0, 3) == doctest::Approx(1 / (4 * kPi)));
  CHECK(fundamental_constant(1.0, 2) == doctest::Approx(1 / (2 * kPi)));
  // n = 1, s = 1/2: (-d^2/dx^2)^{1/2} log kernel constant 1/pi.
  CHECK(fundamental_constant(0.5, 1) == doctest::Approx(1 / kPi));
  // Riesz constant Gamma(n/2 - s) / (4^s pi^{n/2} Gamma(s)) at n = 3, s = 1/2: 1/(2 pi^2).
  CHECK(fundamental_constant(0.5, 3) == doctest::Approx(1 / (2 * kPi * kPi)));
  // The cycle convention multiplies by (2 pi)^{2s}.
  CHECK(fundamental_constant(0.5, 3, Normalization::PaperCycles) ==
        doctest::Approx(2 * kPi / (2 * kPi * kPi)));
  CHECK_THROWS_AS(fundamental(2.0, 3, vec({0, 0, 0}), vec({1, 0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(fundamental(1.0, 3, vec({1, 0, 0}), vec({1, 0, 0})), std::domain_error);
}

TEST_CASE("half-space kernel equals the reflection formula") {
  const GreenKernel G(1.0, make_half_space_k(3, 1));
  const Point x = vec({0.5, 0.2, -0.1}), y = vec({1.5, -0.7, 0.4});
  const Point ystar = vec({-1.5, -0.7, 0.4});
  const double c = 1 / (4 * kPi);
  CHECK(G(x, y) == doctest::Approx(c / (x - y).norm() - c / (x - ystar).norm()).epsilon(1e-14));
}

TEST_CASE("ball kernel equals the classical formula") {
  const GreenKernel G(1.0, make_ball_k(3, 0, 2.0));
  const Point x = vec({0.5, 0.2, -0.1}), y = vec({-1.1, 0.7, 0.4});
  const double R = 2.0;
  const double c = 1 / (4 * kPi);
  const Point ystar = R * R * y / y.squaredNorm();
  const double expected = c / (x - y).norm() - c * (R / y.norm()) / (x - ystar).norm();
  CHECK(G(x, y) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("images kernels are symmetric and non-negative") {
  std::mt19937_64 rng(5);
  const DomainSpec doms[] = {make_half_space_k(3, 2), make_ball_k(3, 1, 1.0), make_ball_k(2, 2, 1.0),
                             make_exterior_ball_k(3, 1, 1.0), make_half_space_k(2, 1)};
  for (const DomainSpec& d : doms) {
    const GreenKernel G(1.0, d);
    for (int i = 0; i < 200; ++i) {
      const Point x = random_in(d, rng, 3.0), y = random_in(d, rng, 3.0);
      const double a = G(x, y), b = G(y, x);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
      CHECK(a >= -1e-14);
    }
  }
}

TEST_CASE("exterior kernel vanishes on the inner sphere") {
  const GreenKernel G(1.0, make_exterior_ball_k(3, 0, 1.0));
  const Point x = vec({2.0, 0.3, -0.4});
  for (const Point& w : direction_grid(3, 100)) CHECK(std::abs(G(x, w)) < 1e-12);
}

TEST_CASE("interval and half-line kernels") {
  const GreenKernel I(0.5, DomainSpec(Interval{0.0, 2.0}));
  const GreenKernel H(0.5, DomainSpec(HalfLine{0.0, 1}));
  const Point x = vec({0.4}), y = vec({1.3});
  CHECK(I(x, y) == doctest::Approx(I(y, x)));
  CHECK(H(x, y) == doctest::Approx(std::log((0.4 + 1.3 + 2 * std::sqrt(0.52)) / 0.9)));
  CHECK(std::abs(I(x, vec({2.0}))) < 1e-14);
  CHECK(std::abs(H(x, vec({0.0}))) < 1e-14);
  CHECK(I(x, y) < H(x, y));
  CHECK_THROWS_AS(GreenKernel(1.0, DomainSpec(Interval{0.0, 1.0})), std::invalid_argument);
  CHECK_THROWS_AS(I(x, vec({3.0})), std::domain_error);
}

TEST_CASE("kernel argument checks") {
  const GreenKernel G(1.0, make_ball(Point::Zero(2), 1.0));
  CHECK_THROWS_AS(G(vec({0.1, 0.1}), vec({0.1, 0.1})), std::domain_error);
  CHECK_THROWS_AS(G(vec({0.1, 0.1}), vec({2.0, 0.0})), std::domain_error);
  CHECK_THROWS_AS(GreenKernel(0.5, make_ball(Point::Zero(3), 1.0)), std::invalid_argument);
}

TEST_CASE("iterated kernel matches the Navier kernel of the 4-ball at the centre") {
  const auto base = std::make_shared<GreenKernel>(1.0, make_ball(Point::Zero(4), 1.0));
  const auto G2 = green_iterated(base, 2, 12, 3);
  const double c = 1 / (4 * kPi * kPi);
  for (double r : {0.3, 0.6}) {
    const Point y = vec({r, 0, 0, 0});
    const double exact = c * (-0.5 * std::log(r) + (r * r - 1) / 8);
    CHECK((*G2)(Point::Zero(4), y) == doctest::Approx(exact).epsilon(2e-3));
  }
  // The images formula with s = 2 exceeds the iterated kernel by (1 - r^2) / (32 pi^2).
  const GreenKernel images(2.0, make_ball(Point::Zero(4), 1.0));
  const Point y = vec({0.5, 0, 0, 0});
  CHECK(images(Point::Zero(4), y) == doctest::Approx(-std::log(0.5) / (8 * kPi * kPi)));
  CHECK((*G2)(Point::Zero(4), y) - images(Point::Zero(4), y) ==
        doctest::Approx(-(1 - 0.25) / (32 * kPi * kPi)).epsilon(5e-3));
}

TEST_CASE("iterated kernel is symmetric and needs a bounded domain") {
  const auto base = std::make_shared<GreenKernel>(1.0, make_ball(Point::Zero(2), 1.0));
  const auto G2 = green_iterated(base, 2, 12, 3);
  const Point x = vec({0.2, -0.3}), y = vec({-0.5, 0.1});
  CHECK((*G2)(x, y) == doctest::Approx((*G2)(y, x)).epsilon(1e-13));
  CHECK(green_iterated(base, 1).get() == base.get());
  const auto half = std::make_shared<GreenKernel>(1.0, make_half_space_k(2, 1));
  CHECK_THROWS_AS(green_iterated(half, 2), std::invalid_argument);
}
