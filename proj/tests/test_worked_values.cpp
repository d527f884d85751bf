#include "conekit/blowup.hpp"
#include "conekit/kernels.hpp"
#include "conekit/quadrature.hpp"
#include "conekit/scaling_spheres.hpp"
#include "conekit/solver.hpp"

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

}  // namespace

TEST_CASE("inversion and reflection values") {
  CHECK((kelvin_point(vec({2, 0, 0}), Point::Zero(3), 1.0) - vec({0.5, 0, 0})).norm() < 1e-15);
  CHECK((kelvin_point(vec({1, 0}), Point::Zero(2), 1.0) - vec({1, 0})).norm() < 1e-15);
  const Point x = vec({0.3, -1.2, 0.7}), P = vec({1, 1, 1});
  CHECK((kelvin_point(kelvin_point(x, P, 2.0), P, 2.0) - x).norm() < 1e-12);
  const Frame O = identity_frame(3);
  CHECK((signed_reflection(vec({1, 2, 3}), 0b010, O, Point::Zero(3)) - vec({1, -2, 3})).norm() == 0.0);
  CHECK((signed_reflection(vec({1, 2, 3}), 0, O, Point::Zero(3)) - vec({1, 2, 3})).norm() == 0.0);
  const Point once = signed_reflection(vec({1, 2, 3}), 0b011, O, P);
  CHECK((signed_reflection(once, 0b011, O, P) - vec({1, 2, 3})).norm() < 1e-15);
}

TEST_CASE("classification extents") {
  const std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  const MssClassification b = classify_mss(make_ball(Point::Zero(3), 2.0), Point::Zero(3), grid);
  CHECK(b.tag == MssTag::InnerGRC);
  CHECK(b.d_omega == doctest::Approx(0.0));
  CHECK(b.rho_omega == doctest::Approx(2.0));
  const MssClassification e = classify_mss(make_exterior_ball_k(3, 0, 1.5), Point::Zero(3), grid);
  CHECK(e.tag == MssTag::OuterGRC);
  CHECK(e.d_omega == doctest::Approx(1.5));
}

TEST_CASE("fundamental solution values") {
  CHECK(fundamental(1.0, 3, Point::Zero(3), vec({0, 1, 0})) == doctest::Approx(0.0795775).epsilon(1e-6));
  CHECK(fundamental(1.0, 2, Point::Zero(2), vec({0.6, 0.8})) == doctest::Approx(0.0).epsilon(1e-15));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 10; ++i) {
    const Point x = vec({U(rng), U(rng), U(rng)}), y = vec({U(rng), U(rng), U(rng)});
    CHECK(fundamental(1.0, 3, x, y) * (x - y).norm() == doctest::Approx(1 / (4 * kPi)).epsilon(1e-14));
  }
}

TEST_CASE("images kernel values") {
  Frame O = identity_frame(3);
  O.col(0) = vec({0, 0, 1});
  O.col(2) = vec({1, 0, 0});
  const GreenKernel half(1.0, make_half_space_k(3, 1, Point::Zero(3), O));
  CHECK(half(vec({0, 0, 1}), vec({0, 0, 2})) == doctest::Approx(1 / (6 * kPi)).epsilon(1e-14));
  const GreenKernel quarter(1.0, make_half_space_k(2, 2));
  const double expected = std::log(3 * std::sqrt(5.0) / std::sqrt(13.0)) / (2 * kPi);
  CHECK(quarter(vec({1, 1}), vec({1, 2})) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::abs(quarter(vec({1, 1}), vec({0, 2}))) < 1e-15);
}

TEST_CASE("exterior kernel asymptotics") {
  const GreenKernel G(1.0, make_exterior_ball_k(3, 0, 1.0));
  const Point x = vec({1.5, 0.5, 0.0});
  // G decays like Gamma with ratio 1 - R/|x - P| (the image charge R/|x| sits near P).
  const Point far = vec({0, 1e3, 0});
  CHECK(G(x, far) / fundamental(1.0, 3, x, far) == doctest::Approx(1 - 1 / x.norm()).epsilon(2e-3));
  CHECK(G(x, 10 * far) < 0.1 * G(x, far) * 1.001);
  const Point near = x + vec({1e-4, 0, 0});
  CHECK(G(x, near) * 1e-4 == doctest::Approx(1 / (4 * kPi)).epsilon(1e-3));
}

TEST_CASE("interval and half-line kernel values") {
  const GreenKernel I(0.5, DomainSpec(Interval{-1.0, 1.0}));
  CHECK(I(vec({0.0}), vec({0.5})) == doctest::Approx(std::log(2 + std::sqrt(3.0))).epsilon(1e-14));
  CHECK(std::abs(I(vec({0.0}), vec({1.0 - 1e-12}))) < 1e-5);
  const GreenKernel H(0.5, DomainSpec(HalfLine{0.0, 1}));
  CHECK(H(vec({1.0}), vec({4.0})) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  const GreenKernel H2(0.5, DomainSpec(HalfLine{0.0, 1}), Normalization::Angular, 2.5);
  CHECK(H2(vec({1.0}), vec({4.0})) == doctest::Approx(2.5 * std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("quadrature values") {
  const DomainSpec ball = make_ball(Point::Zero(3), 1.0);
  CHECK(quadrature_for(ball, 32).weights.sum() == doctest::Approx(4 * kPi / 3).epsilon(1e-6));
  QuadOptions at0;
  at0.singular_point = Point::Zero(3);
  const double v = quadrature_for(ball, 16, at0).integrate([](const Point& y) { return 1.0 / y.norm(); });
  CHECK(std::abs(v - 2 * kPi) < 1e-4);
  QuadOptions mid;
  mid.singular_point = vec({0.5});
  const double l = quadrature_for(DomainSpec(Interval{0.0, 1.0}), 16, mid).integrate([](const Point& y) {
    return -std::log(std::abs(y(0) - 0.5));
  });
  CHECK(std::abs(l - (1 + std::log(2.0))) < 1e-6);
}

TEST_CASE("K is monotone and vanishes on zero data") {
  const auto G = std::make_shared<GreenKernel>(1.0, make_ball(Point::Zero(3), 1.0));
  const auto layout = ball_radial_layout(Point::Zero(3), 1.0, 17);
  Nonlinearity f;
  f.p = 2.0;
  f.center = Point::Zero(3);
  const IntegralOperator op(G, layout, f);
  CHECK(op.apply(Eigen::VectorXd::Zero(17)).norm() == 0.0);
  const Eigen::VectorXd u1 = Eigen::VectorXd::LinSpaced(17, 1.0, 0.0);
  const Eigen::VectorXd u2 = u1 + Eigen::VectorXd::Constant(17, 0.3);
  CHECK(((op.apply(u2) - op.apply(u1)).array() >= 0).all());
  f.t = 1.0;
  const IntegralOperator opt(G, layout, f);
  CHECK(opt.apply(Eigen::VectorXd::Zero(17))(0) == doctest::Approx(1.0 / 6).epsilon(1e-4));
}

TEST_CASE("Picard from zero stays at the trivial solution; from twice the torsion it finds the positive one") {
  const auto G = std::make_shared<GreenKernel>(1.0, make_ball(Point::Zero(3), 1.0));
  const auto layout = ball_radial_layout(Point::Zero(3), 1.0, 41);
  Nonlinearity f;
  f.p = 2.0;
  f.center = Point::Zero(3);
  const SolverConfig cfg;
  const IntegralOperator op(G, layout, f, cfg);
  const SolveResult zero = picard_solve(op, GridFunction(layout, Eigen::VectorXd::Zero(41)), cfg);
  CHECK(zero.converged);
  CHECK(zero.u.sup_norm() == 0.0);
  const SolveResult pos = picard_solve(op, GridFunction(layout, 2 * op.torsion()), cfg);
  CHECK(pos.converged);
  CHECK(pos.residuals.back() < 1e-8);
  CHECK(pos.u.sup_norm() == doctest::Approx(radial_shooting_oracle(3, 2.0, 1.0).sup_norm).epsilon(1e-3));
}

TEST_CASE("barrier and lower-bound values") {
  CHECK(barrier_zeta(1.0, 3, Point::Zero(3), 2.0, Point::Zero(3)) == doctest::Approx(2.0 / 3));
  CHECK(barrier_zeta(1.0, 3, Point::Zero(3), 2.0, vec({2, 0, 0})) == 0.0);
  for (double p : {1.5, 2.0, 7.0}) CHECK(lower_bound_rho(3, 1.0, p, std::sqrt(6.0), 1.0 / 6) == doctest::Approx(1.0));
  CHECK(lower_bound_rho(3, 1.0, 1e9, 2.0, 1.0 / 6) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("shooting oracle is stable under step halving") {
  ShootingOptions a, b;
  a.steps = 4000;
  b.steps = 8000;
  const double u0a = radial_shooting_oracle(3, 2.0, 1.0, a).sup_norm;
  const double u0b = radial_shooting_oracle(3, 2.0, 1.0, b).sup_norm;
  CHECK(std::abs(u0a - u0b) < 1e-6);
  CHECK(u0a >= lower_bound_rho(3, 1.0, 2.0, 2.0, 1.0 / 6));
}

TEST_CASE("blow-up rescaling values") {
  const Polygon2D sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const Polygon2D big = rescale_domain(sq, Eigen::Vector2d(0, 0), 0.5);
  CHECK((big.vertices[2] - Eigen::Vector2d(2, 2)).norm() < 1e-15);
  CHECK(polygon_signed_area(big.vertices) == doctest::Approx(4.0));
  const Polygon2D moved = rescale_domain(sq, Eigen::Vector2d(1, 0.5), 1.0);
  CHECK((moved.vertices[0] - Eigen::Vector2d(-1, -0.5)).norm() < 1e-15);
  CHECK(limit_cone(sq, Eigen::Vector2d(0, 0)).angle == doctest::Approx(kPi / 2));
  CHECK(limit_cone(sq, Eigen::Vector2d(0.5, 0)).angle == doctest::Approx(kPi));
  const BcbReport rep = bcb_check(Polygon2D{{{0, 0}, {3, 0}, {0, 2}}}, Eigen::Vector2d(0, 0), {1.0, 0.5, 0.1, 0.01});
  for (std::size_t i = 1; i < rep.entries.size(); ++i) {
    CHECK(rep.entries[i].hausdorff <= rep.entries[i - 1].hausdorff);
    CHECK(rep.entries[i].hausdorff_boundary <= rep.entries[i - 1].hausdorff_boundary);
  }
  CHECK(blowup_scale(1e4, 3.0, 1.0) == doctest::Approx(1e-4));
  // u(x) = m phi((x - x_j)/lambda) with phi(y) = 1/(1 + y^2) on nodes.
  const double m = 1e4, lambda = 1e-4, xj = 0.3;
  const auto layout = linear_layout(Eigen::VectorXd::LinSpaced(201, xj - 100 * lambda, xj + 100 * lambda));
  const auto phi = [](double y) { return 1.0 / (1.0 + y * y); };
  const GridFunction u = GridFunction::sample(layout, [&](const Point& x) { return m * phi((x(0) - xj) / lambda); });
  const GridFunction v = rescale_solution(u, vec({xj}), m, 3.0, 1.0);
  CHECK(v(vec({0.0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.sup_norm() == doctest::Approx(1.0).epsilon(1e-14));
  for (int j = 0; j < v.size(); ++j) CHECK(std::abs(v.values()(j) - phi(v.node(j)(0))) < 1e-12);
}
