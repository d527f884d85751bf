#include "conekit/blowup.hpp"

#include <doctest.h>

#include <cmath>

using namespace conekit;

namespace {

const Polygon2D kSquare{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
const Polygon2D kL{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};

}  // namespace

TEST_CASE("rescaling keeps the anchor on the boundary") {
  const Polygon2D r = rescale_domain(kSquare, Eigen::Vector2d(0.5, 0.0), 0.1);
  CHECK(r.vertices[1].x() == doctest::Approx(5.0));
  CHECK(r.vertices[2].y() == doctest::Approx(10.0));
  CHECK_THROWS_AS(rescale_domain(kSquare, Eigen::Vector2d(0.5, 0.5), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rescale_domain(kSquare, Eigen::Vector2d(0.0, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("limit cones at vertices and edges") {
  const ConeDescription corner = limit_cone(kSquare, Eigen::Vector2d(1, 1));
  CHECK(corner.angle == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(corner.vertex_index == 2);
  CHECK(corner.contains(Eigen::Vector2d(-0.1, -0.2)));
  CHECK_FALSE(corner.contains(Eigen::Vector2d(0.1, -0.2)));
  const ConeDescription edge = limit_cone(kSquare, Eigen::Vector2d(1, 0.3));
  CHECK(edge.angle == doctest::Approx(kPi));
  CHECK(edge.vertex_index == -1);
  CHECK(edge.contains(Eigen::Vector2d(-1, 5)));
  CHECK_THROWS_AS(limit_cone(kSquare, Eigen::Vector2d(0.5, 0.5)), std::invalid_argument);
}

TEST_CASE("interior angles agree with the turning-angle computation") {
  const std::vector<Polygon2D> polys = {kSquare, kL, Polygon2D{{{0, 0}, {3, 0}, {1, 2}}}};
  for (const Polygon2D& p : polys) {
    double total = 0;
    for (int i = 0; i < static_cast<int>(p.vertices.size()); ++i) {
      const double a = limit_cone(p, p.vertices[i]).angle;
      CHECK(a == doctest::Approx(interior_angle_by_turning(p, i)).epsilon(1e-13));
      total += a;
    }
    CHECK(total == doctest::Approx(kPi * (p.vertices.size() - 2)));
  }
  CHECK(limit_cone(kL, Eigen::Vector2d(1, 1)).angle == doctest::Approx(1.5 * kPi).epsilon(1e-14));
}

TEST_CASE("blow-up at a vertex converges to the cone") {
  const BcbReport rep = bcb_check(kSquare, Eigen::Vector2d(0, 0), {1e-1, 1e-2, 1e-3, 1e-4});
  for (const BcbEntry& e : rep.entries) {
    CHECK(e.hausdorff < 1e-12);
    CHECK(e.hausdorff_boundary < 1e-12);
  }
  // At rho = 2 the rescaled square [0, 1/2]^2 lies inside B_1 and misses most of the quarter disk.
  const BcbReport big = bcb_check(kSquare, Eigen::Vector2d(0, 0), {2.0});
  CHECK(big.entries[0].hausdorff_boundary > 0.1);
  CHECK(big.entries[0].hausdorff > 0.1);
}

TEST_CASE("moving anchor gives a first-order rate") {
  BcbOptions opts;
  opts.approach = Eigen::Vector2d(1, 0);
  const BcbReport rep = bcb_check(kL, Eigen::Vector2d(0, 0), {1e-1, 5e-2, 2e-2, 1e-2}, opts);
  REQUIRE(rep.boundary_slope.has_value());
  CHECK(*rep.boundary_slope == doctest::Approx(1.0).epsilon(0.05));
  // The anchor path displaces the apex by rho e, so the distance is rho.
  CHECK(rep.entries.back().hausdorff_boundary == doctest::Approx(1e-2).epsilon(1e-6));
  CHECK_THROWS_AS(bcb_check(kL, Eigen::Vector2d(0, 0), {1e-2, 1e-1}), std::invalid_argument);
}

TEST_CASE("report JSON carries the documented keys") {
  const auto j = to_json(bcb_check(kSquare, Eigen::Vector2d(0, 0), {1e-2}));
  REQUIRE(j["entries"].size() == 1);
  CHECK(j["entries"][0].contains("rho"));
  CHECK(j["entries"][0].contains("hausdorff"));
  CHECK(j["entries"][0].contains("cone_angle"));
}

TEST_CASE("blow-up rescaling of a solution") {
  CHECK(blowup_scale(4.0, 3.0, 1.0) == doctest::Approx(0.25));
  const auto layout = linear_layout(Eigen::VectorXd::LinSpaced(101, -1.0, 1.0));
  const GridFunction u = GridFunction::sample(layout, [](const Point& x) { return 4.0 * (1 - x(0) * x(0)); });
  Point xj(1);
  xj << 0.0;
  const GridFunction v = rescale_solution(u, xj, 4.0, 3.0, 1.0);
  Point y(1);
  y << 2.0;
  // v(y) = u(0.25 y) / 4.
  CHECK(v(y) == doctest::Approx(1 - 0.25).epsilon(1e-12));
  CHECK(v.sup_norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(rescale_solution(u, xj, 4.0, 1.0, 1.0), std::invalid_argument);
}
