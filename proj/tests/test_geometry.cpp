#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wtrace/domain.hpp"
#include "wtrace/error.hpp"

using namespace wtrace;
using namespace wtrace::geom;

TEST_CASE("circle quadrature: unit normals, radial direction, perimeter") {
  const auto q = boundary_quadrature(Domain::disk(2.0, Eigen::Vector2d(0.5, -1.0)), 64);
  CHECK(q.weights.sum() == doctest::Approx(4.0 * oracle::pi).epsilon(1e-14));
  for (Eigen::Index i = 0; i < q.points.rows(); ++i) {
    const Eigen::Vector2d r = q.points.row(i).transpose() - Eigen::Vector2d(0.5, -1.0);
    CHECK(q.normals.row(i).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.normals.row(i).dot(r / r.norm()) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("interval endpoints carry outward normals of weight one") {
  const auto q = boundary_quadrature(Domain::intervals({{-1.0, -0.5}, {0.5, 1.0}}), 8);
  REQUIRE(q.size() == 4);
  CHECK(q.normals(0, 0) == -1.0);
  CHECK(q.normals(1, 0) == 1.0);
  CHECK(q.weights.sum() == 4.0);
}

TEST_CASE("annulus boundary: both circles, normals pointing away from the region") {
  const auto q = boundary_quadrature(Domain::annulus(0.5, 1.0), 128);
  REQUIRE(q.size() == 256);
  CHECK(q.weights.sum() == doctest::Approx(3.0 * oracle::pi).epsilon(1e-13));
  for (Eigen::Index i = 0; i < 256; ++i) {
    const Eigen::Vector2d p = q.points.row(i).transpose();
    const double radial = q.normals.row(i).dot(p.normalized());
    CHECK(radial == doctest::Approx(p.norm() > 0.75 ? 1.0 : -1.0).epsilon(1e-13));
  }
}

TEST_CASE("areas of the built-in shapes match closed forms") {
  CHECK(measure(Domain::disk(1.0)) == doctest::Approx(oracle::pi).epsilon(1e-13));
  CHECK(measure(Domain::ellipse(1.0, 0.5)) == doctest::Approx(0.5 * oracle::pi).epsilon(1e-13));
  CHECK(measure(Domain::annulus(0.5, 1.0)) == doctest::Approx(0.75 * oracle::pi).epsilon(1e-13));
  CHECK(measure(Domain::parametric(RadiusFunction::superellipse(0.9, 8))) ==
        doctest::Approx(oracle::superellipse_area(0.9, 8)).epsilon(1e-12));
  CHECK(measure(Domain::parametric(RadiusFunction::superellipse(1.0, 16))) ==
        doctest::Approx(oracle::superellipse_area(1.0, 16)).epsilon(1e-12));
  CHECK(measure(Domain::parametric(RadiusFunction::fourier(1.0, {0.2, 0.1}, {0.05}))) ==
        doctest::Approx(oracle::fourier_area(1.0, {0.2, 0.1}, {0.05})).epsilon(1e-12));
  CHECK(measure(Domain::intervals({{0.0, 1.0}, {2.0, 2.5}})) == doctest::Approx(1.5));
}

TEST_CASE("cross sections of the unit disk") {
  const Domain disk = Domain::disk(1.0);
  const auto s = cross_section(disk, 0.6, 1.0, 256);
  REQUIRE(s.intervals.size() == 1);
  CHECK(s.intervals[0].left == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(s.intervals[0].right == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(s.interior_endpoints.size() == 2);
  CHECK_FALSE(s.degenerate);
  CHECK(cross_section(disk, 1.5, 1.0, 256).intervals.empty());
  const auto ring = cross_section(Domain::annulus(0.5, 1.0), 0.0, 1.0, 256);
  CHECK(ring.intervals.size() == 2);
  CHECK(ring.interior_endpoints.size() == 4);
}

TEST_CASE("m_delta agrees with a brute-force nearest-neighbour sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(static_cast<std::size_t>(t % 9));
    for (auto& v : x) v = u(rng);
    std::sort(x.begin(), x.end());
    for (double delta : {0.0, 0.5, 1.7})
      CHECK(m_delta(x, 1.0, delta) == doctest::Approx(oracle::m_delta(x, 1.0, delta)).epsilon(1e-13));
  }
  CHECK(m_delta(std::vector<double>{}, 0.5, 1.0) == doctest::Approx(0.5));  // (4 rho)^-delta
}

TEST_CASE("m_delta integral over disk slices") {
  for (double delta : {0.5, 1.0, 1.5, 1.9}) {
    CAPTURE(delta);
    const auto r = integrate_m_delta(Domain::disk(1.0), delta, 1.0, 256);
    CHECK(r.value == doctest::Approx(oracle::m_delta_unit_disk(delta)).epsilon(1e-6));
    CHECK(r.degenerate_slices == 0);
  }
  CHECK_THROWS_AS(integrate_m_delta(Domain::disk(1.0), 2.0, 1.0, 64), PreconditionError);
}

TEST_CASE("affine images: measure scales with |det| and disks stay disks") {
  Eigen::Matrix2d m;
  m << 2.0, 0.5, -0.3, 1.2;
  const Eigen::Vector2d k(0.3, -0.4);
  const Domain e = Domain::ellipse(1.0, 0.5);
  const Domain ex = affine_image(e, {m, k, AffineMap::Side::x_side});
  const Domain eq = affine_image(e, {m, k, AffineMap::Side::xi_side});
  CHECK(measure(ex) == doctest::Approx(measure(e) / std::fabs(m.determinant())).epsilon(1e-12));
  CHECK(measure(eq) == doctest::Approx(measure(e) * std::fabs(m.determinant())).epsilon(1e-12));

  Eigen::Matrix2d rot;
  rot << 0.0, -2.0, 2.0, 0.0;
  const auto d = as_disk(affine_image(Domain::disk(1.0), {rot, Eigen::Vector2d(1.0, 0.0), AffineMap::Side::x_side}));
  REQUIRE(d.has_value());
  CHECK(d->radius == doctest::Approx(0.5));
  CHECK_FALSE(as_disk(e).has_value());

  // Membership: y in M^{-1}(D - k) iff M y + k in D.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 200; ++t) {
    Vec y(2);
    y << u(rng), u(rng);
    const Vec image = m * y + k;
    CHECK(contains(ex, y) == contains(e, image));
  }
}

TEST_CASE("curvature proxies of circle and ellipse") {
  const auto c = curvature_bounds(Domain::disk(2.0));
  CHECK(c.max_curvature == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(c.max_curvature_rate == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
  // Ellipse (1, 0.5): max curvature a / b^2 = 4 at the ends of the major axis.
  CHECK(curvature_bounds(Domain::ellipse(1.0, 0.5)).max_curvature == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("graph boundaries need an explicit window") {
  const Domain g = Domain::graph(GraphFunction::paraboloid(1, 0.5), Mat::Identity(2, 2), Vec::Zero(2));
  CHECK_THROWS_AS(boundary_quadrature(g, 64), PreconditionError);
  const auto q = boundary_quadrature(g, 64, 1.0);
  CHECK(q.weights.sum() > 2.0);
  for (Eigen::Index i = 0; i < q.points.rows(); ++i) CHECK(q.normals(i, 1) < 0.0);
}
