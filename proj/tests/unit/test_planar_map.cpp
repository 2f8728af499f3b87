#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "seapos/error.hpp"
#include "seapos/planar_map.hpp"

using namespace seapos;

namespace {

std::vector<Correspondence> exact_correspondences(const Eigen::Matrix3d& h, std::mt19937_64& rng, int n) {
  std::vector<Correspondence> out;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p = oracle::random_pixel(rng);
    const Eigen::Vector2d w = oracle::apply_h(h, p);
    out.push_back({{p.x(), p.y()}, {w.x(), w.y()}});
  }
  return out;
}

}  // namespace

TEST_CASE("hartley normalization of a unit cross is a pure sqrt(2) scale") {
  const std::vector<Eigen::Vector2d> pts{{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  const Similarity2D t = hartley_normalization(pts);
  CHECK(std::abs(t.scale() - std::sqrt(2.0)) < 1e-15);
  CHECK(t.translation().norm() < 1e-15);
}

TEST_CASE("hartley normalization of two points") {
  const std::vector<Eigen::Vector2d> pts{{10, 10}, {12, 10}};
  const Similarity2D t = hartley_normalization(pts);
  CHECK(std::abs(t.scale() - 1.4142135623730951) < 1e-15);
  // Translate by (-11, -10), then scale.
  const Eigen::Vector2d a = t.apply(pts[0]);
  const Eigen::Vector2d b = t.apply(pts[1]);
  CHECK((a - Eigen::Vector2d(-std::sqrt(2.0), 0.0)).norm() < 1e-12);
  CHECK((b - Eigen::Vector2d(std::sqrt(2.0), 0.0)).norm() < 1e-12);
}

TEST_CASE("hartley normalization properties") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(oracle::random_pixel(rng));
    const Similarity2D t = hartley_normalization(pts);
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    double sq = 0.0;
    for (const auto& p : pts) c += t.apply(p);
    c /= 12.0;
    for (const auto& p : pts) sq += t.apply(p).squaredNorm();
    CHECK(c.norm() < 1e-12);
    CHECK(std::abs(std::sqrt(sq / 12.0) - std::sqrt(2.0)) < 1e-12);
    CHECK((t.matrix() * t.inverse_matrix() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("identical points cannot be normalized") {
  const std::vector<Eigen::Vector2d> pts{{3, 3}, {3, 3}, {3, 3}};
  CHECK_THROWS_AS(hartley_normalization(pts), DegenerateError);
}

TEST_CASE("apply and inverse on a diagonal map") {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h.diagonal() << 2, 3, 1;
  const PlanarMap m = PlanarMap::from_matrix(h);
  const LocalPoint w = m.apply({5, 7});
  CHECK(std::abs(w.east_m - 10.0) < 1e-12);
  CHECK(std::abs(w.north_m - 21.0) < 1e-12);
  const PixelPoint p = m.inverse_apply({10, 21});
  CHECK(std::abs(p.u - 5.0) < 1e-12);
  CHECK(std::abs(p.v - 7.0) < 1e-12);
}

TEST_CASE("pixels on the horizon row map to infinity") {
  Eigen::Matrix3d h;
  h << 1, 0, 0, 0, 1, 0, 0, 1, -480;
  const PlanarMap m = PlanarMap::from_matrix(h);
  for (double u : {0.0, 100.0, 1279.0}) {
    try {
      m.apply({u, 480.0});
      FAIL("expected point-at-infinity");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PointAtInfinity);
    }
  }
  CHECK_NOTHROW(m.apply({0.0, 500.0}));
}

TEST_CASE("radial distortion model") {
  const DistortionParams d{0.1, 0.0, 640.0, 360.0, 1000.0};
  const PixelPoint p = undistort(d, {1640.0, 360.0});
  CHECK(std::abs(p.u - 1740.0) < 1e-9);
  CHECK(std::abs(p.v - 360.0) < 1e-12);
  const PixelPoint back = distort(d, {1740.0, 360.0});
  CHECK(std::abs(back.u - 1640.0) < 1e-9);
  const PixelPoint centre = undistort(d, {640.0, 360.0});
  CHECK(centre.u == 640.0);
  CHECK(centre.v == 360.0);
  const DistortionParams none{0.0, 0.0, 640.0, 360.0, 1000.0};
  CHECK(undistort(none, {123.25, 456.5}).u == 123.25);
  CHECK(undistort(none, {123.25, 456.5}).v == 456.5);
}

TEST_CASE("distort inverts undistort") {
  const DistortionParams d{-0.08, 0.01, 640.0, 360.0, 900.0};
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d p = oracle::random_pixel(rng);
    const PixelPoint q = undistort(d, distort(d, {p.x(), p.y()}));
    CHECK(std::abs(q.u - p.x()) < 1e-8);
    CHECK(std::abs(q.v - p.y()) < 1e-8);
  }
}

TEST_CASE("exact data recovers the homography") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Matrix3d h = oracle::random_homography(rng);
    const auto corr = exact_correspondences(h, rng, 10);
    const PlanarMap m = estimate_homography(corr);
    CHECK(oracle::relative_error(m.h(), h) < 1e-6);
    CHECK(std::abs(m.h().norm() - 1.0) < 1e-12);
    CHECK(m.h()(2, 2) >= 0.0);
    CHECK(m.condition() >= 1.0);
    for (const auto& c : corr) {
      const LocalPoint w = m.apply(c.pixel);
      CHECK(std::hypot(w.east_m - c.world.east_m, w.north_m - c.world.north_m) < 1e-8);
    }
  }
}

TEST_CASE("four exact points suffice") {
  std::mt19937_64 rng(8);
  const Eigen::Matrix3d h = oracle::random_homography(rng);
  const std::vector<Correspondence> corr{
      {{0, 0}, {}}, {{1280, 0}, {}}, {{1280, 720}, {}}, {{0, 720}, {}}};
  std::vector<Correspondence> full;
  for (auto c : corr) {
    const Eigen::Vector2d w = oracle::apply_h(h, {c.pixel.u, c.pixel.v});
    c.world = {w.x(), w.y()};
    full.push_back(c);
  }
  CHECK(oracle::relative_error(estimate_homography(full).h(), h) < 1e-9);
}

TEST_CASE("noisy pixels keep reprojection error near the noise level") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 1.0);
  const Eigen::Matrix3d h = oracle::random_homography(rng);
  const std::vector<Correspondence> clean = exact_correspondences(h, rng, 50);
  std::vector<Correspondence> corr = clean;
  for (auto& c : corr) {
    c.pixel.u += noise(rng);
    c.pixel.v += noise(rng);
  }
  const PlanarMap m = estimate_homography(corr);
  // Reproject every world point and compare with the noise-free pixel.
  double sq = 0.0;
  for (const auto& c : clean) {
    const PixelPoint p = m.inverse_apply(c.world);
    sq += std::pow(p.u - c.pixel.u, 2) + std::pow(p.v - c.pixel.v, 2);
  }
  CHECK(std::sqrt(sq / 50.0) <= 1.5);
}

TEST_CASE("too few correspondences") {
  std::vector<Correspondence> corr{{{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  try {
    estimate_homography(corr);
    FAIL("expected arity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Arity);
  }
}

TEST_CASE("collinear correspondences are degenerate") {
  std::vector<Correspondence> line;
  for (int i = 0; i < 8; ++i) line.push_back({{10.0 * i, 5.0 * i}, {3.0 * i, 1.0 * i + 2.0}});
  CHECK_THROWS_AS(estimate_homography(line), DegenerateError);

  // Four points with three on a line.
  std::vector<Correspondence> three{{{0, 0}, {0, 0}}, {{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}, {{0, 5}, {0, 5}}};
  try {
    estimate_homography(three);
    FAIL("expected degenerate error");
  } catch (const DegenerateError& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("projective scale of H does not change the map") {
  std::mt19937_64 rng(4);
  const Eigen::Matrix3d h = oracle::random_homography(rng);
  const PlanarMap a = PlanarMap::from_matrix(h);
  const PlanarMap b = PlanarMap::from_matrix(-7.5 * h);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d p = oracle::random_pixel(rng);
    const LocalPoint wa = a.apply({p.x(), p.y()});
    const LocalPoint wb = b.apply({p.x(), p.y()});
    CHECK(std::hypot(wa.east_m - wb.east_m, wa.north_m - wb.north_m) < 1e-9 * (1.0 + std::hypot(wa.east_m, wa.north_m)));
  }
  CHECK((a.h() - b.h()).norm() < 1e-12);
}

TEST_CASE("estimation is equivariant under a pixel similarity") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Matrix3d h = oracle::random_homography(rng);
    const auto corr = exact_correspondences(h, rng, 12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
    const double scale = 0.5 + (u(rng) + 1.0), th = oracle::kPi * u(rng);
    s << scale * std::cos(th), -scale * std::sin(th), 300 * u(rng), scale * std::sin(th), scale * std::cos(th),
        300 * u(rng), 0, 0, 1;
    std::vector<Correspondence> moved = corr;
    for (auto& c : moved) {
      const Eigen::Vector2d p = oracle::apply_h(s, {c.pixel.u, c.pixel.v});
      c.pixel = {p.x(), p.y()};
    }
    const Eigen::Matrix3d h1 = estimate_homography(corr).h();
    const Eigen::Matrix3d h2 = estimate_homography(moved).h();
    CHECK(oracle::relative_error(h2 * s, h1) < 1e-6);
  }
}

TEST_CASE("apply and inverse_apply are mutually inverse") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const PlanarMap m = PlanarMap::from_matrix(oracle::random_homography(rng));
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector2d p = oracle::random_pixel(rng);
      const PixelPoint q = m.inverse_apply(m.apply({p.x(), p.y()}));
      CHECK(std::hypot(q.u - p.x(), q.v - p.y()) < 1e-9);
    }
  }
}

TEST_CASE("layer stack agrees with direct application") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Matrix3d h = oracle::random_homography(rng);
    const std::optional<DistortionParams> dist =
        trial % 2 ? std::optional<DistortionParams>(DistortionParams{0.05, -0.01, 640, 360, 1000}) : std::nullopt;
    std::vector<Correspondence> corr = exact_correspondences(h, rng, 10);
    const PlanarMap m = estimate_homography(corr, dist);
    const LayerStack stack = as_linear_layers(m);
    CHECK(stack.layers().size() == (dist ? 5u : 4u));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector2d p = oracle::random_pixel(rng);
      const LocalPoint a = stack.evaluate({p.x(), p.y()});
      const LocalPoint b = m.apply({p.x(), p.y()});
      worst = std::max(worst, std::hypot(a.east_m - b.east_m, a.north_m - b.north_m));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("jacobian matches finite differences") {
  std::mt19937_64 rng(17);
  const PlanarMap m = PlanarMap::from_matrix(oracle::random_homography(rng));
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d p = oracle::random_pixel(rng);
    const Eigen::Matrix2d j = m.jacobian({p.x(), p.y()});
    const double e = 1e-3;
    const LocalPoint px0 = m.apply({p.x() - e, p.y()}), px1 = m.apply({p.x() + e, p.y()});
    const LocalPoint py0 = m.apply({p.x(), p.y() - e}), py1 = m.apply({p.x(), p.y() + e});
    Eigen::Matrix2d fd;
    fd << (px1.east_m - px0.east_m) / (2 * e), (py1.east_m - py0.east_m) / (2 * e), (px1.north_m - px0.north_m) / (2 * e),
        (py1.north_m - py0.north_m) / (2 * e);
    CHECK((j - fd).norm() < 1e-6 * (1.0 + j.norm()));
  }
}

TEST_CASE("singular matrices are rejected") {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  CHECK_THROWS_AS(PlanarMap::from_matrix(h), Error);
  CHECK_THROWS_AS(PlanarMap::from_matrix(Eigen::Matrix3d::Zero()), Error);
}
