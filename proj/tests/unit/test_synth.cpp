#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "seapos/error.hpp"
#include "seapos/io.hpp"
#include "seapos/synth.hpp"

using namespace seapos;

TEST_CASE("bundled scenarios are distinct and valid") {
  std::set<std::string> names;
  for (const auto& s : synth::bundled_scenarios()) {
    CHECK_NOTHROW(s.validate());
    names.insert(s.name);
  }
  CHECK(names.size() == 5);
  CHECK(names.count("noiseless-straight") == 1);
  CHECK_THROWS_AS(synth::bundled_scenario("nope"), Error);
}

TEST_CASE("pinhole homography looks along the heading") {
  const synth::Pinhole cam;
  const PlanarMap m = PlanarMap::from_matrix(synth::pinhole_homography(cam, 0.0));
  // The principal row below the horizon maps straight ahead (north).
  const LocalPoint p = m.apply({cam.cx, cam.cy + 200.0});
  CHECK(std::abs(p.east_m) < 1e-9);
  CHECK(p.north_m > 0.0);
  // Depression angle of the pixel row: pitch + atan(200 / f).
  const double angle = cam.pitch_deg * oracle::kPi / 180.0 + std::atan(200.0 / cam.focal_px);
  CHECK(std::abs(p.north_m - cam.height_m / std::tan(angle)) < 1e-9);
  const PlanarMap east = PlanarMap::from_matrix(synth::pinhole_homography(cam, 90.0));
  const LocalPoint q = east.apply({cam.cx, cam.cy + 200.0});
  CHECK(std::abs(q.north_m) < 1e-9);
  CHECK(std::abs(q.east_m - p.north_m) < 1e-9);
}

TEST_CASE("truth projects through the true map and back") {
  const auto s = synth::bundled_scenario("noiseless-straight");
  const auto b = synth::generate(s);
  const PlanarMap& m = b.true_calibration.map;
  const GeoReference ref(s.camera.start);
  for (const auto& t : b.truth) {
    const LocalPoint w = geo_to_local(ref, t.position);
    const LocalPoint back = m.apply(m.inverse_apply(w));
    CHECK(std::hypot(back.east_m - w.east_m, back.north_m - w.north_m) < 1e-9);
  }
}

TEST_CASE("noiseless detections sit on the projected truth") {
  const auto s = synth::bundled_scenario("noiseless-straight");
  const auto b = synth::generate(s);
  const GeoReference ref(s.camera.start);
  for (const auto& t : b.truth) {
    const long frame = std::lround(t.t * s.fps);
    const Detection& d = b.detections[static_cast<std::size_t>(frame)];
    const LocalPoint w = b.true_calibration.map.apply(bottom_center(d.bbox));
    const LocalPoint truth = geo_to_local(ref, t.position);
    CHECK(std::hypot(w.east_m - truth.east_m, w.north_m - truth.north_m) < 1e-9);
  }
}

TEST_CASE("near-horizon scenario is far away in metres per pixel") {
  const auto s = synth::bundled_scenario("noisy-near-horizon");
  const auto b = synth::generate(s);
  const Detection& d = b.detections.front();
  const Eigen::Matrix2d j = b.true_calibration.map.jacobian(bottom_center(d.bbox));
  CHECK(j.col(1).norm() >= 2.0);
}

TEST_CASE("bbox width follows the boat size") {
  const auto s = synth::bundled_scenario("noiseless-straight");
  const auto b = synth::generate(s);
  const Detection& d = b.detections.front();
  const PixelPoint bc = bottom_center(d.bbox);
  const LocalPoint l = b.true_calibration.map.apply({bc.u - d.bbox.w / 2.0, bc.v});
  const LocalPoint r = b.true_calibration.map.apply({bc.u + d.bbox.w / 2.0, bc.v});
  CHECK(std::abs(std::hypot(r.east_m - l.east_m, r.north_m - l.north_m) - s.boats[0].width_m) < 0.05);
}

TEST_CASE("generation is seed deterministic") {
  auto s = synth::bundled_scenario("crossing-distractor");
  const auto a = synth::generate(s);
  const auto b = synth::generate(s);
  CHECK(io::format_detections(a.detections) == io::format_detections(b.detections));
  s.seed = 99;
  const auto c = synth::generate(s);
  CHECK(io::format_detections(a.detections) != io::format_detections(c.detections));
}

TEST_CASE("dropout windows remove only target detections") {
  const auto s = synth::bundled_scenario("occlusion-gap");
  const auto b = synth::generate(s);
  for (std::size_t i = 0; i < b.detections.size(); ++i) {
    const double t = b.detections[i].t;
    if (t >= 8.0 && t < 8.5) CHECK_FALSE(b.labels[i].target);
  }
  CHECK(b.camera_track.size() == 601);
}

TEST_CASE("dropouts do not shift the noise of later frames") {
  auto s = synth::bundled_scenario("occlusion-gap");
  const auto with_gap = synth::generate(s);
  s.noise.dropout_windows.clear();
  const auto without = synth::generate(s);
  CHECK(with_gap.detections.back().bbox.x == without.detections.back().bbox.x);
}

TEST_CASE("a target crossing the horizon is reported") {
  auto s = synth::bundled_scenario("noiseless-straight");
  s.boats[0].velocity = {0.0, -60.0};
  try {
    synth::generate(s);
    FAIL("expected a generation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Generation);
    CHECK(std::string(e.what()).find("horizon") != std::string::npos);
  }
}

TEST_CASE("distractors come from the seed") {
  auto s = synth::bundled_scenario("noiseless-straight");
  s.distractors = 3;
  const auto b = synth::generate(s);
  std::set<std::size_t> boats;
  for (const auto& l : b.labels) boats.insert(l.boat);
  CHECK(boats.size() == 4);
}

TEST_CASE("scenario JSON round trip") {
  for (const auto& s : synth::bundled_scenarios()) {
    const std::string text = synth::scenario_to_json(s);
    const auto back = synth::scenario_from_json(text);
    CHECK(synth::scenario_to_json(back) == text);
    CHECK(io::format_detections(synth::generate(back).detections) == io::format_detections(synth::generate(s).detections));
  }
  CHECK_THROWS_AS(synth::scenario_from_json("{}"), Error);
}

TEST_CASE("overrides") {
  SynthSettings o;
  o.seed = 17;
  o.duration_s = 2.0;
  o.pixel_std = 3.0;
  const auto s = synth::with_overrides(synth::bundled_scenario("noiseless-straight"), o);
  CHECK(s.seed == 17);
  CHECK(s.duration_s == 2.0);
  CHECK(s.noise.pixel_std == 3.0);
  CHECK(synth::generate(s).camera_track.size() == 61);
}
