#include <filesystem>
#include <string>

#include "doctest.h"
#include "seapos/error.hpp"
#include "seapos/io.hpp"
#include "seapos/synth.hpp"

using namespace seapos;

namespace {

const std::string kFixtures = SEAPOS_FIXTURE_DIR;

std::string parse_error(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("valid detections") {
  const auto dets = io::read_detections(kFixtures + "/detections_valid.jsonl");
  REQUIRE(dets.size() == 4);
  CHECK(dets[0].p_c == 0.95);
  CHECK(dets[0].det_score == 0.91);
  CHECK_FALSE(dets[1].p_c);
  CHECK_FALSE(dets[2].p_c);
  CHECK_FALSE(dets[3].det_score);
  CHECK(dets[3].frame == 3);
  CHECK(dets[0].bbox.w == 40.0);
}

TEST_CASE("detections with a zero-width box") {
  const std::string msg = parse_error([] { io::read_detections(kFixtures + "/detections_zero_width.jsonl"); });
  CHECK(msg.find("detections_zero_width.jsonl:2") != std::string::npos);
  CHECK(msg.find("positive") != std::string::npos);
}

TEST_CASE("detections with decreasing time") {
  const std::string msg = parse_error([] { io::read_detections(kFixtures + "/detections_decreasing_t.jsonl"); });
  CHECK(msg.find(":2") != std::string::npos);
}

TEST_CASE("malformed detection records") {
  parse_error([] { io::parse_detections("{\"frame\": 0, \"t\": 0}\n"); });
  parse_error([] { io::parse_detections("{\"frame\": 0, \"t\": 0, \"bbox\": [1, 2, 3]}\n"); });
  parse_error([] { io::parse_detections("{\"frame\": 0, \"t\": 0, \"bbox\": [1, 2, 3, 4], \"p_c\": 1.5}\n"); });
  parse_error([] { io::parse_detections("{\"frame\": -1, \"t\": 0, \"bbox\": [1, 2, 3, 4]}\n"); });
  parse_error([] { io::parse_detections("{\"frame\": 0.5, \"t\": 0, \"bbox\": [1, 2, 3, 4]}\n"); });
  parse_error([] { io::parse_detections("[1, 2]\n"); });
  parse_error([] { io::parse_detections("{not json\n"); });
  parse_error([] {
    io::parse_detections(
        "{\"frame\": 0, \"t\": 0, \"bbox\": [1, 2, 3, 4]}\n{\"frame\": 0, \"t\": 1, \"bbox\": [1, 2, 3, 4]}\n");
  });
  parse_error([] {
    io::parse_detections(
        "{\"frame\": 0, \"t\": 0, \"bbox\": [1, 2, 3, 4]}\n{\"frame\": 1, \"t\": 0, \"bbox\": [1, 2, 3, 4]}\n");
  });
}

TEST_CASE("camera track parsing") {
  const auto s = io::parse_camera_track("{\"t\": 0, \"lat\": 36, \"lon\": -75, \"heading\": 12.5}\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0].heading_deg == 12.5);
  parse_error([] { io::parse_camera_track("{\"t\": 0, \"lat\": 95, \"lon\": -75}\n"); });
}

TEST_CASE("bundle streams round trip through their formats") {
  const auto b = synth::generate(synth::bundled_scenario("moving-platform"));
  const auto dets = io::parse_detections(io::format_detections(b.detections));
  REQUIRE(dets.size() == b.detections.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    CHECK(dets[i].bbox.x == b.detections[i].bbox.x);
    CHECK(dets[i].t == b.detections[i].t);
    CHECK(dets[i].p_c == b.detections[i].p_c);
  }
  const auto cam = io::parse_camera_track(io::format_camera_track(b.camera_track));
  CHECK(cam.back().position.lat_deg == b.camera_track.back().position.lat_deg);
  CHECK(cam.back().heading_deg == b.camera_track.back().heading_deg);
  const auto quads = io::parse_quadruplets(io::format_quadruplets(b.quadruplets));
  CHECK(quads[3].pixel.u == b.quadruplets[3].pixel.u);
  const auto truth = io::parse_truth(io::format_truth(b.truth));
  CHECK(truth.back().position.lon_deg == b.truth.back().position.lon_deg);
}

TEST_CASE("calibration round trip is exact") {
  const auto b = synth::generate(synth::bundled_scenario("moving-platform"));
  const Calibration cal = calibrate({b.quadruplets, b.camera_track});
  const std::string text = io::format_calibration(cal);
  const Calibration back = io::parse_calibration(text);
  CHECK(back.map.h() == cal.map.h());
  CHECK(back.map.t_local().scale() == cal.map.t_local().scale());
  CHECK(back.map.condition() == cal.map.condition());
  CHECK(back.heading_ref_deg == cal.heading_ref_deg);
  CHECK(io::format_calibration(back) == text);
  const LayerStack a = as_linear_layers(cal.map), c = as_linear_layers(back.map);
  for (const auto& q : b.quadruplets) {
    const LocalPoint x = a.evaluate(q.pixel), y = c.evaluate(q.pixel);
    CHECK(x.east_m == y.east_m);
    CHECK(x.north_m == y.north_m);
  }
}

TEST_CASE("calibration with distortion round trips") {
  const auto b = synth::generate(synth::bundled_scenario("noiseless-straight"));
  CalibrationSettings s;
  s.distortion = DistortionParams{0.01, 0.0, 640, 360, 1000};
  const Calibration cal = calibrate({b.quadruplets, b.camera_track}, s);
  const Calibration back = io::parse_calibration(io::format_calibration(cal));
  REQUIRE(back.map.distortion());
  CHECK(back.map.distortion()->k1 == 0.01);
}

TEST_CASE("malformed calibration files") {
  parse_error([] { io::parse_calibration("{\"format_version\": 2}"); });
  parse_error([] { io::parse_calibration("not json"); });
  parse_error([] {
    io::parse_calibration(R"({"format_version": 1, "H": [1,0,0,0,1,0,0,0], "T_local": [1,0,0,0,1,0,0,0,1],
      "T_world": [1,0,0,0,1,0,0,0,1], "origin": {"lat": 36, "lon": -75}})");
  });
  parse_error([] {
    io::parse_calibration(R"({"format_version": 1, "H": [1,0,0,0,1,0,0,0,1], "T_local": [1,0.5,0,0,1,0,0,0,1],
      "T_world": [1,0,0,0,1,0,0,0,1], "origin": {"lat": 36, "lon": -75}})");
  });
}

TEST_CASE("missing files are I/O errors") {
  try {
    io::read_detections(kFixtures + "/does_not_exist.jsonl");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("trajectory round trip") {
  GeoTrajectory traj;
  for (int k = 0; k < 5; ++k) {
    TrajectoryPoint p;
    p.t = 0.1 * k;
    p.frame = k;
    p.reference = {36.0, -75.0};
    p.smoothed_geo = {36.0001 * (1 + 1e-7 * k), -75.0002};
    p.raw_geo = {36.00011, -75.00021};
    p.smoothed_local = geo_to_local(GeoReference(p.reference), p.smoothed_geo);
    p.raw_local = geo_to_local(GeoReference(p.reference), p.raw_geo);
    p.coasted = k == 2;
    traj.points.push_back(p);
  }
  const std::string text = io::format_trajectory(traj);
  const GeoTrajectory back = io::parse_trajectory(text);
  REQUIRE(back.points.size() == 5);
  CHECK(back.points[2].coasted);
  CHECK(back.points[4].smoothed_geo.lat_deg == traj.points[4].smoothed_geo.lat_deg);
  CHECK(std::abs(back.points[1].reference.lat_deg - 36.0) < 1e-12);
  CHECK(io::format_trajectory(back) == text);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "seapos_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  CHECK(io::read_file(path) == "second");
  std::filesystem::remove_all(dir);
}

TEST_CASE("report formats") {
  EvalReport r;
  r.raw = {1.5, 1.2, 3.0, 1.0, 1.1, 10};
  r.smoothed = {0.5, 0.4, 1.0, 0.3, 0.4, 10};
  const std::string j = io::format_report_json(r);
  CHECK(j.find("\"smoothed\"") != std::string::npos);
  CHECK(j.find("\"n_matched\"") != std::string::npos);
  const std::string t = io::format_report_text(r);
  CHECK(t.find("1.5000") != std::string::npos);
}
