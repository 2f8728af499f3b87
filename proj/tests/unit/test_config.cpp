#include "doctest.h"
#include "seapos/config.hpp"
#include "seapos/error.hpp"

using namespace seapos;

namespace {

const std::string kFixtures = SEAPOS_FIXTURE_DIR;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("defaults") {
  const Config c;
  CHECK(c.tracker.association.alpha == 0.5);
  CHECK(c.tracker.association.sigma == 10.0);
  CHECK(c.tracker.association.p_thr == 0.51);
  CHECK(c.tracker.association.max_coast_frames == 30);
  CHECK(c.ukf.params.spread == 1e-3);
  CHECK(c.ukf.params.prior_knowledge == 2.0);
  CHECK(c.ukf.params.secondary_scaling == 0.0);
  CHECK(c.calibration.earth_radius_m == 6371000.0);
  CHECK(c.calibration.anchoring == Anchoring::PerFrame);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("loading a file with comments") {
  const Config c = Config::load(kFixtures + "/config_valid.ini");
  CHECK(c.tracker.association.alpha == 0.6);
  CHECK(c.tracker.association.sigma == 12.0);
  CHECK(c.tracker.association.max_coast_frames == 45);
  CHECK(c.ukf.params.r_pos == 2.5);
  CHECK(c.ukf.pixel_std == 1.5);
  CHECK(c.calibration.anchoring == Anchoring::Fixed);
  CHECK(c.tracker.association.p_thr == 0.51);
}

TEST_CASE("bad configuration files") {
  CHECK(code_of([] { Config::load(kFixtures + "/config_unknown_key.ini"); }) == ErrorCode::Parse);
  CHECK(code_of([] { Config::load(kFixtures + "/config_bad_value.ini"); }) == ErrorCode::Parse);
  CHECK(code_of([] { Config::load(kFixtures + "/config_out_of_range.ini"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Config::load(kFixtures + "/missing.ini"); }) == ErrorCode::Io);
  CHECK(code_of([] { Config::parse("[nonsense]\nkey = 1\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { Config::parse("[calibration]\nanchoring = sometimes\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { Config::parse("[tracker\n"); }) == ErrorCode::Parse);
}

TEST_CASE("to_ini round trips") {
  Config c;
  c.set("tracker", "alpha", "0.3");
  c.set("tracker", "init_frame", "12");
  c.set("ukf", "r_pos", "0.125");
  c.set("calibration", "distortion_k1", "-0.05");
  c.set("synth", "seed", "18446744073709551615");
  c.set("synth", "pixel_std", "0.7");
  const std::string text = c.to_ini();
  CHECK(text.find("p_thr = 0.51\n") != std::string::npos);
  const Config back = Config::parse(text);
  CHECK(back.to_ini() == text);
  CHECK(back.tracker.association.alpha == 0.3);
  CHECK(back.tracker.init_frame == 12);
  REQUIRE(back.calibration.distortion);
  CHECK(back.calibration.distortion->k1 == -0.05);
  CHECK(back.synth.seed == 18446744073709551615ull);
  CHECK(back.synth.pixel_std == 0.7);
}
