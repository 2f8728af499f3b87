#include "seapos/geodesy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "seapos/error.hpp"

namespace seapos {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Wraps a longitude or longitude difference into [-180, 180]. Exact for
// values already in range.
double wrap_lon(double deg) { return std::remainder(deg, 360.0); }

}  // namespace

void validate(const GeoPoint& p) {
  if (!std::isfinite(p.lat_deg) || !std::isfinite(p.lon_deg) || p.lat_deg < -90.0 || p.lat_deg > 90.0 ||
      p.lon_deg < -180.0 || p.lon_deg > 180.0) {
    std::ostringstream os;
    os << "geo point out of range: lat=" << p.lat_deg << " lon=" << p.lon_deg;
    fail(ErrorCode::Domain, os.str());
  }
}

GeoReference::GeoReference(GeoPoint origin, double earth_radius_m) : origin_(origin), radius_(earth_radius_m) {
  validate(origin);
  if (!(earth_radius_m > 0.0) || !std::isfinite(earth_radius_m)) {
    fail(ErrorCode::Domain, "earth radius must be positive");
  }
  if (std::abs(origin.lat_deg) >= 89.0) {
    fail(ErrorCode::Domain, "reference latitude too close to a pole");
  }
  east_scale_ = radius_ * std::cos(origin.lat_deg * kDegToRad);
}

LocalPoint geo_to_local(const GeoReference& ref, const GeoPoint& p, bool* range_warning) {
  validate(p);
  const LocalPoint out{wrap_lon(p.lon_deg - ref.origin().lon_deg) * kDegToRad * ref.east_scale(),
                       (p.lat_deg - ref.origin().lat_deg) * kDegToRad * ref.north_scale()};
  if (range_warning != nullptr) {
    *range_warning = std::hypot(out.east_m, out.north_m) > kPlanarEnvelopeM;
  }
  return out;
}

GeoPoint local_to_geo(const GeoReference& ref, const LocalPoint& p) {
  if (!std::isfinite(p.east_m) || !std::isfinite(p.north_m)) {
    fail(ErrorCode::Domain, "local point is not finite");
  }
  return {ref.origin().lat_deg + p.north_m / ref.north_scale() * kRadToDeg,
          wrap_lon(ref.origin().lon_deg + p.east_m / ref.east_scale() * kRadToDeg)};
}

}  // namespace seapos
