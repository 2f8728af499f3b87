#pragma once

namespace seapos {

struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
};

// Metric offset on the local sea plane, east/north of a reference point.
struct LocalPoint {
  double east_m = 0.0;
  double north_m = 0.0;
};

inline constexpr double kDefaultEarthRadiusM = 6'371'000.0;
inline constexpr double kPlanarEnvelopeM = 50'000.0;

/**
 * Anchor of an equirectangular local tangent plane on a spherical earth.
 *
 * The east scale uses cos(latitude) of the origin, not of the converted point,
 * so geo_to_local is affine in (lat, lon) and local_to_geo is its exact inverse.
 * Poles and the antimeridian are outside the supported envelope.
 */
class GeoReference {
public:
  explicit GeoReference(GeoPoint origin, double earth_radius_m = kDefaultEarthRadiusM);

  const GeoPoint& origin() const { return origin_; }
  double earth_radius_m() const { return radius_; }

  // Meters per radian along each axis at the origin.
  double north_scale() const { return radius_; }
  double east_scale() const { return east_scale_; }

private:
  GeoPoint origin_;
  double radius_;
  double east_scale_;
};

void validate(const GeoPoint& p);

/// Converts a GPS fix to meters east/north of ref. When range_warning is
/// non-null it is set if p lies beyond the planar envelope (~50 km); the
/// result is returned either way.
LocalPoint geo_to_local(const GeoReference& ref, const GeoPoint& p, bool* range_warning = nullptr);

GeoPoint local_to_geo(const GeoReference& ref, const LocalPoint& p);

}  // namespace seapos
