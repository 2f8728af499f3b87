#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "seapos/geodesy.hpp"

namespace seapos {

// Image coordinates, origin at the top-left corner, v growing downwards.
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

struct Correspondence {
  PixelPoint pixel;
  LocalPoint world;
};

/// Isotropic scale plus translation, [s*I | t; 0 0 1].
class Similarity2D {
public:
  Similarity2D() = default;
  Similarity2D(double scale, Eigen::Vector2d translation);

  static Similarity2D identity() { return {}; }

  double scale() const { return scale_; }
  const Eigen::Vector2d& translation() const { return translation_; }

  Eigen::Matrix3d matrix() const;
  Eigen::Matrix3d inverse_matrix() const;
  Eigen::Vector2d apply(const Eigen::Vector2d& p) const { return scale_ * p + translation_; }

private:
  double scale_ = 1.0;
  Eigen::Vector2d translation_ = Eigen::Vector2d::Zero();
};

/// Moves the centroid of points to the origin and scales their RMS distance
/// from it to sqrt(2). Throws a degenerate error if all points coincide.
Similarity2D hartley_normalization(std::span<const Eigen::Vector2d> points);

// Two-coefficient Brown radial model in coordinates normalized by f about (cx, cy).
struct DistortionParams {
  double k1 = 0.0;
  double k2 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double f = 1.0;
};

PixelPoint undistort(const DistortionParams& d, const PixelPoint& p);
// Inverse of undistort, solved by Newton iteration on the radius.
PixelPoint distort(const DistortionParams& d, const PixelPoint& p);

/**
 * Pixel -> sea-plane homography.
 *
 * H maps raw (undistorted) pixels to raw local metres and is stored with unit
 * Frobenius norm and H(2,2) >= 0. The normalizations used during estimation are
 * kept so that the normalized core T_world * H * T_local^-1 can be recovered.
 */
class PlanarMap {
public:
  PlanarMap(const Eigen::Matrix3d& h, Similarity2D t_local, Similarity2D t_world, double condition,
            std::optional<DistortionParams> distortion = std::nullopt);

  /// Map with identity normalizations, mostly for tests and hand-built geometry.
  static PlanarMap from_matrix(const Eigen::Matrix3d& h, std::optional<DistortionParams> distortion = std::nullopt);

  const Eigen::Matrix3d& h() const { return h_; }
  const Similarity2D& t_local() const { return t_local_; }
  const Similarity2D& t_world() const { return t_world_; }
  double condition() const { return condition_; }
  const std::optional<DistortionParams>& distortion() const { return distortion_; }

  Eigen::Matrix3d normalized_h() const;

  // Forward map with distortion correction applied first.
  LocalPoint apply(const PixelPoint& p) const;
  // Returns a (distorted, if a model is set) pixel.
  PixelPoint inverse_apply(const LocalPoint& w) const;

  /// d(world)/d(pixel) at p, in metres per pixel, ignoring distortion.
  Eigen::Matrix2d jacobian(const PixelPoint& p) const;

private:
  Eigen::Matrix3d h_;
  Eigen::Matrix3d h_inv_;
  Similarity2D t_local_;
  Similarity2D t_world_;
  double condition_;
  std::optional<DistortionParams> distortion_;
};

/// Frobenius-normalizes h and flips the sign so h(2,2) >= 0 (or the first
/// non-zero entry is positive when h(2,2) is zero).
Eigen::Matrix3d normalize_homography(const Eigen::Matrix3d& h);

/// Projective division with the horizon guard |w3| < 1e-12.
Eigen::Vector2d project(const Eigen::Matrix3d& m, const Eigen::Vector2d& p);

/**
 * Direct linear transform on Hartley-normalized coordinates.
 *
 * Requires at least four correspondences. The condition estimate is
 * sigma_max / sigma_8 of the 2N x 9 design matrix; when sigma_8 vanishes
 * relative to sigma_max, or either point set is collinear, a DegenerateError
 * is thrown.
 */
PlanarMap estimate_homography(std::span<const Correspondence> corr,
                              std::optional<DistortionParams> distortion = std::nullopt);

// Layered ("linear MLP") evaluation of a PlanarMap.
struct AffineLayer {
  Eigen::Matrix3d m;
};
struct HomogeneousDivideLayer {};
struct UndistortLayer {
  DistortionParams params;
};
using Layer = std::variant<UndistortLayer, AffineLayer, HomogeneousDivideLayer>;

class LayerStack {
public:
  explicit LayerStack(std::vector<Layer> layers) : layers_(std::move(layers)) {}

  const std::vector<Layer>& layers() const { return layers_; }
  LocalPoint evaluate(const PixelPoint& p) const;

private:
  std::vector<Layer> layers_;
};

/// [undistort?] -> T_local -> normalized H -> T_world^-1 -> divide.
LayerStack as_linear_layers(const PlanarMap& map);

}  // namespace seapos
