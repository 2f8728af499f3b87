#include "seapos/planar_map.hpp"

#include <cmath>
#include <sstream>

#include "seapos/error.hpp"

namespace seapos {
namespace {

constexpr double kHorizonEps = 1e-12;
// Relative threshold on sigma_8 / sigma_max below which the DLT is rank deficient.
constexpr double kRankTolerance = 1e-10;
constexpr double kCollinearTolerance = 1e-9;

bool finite(const PixelPoint& p) { return std::isfinite(p.u) && std::isfinite(p.v); }

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d ab = b - a;
  const Eigen::Vector2d ac = c - a;
  return ab.x() * ac.y() - ab.y() * ac.x();
}

// Points are expected Hartley-normalized so the tolerances are scale free.
bool collinear(std::span<const Eigen::Vector2d> pts) {
  if (pts.size() == 4) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        for (std::size_t k = j + 1; k < 4; ++k) {
          if (std::abs(cross(pts[i], pts[j], pts[k])) < kCollinearTolerance) return true;
        }
      }
    }
    return false;
  }
  Eigen::MatrixXd centered(pts.size(), 2);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) centered.row(static_cast<Eigen::Index>(i)) = (pts[i] - mean).transpose();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& s = svd.singularValues();
  return s(1) < kCollinearTolerance * s(0);
}

}  // namespace

Similarity2D::Similarity2D(double scale, Eigen::Vector2d translation) : scale_(scale), translation_(std::move(translation)) {
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorCode::InvalidArgument, "similarity scale must be positive");
}

Eigen::Matrix3d Similarity2D::matrix() const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(1, 1) = scale_;
  m.block<2, 1>(0, 2) = translation_;
  return m;
}

Eigen::Matrix3d Similarity2D::inverse_matrix() const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(1, 1) = 1.0 / scale_;
  m.block<2, 1>(0, 2) = -translation_ / scale_;
  return m;
}

Similarity2D hartley_normalization(std::span<const Eigen::Vector2d> points) {
  if (points.size() < 2) fail(ErrorCode::Degenerate, "normalization needs at least two points");
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  double sq = 0.0;
  for (const auto& p : points) sq += (p - centroid).squaredNorm();
  const double rms = std::sqrt(sq / static_cast<double>(points.size()));
  if (!(rms > 0.0)) throw DegenerateError("all points are identical", std::numeric_limits<double>::infinity());
  const double s = std::sqrt(2.0) / rms;
  return {s, -s * centroid};
}

PixelPoint undistort(const DistortionParams& d, const PixelPoint& p) {
  const double x = (p.u - d.cx) / d.f;
  const double y = (p.v - d.cy) / d.f;
  const double r2 = x * x + y * y;
  const double g = 1.0 + d.k1 * r2 + d.k2 * r2 * r2;
  return {d.cx + d.f * x * g, d.cy + d.f * y * g};
}

PixelPoint distort(const DistortionParams& d, const PixelPoint& p) {
  const double x = (p.u - d.cx) / d.f;
  const double y = (p.v - d.cy) / d.f;
  const double ru = std::hypot(x, y);
  if (ru == 0.0 || (d.k1 == 0.0 && d.k2 == 0.0)) return p;
  double r = ru;
  for (int it = 0; it < 50; ++it) {
    const double r2 = r * r;
    const double g = r * (1.0 + d.k1 * r2 + d.k2 * r2 * r2) - ru;
    const double dg = 1.0 + 3.0 * d.k1 * r2 + 5.0 * d.k2 * r2 * r2;
    if (dg == 0.0) break;
    const double step = g / dg;
    r -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, r)) break;
  }
  const double s = r / ru;
  return {d.cx + d.f * x * s, d.cy + d.f * y * s};
}

Eigen::Matrix3d normalize_homography(const Eigen::Matrix3d& h) {
  const double norm = h.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::Degenerate, "homography has zero or non-finite norm");
  // Skipping the division near unit norm keeps reloaded maps bit-identical.
  Eigen::Matrix3d out = std::abs(norm - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon() ? h : Eigen::Matrix3d(h / norm);
  double sign_ref = out(2, 2);
  if (sign_ref == 0.0) {
    for (int i = 0; i < 9 && sign_ref == 0.0; ++i) sign_ref = out.data()[i];
  }
  if (sign_ref < 0.0) out = -out;
  return out;
}

Eigen::Vector2d project(const Eigen::Matrix3d& m, const Eigen::Vector2d& p) {
  const Eigen::Vector3d w = m * p.homogeneous();
  if (std::abs(w.z()) < kHorizonEps) {
    std::ostringstream os;
    os << "point (" << p.x() << ", " << p.y() << ") maps to infinity";
    fail(ErrorCode::PointAtInfinity, os.str());
  }
  return w.head<2>() / w.z();
}

PlanarMap::PlanarMap(const Eigen::Matrix3d& h, Similarity2D t_local, Similarity2D t_world, double condition,
                     std::optional<DistortionParams> distortion)
    : h_(normalize_homography(h)),
      t_local_(std::move(t_local)),
      t_world_(std::move(t_world)),
      condition_(condition),
      distortion_(std::move(distortion)) {
  if (!h_.allFinite()) fail(ErrorCode::InvalidArgument, "homography is not finite");
  if (std::abs(h_.determinant()) < 1e-15) fail(ErrorCode::Degenerate, "homography is singular");
  if (distortion_ && !(distortion_->f > 0.0)) fail(ErrorCode::InvalidArgument, "distortion focal length must be positive");
  h_inv_ = h_.inverse();
}

PlanarMap PlanarMap::from_matrix(const Eigen::Matrix3d& h, std::optional<DistortionParams> distortion) {
  return {h, Similarity2D::identity(), Similarity2D::identity(), 1.0, std::move(distortion)};
}

Eigen::Matrix3d PlanarMap::normalized_h() const { return t_world_.matrix() * h_ * t_local_.inverse_matrix(); }

LocalPoint PlanarMap::apply(const PixelPoint& p) const {
  if (!finite(p)) fail(ErrorCode::InvalidArgument, "pixel is not finite");
  const PixelPoint q = distortion_ ? undistort(*distortion_, p) : p;
  const Eigen::Vector2d w = project(h_, {q.u, q.v});
  return {w.x(), w.y()};
}

PixelPoint PlanarMap::inverse_apply(const LocalPoint& w) const {
  if (!std::isfinite(w.east_m) || !std::isfinite(w.north_m)) fail(ErrorCode::InvalidArgument, "world point is not finite");
  const Eigen::Vector2d p = project(h_inv_, {w.east_m, w.north_m});
  const PixelPoint q{p.x(), p.y()};
  return distortion_ ? distort(*distortion_, q) : q;
}

Eigen::Matrix2d PlanarMap::jacobian(const PixelPoint& p) const {
  const Eigen::Vector3d w = h_ * Eigen::Vector3d(p.u, p.v, 1.0);
  if (std::abs(w.z()) < kHorizonEps) fail(ErrorCode::PointAtInfinity, "jacobian evaluated on the horizon");
  const double x = w.x() / w.z();
  const double y = w.y() / w.z();
  Eigen::Matrix2d j;
  j << h_(0, 0) - x * h_(2, 0), h_(0, 1) - x * h_(2, 1), h_(1, 0) - y * h_(2, 0), h_(1, 1) - y * h_(2, 1);
  return j / w.z();
}

PlanarMap estimate_homography(std::span<const Correspondence> corr, std::optional<DistortionParams> distortion) {
  const std::size_t n = corr.size();
  if (n < 4) {
    std::ostringstream os;
    os << "homography needs at least 4 correspondences, got " << n;
    fail(ErrorCode::Arity, os.str());
  }
  std::vector<Eigen::Vector2d> pix(n);
  std::vector<Eigen::Vector2d> wld(n);
  for (std::size_t i = 0; i < n; ++i) {
    PixelPoint p = corr[i].pixel;
    if (!finite(p) || !std::isfinite(corr[i].world.east_m) || !std::isfinite(corr[i].world.north_m)) {
      fail(ErrorCode::InvalidArgument, "correspondence is not finite");
    }
    if (distortion) p = undistort(*distortion, p);
    pix[i] = {p.u, p.v};
    wld[i] = {corr[i].world.east_m, corr[i].world.north_m};
  }

  const Similarity2D t_local = hartley_normalization(pix);
  const Similarity2D t_world = hartley_normalization(wld);
  for (std::size_t i = 0; i < n; ++i) {
    pix[i] = t_local.apply(pix[i]);
    wld[i] = t_world.apply(wld[i]);
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::RowVector3d x = pix[i].homogeneous().transpose();
    const double wx = wld[i].x();
    const double wy = wld[i].y();
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.block<1, 3>(r, 3) = -x;
    a.block<1, 3>(r, 6) = wy * x;
    a.block<1, 3>(r + 1, 0) = x;
    a.block<1, 3>(r + 1, 6) = -wx * x;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double sigma8 = s(7);
  const double condition = sigma8 > 0.0 ? s(0) / sigma8 : std::numeric_limits<double>::infinity();

  if (collinear(pix) || collinear(wld)) {
    throw DegenerateError("correspondences are collinear", condition);
  }
  if (!(sigma8 > kRankTolerance * s(0))) {
    std::ostringstream os;
    os << "design matrix is rank deficient (condition " << condition << ")";
    throw DegenerateError(os.str(), condition);
  }

  const Eigen::Matrix<double, 9, 1> hv = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);
  const Eigen::Matrix3d h = t_world.inverse_matrix() * hn * t_local.matrix();
  return {h, t_local, t_world, condition, std::move(distortion)};
}

LocalPoint LayerStack::evaluate(const PixelPoint& p) const {
  Eigen::Vector3d x(p.u, p.v, 1.0);
  for (const auto& layer : layers_) {
    if (const auto* u = std::get_if<UndistortLayer>(&layer)) {
      const PixelPoint q = undistort(u->params, {x.x() / x.z(), x.y() / x.z()});
      x = {q.u, q.v, 1.0};
    } else if (const auto* a = std::get_if<AffineLayer>(&layer)) {
      x = a->m * x;
    } else {
      if (std::abs(x.z()) < kHorizonEps) fail(ErrorCode::PointAtInfinity, "layer stack reached the horizon");
      x = {x.x() / x.z(), x.y() / x.z(), 1.0};
    }
  }
  return {x.x() / x.z(), x.y() / x.z()};
}

LayerStack as_linear_layers(const PlanarMap& map) {
  std::vector<Layer> layers;
  if (map.distortion()) layers.emplace_back(UndistortLayer{*map.distortion()});
  layers.emplace_back(AffineLayer{map.t_local().matrix()});
  layers.emplace_back(AffineLayer{map.normalized_h()});
  layers.emplace_back(AffineLayer{map.t_world().inverse_matrix()});
  layers.emplace_back(HomogeneousDivideLayer{});
  return LayerStack(std::move(layers));
}

}  // namespace seapos
