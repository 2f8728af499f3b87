#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "seapos/error.hpp"

namespace seapos {

inline constexpr double kCovSymmetryTol = 1e-9;
inline constexpr double kCovEigenFloor = -1e-9;

template <typename Derived>
void symmetrize(Eigen::MatrixBase<Derived>& m) {
  m = (0.5 * (m + m.transpose())).eval();
}

// Throws FilterDegeneracy unless m is symmetric and PSD within tolerance.
template <typename Derived>
void check_covariance(const Eigen::MatrixBase<Derived>& m, const char* where) {
  using Mat = Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  const Mat c = m;
  if (!c.allFinite()) fail(ErrorCode::FilterDegeneracy, std::string(where) + ": covariance is not finite");
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > kCovSymmetryTol * std::max(1.0, c.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::FilterDegeneracy, std::string(where) + ": covariance is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat> es(c, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kCovEigenFloor) {
    fail(ErrorCode::FilterDegeneracy, std::string(where) + ": covariance is not positive semidefinite");
  }
}

// Continuous white-noise-acceleration model discretized over dt, for one
// (position, velocity) axis: q * [dt^3/3, dt^2/2; dt^2/2, dt].
inline Eigen::Matrix2d white_noise_acceleration(double dt, double q) {
  Eigen::Matrix2d m;
  m << dt * dt * dt / 3.0, dt * dt / 2.0, dt * dt / 2.0, dt;
  return q * m;
}

}  // namespace seapos
