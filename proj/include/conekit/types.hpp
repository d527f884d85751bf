#pragma once

#include <Eigen/Dense>

#include <limits>
#include <numbers>
#include <vector>

namespace conekit {

/// A point (or direction) of R^n; n is the vector length.
using Point = Eigen::VectorXd;

/// Orthogonal frame. Column i is the i-th local axis, so x = P + O z.
using Frame = Eigen::MatrixXd;

using PointList = std::vector<Point>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace conekit
