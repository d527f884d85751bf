#pragma once

#include "conekit/types.hpp"

#include <memory>
#include <optional>
#include <string_view>

namespace conekit {

enum class Interp { RadialCubic, BilinearPolar, PiecewiseLinear1D };

std::string_view to_string(Interp interp);

/// Sample locations plus whatever the interpolation rule needs.
///   RadialCubic        nodes center + r_i e; u depends on |x - center| only.
///                      Cubic spline in r: clamped (s'(0) = 0) when r_0 = 0,
///                      not-a-knot otherwise; not-a-knot at r_max.
///   BilinearPolar      n = 2 tensor grid (r_i, phi_j) about center, node
///                      index i * angles + j; bilinear in (r, phi).
///   PiecewiseLinear1D  n = 1, sorted abscissae.
struct GridLayout {
  Interp interp = Interp::PiecewiseLinear1D;
  Eigen::MatrixXd nodes;  // n x N
  Point center;
  Eigen::VectorXd radii;
  Eigen::VectorXd angles;
  bool periodic = true;
  /// RadialCubic: second-derivative moments M = spline_moments * values.
  Eigen::MatrixXd spline_moments;

  int dim() const { return static_cast<int>(nodes.rows()); }
  int size() const { return static_cast<int>(nodes.cols()); }
};

using GridLayoutPtr = std::shared_ptr<const GridLayout>;

GridLayoutPtr radial_layout(const Point& center, const Eigen::VectorXd& radii,
                            const Point& direction = {});
GridLayoutPtr polar_layout(const Point& center, const Eigen::VectorXd& radii,
                           const Eigen::VectorXd& angles, bool periodic = true);
GridLayoutPtr linear_layout(const Eigen::VectorXd& x);

/// Linear functional u -> sum_j c_j u_j collected from interpolation weights.
/// For RadialCubic the spline part is collected against the moments and
/// folded back by finish().
struct InterpolationAccumulator {
  Eigen::VectorXd value_row;
  Eigen::VectorXd moment_row;

  explicit InterpolationAccumulator(int size = 0)
      : value_row(Eigen::VectorXd::Zero(size)), moment_row(Eigen::VectorXd::Zero(size)) {}

  void reset() {
    value_row.setZero();
    moment_row.setZero();
  }
  Eigen::VectorXd finish(const GridLayout& layout) const;
};

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridLayoutPtr layout, Eigen::VectorXd values);

  template <typename F>
  static GridFunction sample(GridLayoutPtr layout, F&& f) {
    Eigen::VectorXd v(layout->size());
    for (int j = 0; j < layout->size(); ++j) v(j) = f(Point(layout->nodes.col(j)));
    return GridFunction(std::move(layout), std::move(v));
  }

  const GridLayoutPtr& layout() const { return layout_; }
  const Eigen::MatrixXd& nodes() const { return layout_->nodes; }
  const Eigen::VectorXd& values() const { return values_; }
  Interp interp() const { return layout_->interp; }
  int size() const { return static_cast<int>(values_.size()); }
  int dim() const { return layout_->dim(); }
  Point node(int j) const { return layout_->nodes.col(j); }

  /// Value used outside the sampled region; without it evaluation there
  /// throws std::domain_error.
  void set_fill(std::optional<double> fill) { fill_ = fill; }
  std::optional<double> fill() const { return fill_; }

  double operator()(const Point& x) const;

  /// Adds scale * (interpolation weights at x) to acc. Returns false when x
  /// is outside the sampled region (nothing is added).
  bool accumulate(const Point& x, double scale, InterpolationAccumulator& acc) const;

  GridFunction with_values(Eigen::VectorXd values) const;

  /// Field x -> value_scale * u(scale * x + shift), i.e. nodes map to
  /// (node - shift) / scale.
  GridFunction transformed(const Point& shift, double scale, double value_scale) const;

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  GridLayoutPtr layout_;
  Eigen::VectorXd values_;
  Eigen::VectorXd moments_;
  std::optional<double> fill_;
};

}  // namespace conekit
