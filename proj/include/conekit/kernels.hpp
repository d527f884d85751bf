#pragma once

#include "conekit/geometry.hpp"

#include <memory>
#include <optional>
#include <string_view>

namespace conekit {

/// Convention for the fractional-Laplacian constant.
///   Angular      C^{-1} = int (1 - cos zeta_1) |zeta|^{-n-2s} dzeta; symbol |xi|^{2s}.
///   PaperCycles  C^{-1} = int (1 - cos 2 pi zeta_1) |zeta|^{-n-2s} dzeta; symbol (|xi| / 2 pi)^{2s}.
enum class Normalization { Angular, PaperCycles };

std::string_view to_string(Normalization norm);
Normalization normalization_from_string(std::string_view name);

/// Constant of the fundamental solution of (-Delta)^s on R^n: c_{n,s} in
/// c_{n,s} / r^{n-2s} for 2s < n, or c in c ln(1/r) for 2s = n.
double fundamental_constant(double s, int n, Normalization norm = Normalization::Angular);

/// Fundamental solution as a function of the distance r > 0.
double fundamental_profile(double s, int n, double r, Normalization norm = Normalization::Angular);

/// Gamma_s(x, y). Throws std::domain_error for x = y and
/// std::invalid_argument unless 0 < 2s <= n.
double fundamental(double s, int n, const Point& x, const Point& y,
                   Normalization norm = Normalization::Angular);

class Kernel {
 public:
  virtual ~Kernel() = default;

  /// Checked evaluation: throws std::domain_error for x = y or points
  /// outside the closed domain.
  virtual double operator()(const Point& x, const Point& y) const = 0;

  /// Evaluation without argument checks, for quadrature loops.
  virtual double eval(const Point& x, const Point& y) const = 0;

  virtual double order() const = 0;
  virtual const DomainSpec& domain() const = 0;
  int dim() const { return domain().dim(); }
};

/// Explicit Green functions.
///   FreeSpace                    Gamma_s, 0 < 2s <= n.
///   HalfSpaceK, Ball, BallK      signed images sum (s a positive integer, 2s <= n).
///   ExteriorBallK                Kelvin transform of the BallK kernel.
///   Interval, HalfLine           s = 1/2, n = 1 logarithmic kernels.
/// `constant` replaces c_{n,s} (or c for the interval kernels, default 1).
class GreenKernel : public Kernel {
 public:
  GreenKernel(double s, DomainSpec dom, Normalization norm = Normalization::Angular,
              std::optional<double> constant = std::nullopt);

  double operator()(const Point& x, const Point& y) const override;
  double eval(const Point& x, const Point& y) const override;
  double order() const override { return s_; }
  const DomainSpec& domain() const override { return dom_; }

  Normalization normalization() const { return norm_; }
  double constant() const { return c_; }

  /// The free-space fundamental solution with this kernel's constant.
  double gamma(const Point& x, const Point& y) const;
  double gamma_r2(double r2) const;

 private:
  double s_;
  DomainSpec dom_;
  Normalization norm_;
  double c_;
  bool critical_;
};

/// Images formula on HalfSpaceK / BallK / Ball (checked evaluation).
double green_images(const GreenKernel& kernel, const Point& x, const Point& y);

/// Exterior kernel (R^2 / (|x - P| |y - P|))^{n-2s} G_BallK(x*, y*).
double green_exterior(const GreenKernel& kernel, const Point& x, const Point& y);

/// c ln((r^2 - x'y' + sqrt((r^2 - x'^2)(r^2 - y'^2))) / (r |x - y|)) on an
/// interval of half-length r (x' centred), or c ln((x + y + 2 sqrt(xy)) / |x - y|)
/// on a half-line (x measured from the origin along its direction).
double green_interval_half(const GreenKernel& kernel, const Point& x, const Point& y);

/// G^k(x, y) = int G^1(x, z) G^{k-1}(z, y) dz over a bounded domain. The
/// integral is split by the partition |z - y|^4 / (|z - x|^4 + |z - y|^4)
/// and each part uses a polar rule about its own singular point.
class IteratedKernel : public Kernel {
 public:
  IteratedKernel(std::shared_ptr<const Kernel> base, int steps, int order = 16, int layers = 3);

  double operator()(const Point& x, const Point& y) const override;
  double eval(const Point& x, const Point& y) const override;
  double order() const override { return base_->order() * steps_; }
  const DomainSpec& domain() const override { return base_->domain(); }
  int steps() const { return steps_; }
  const std::shared_ptr<const Kernel>& base() const { return base_; }

 private:
  std::shared_ptr<const Kernel> base_;
  std::shared_ptr<const Kernel> inner_;
  int steps_;
  int quad_order_;
  int layers_;
};

/// steps = 1 returns `base` itself. Throws std::invalid_argument for an
/// unbounded domain or steps < 1.
std::shared_ptr<const Kernel> green_iterated(std::shared_ptr<const Kernel> base, int steps,
                                             int order = 16, int layers = 3);

}  // namespace conekit
