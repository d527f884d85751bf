#pragma once

#include "conekit/grid_function.hpp"
#include "conekit/kernels.hpp"
#include "conekit/quadrature.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace conekit {

/// f(y, u) = |y - P|^a u^p + t.
struct Nonlinearity {
  double a = 0.0;
  double p = 1.0;
  double t = 0.0;
  Point center;
};

enum class PicardMode { Auto, Plain, Scaled };

std::string_view to_string(PicardMode m);

struct SolverConfig {
  int max_iters = 500;
  /// Damping theta_d in (0, 1].
  double damping = 1.0;
  double residual_tol = 1e-8;
  /// Order of the node-centred polar rule and its dyadic layers.
  int order = 16;
  int layers = 3;
  /// Truncation radius for unbounded domains.
  std::optional<double> truncation;
  double divergence_threshold = 1e12;
  PicardMode mode = PicardMode::Auto;
};

/// u -> K(u)(x_i) = int G(x_i, y) f(y, u(y)) dy at the nodes of a layout, by
/// product integration: the kernel times each interpolation basis function
/// is integrated once with a rule centred at x_i, giving dense matrices.
/// u is extended by zero outside the sampled region. For an IteratedKernel
/// of s steps over G^1 the composition A_0^{s-1} (A_a u^p + t h) is used.
class IntegralOperator {
 public:
  IntegralOperator(std::shared_ptr<const Kernel> kernel, GridLayoutPtr layout, Nonlinearity f,
                   const SolverConfig& cfg = {});

  /// Throws std::invalid_argument when u has a negative value.
  GridFunction apply(const GridFunction& u) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

  /// sum_j A_ij v_j with the weighted matrix (v = u^p), before composition.
  const Eigen::MatrixXd& weighted_matrix() const { return A_a_; }
  /// int G(x_i, y) dy.
  const Eigen::VectorXd& torsion() const { return h_; }

  const GridLayoutPtr& layout() const { return layout_; }
  const Nonlinearity& nonlinearity() const { return f_; }
  int compositions() const { return steps_ - 1; }

 private:
  std::shared_ptr<const Kernel> kernel_;
  GridLayoutPtr layout_;
  Nonlinearity f_;
  int steps_ = 1;
  Eigen::MatrixXd A_a_;
  Eigen::MatrixXd A_0_;
  Eigen::VectorXd h_;
};

/// One-shot application (assembles the operator).
GridFunction apply_K(std::shared_ptr<const Kernel> kernel, const GridFunction& u, const Nonlinearity& f,
                     const SolverConfig& cfg = {});

struct SolveResult {
  GridFunction u;
  /// sup |u_k - K(u_k)| per iteration.
  std::vector<double> residuals;
  int iters = 0;
  bool converged = false;
  bool diverged = false;
  PicardMode mode = PicardMode::Plain;
};

/// Damped fixed-point iteration.
///   Plain   u <- (1 - theta) u + theta K(u).
///   Scaled  for t = 0, p > 1: the same damped step on v = u / |u|_inf with
///           T(v) = K(v) / |K(v)|_inf, then u = |K(v)|_inf^{-1/(p-1)} v.
///   Auto    Scaled when t = 0, p > 1 and the initial guess is nonzero.
/// Stops when the residual is <= residual_tol, after max_iters, or when
/// |u|_inf exceeds the divergence threshold.
SolveResult picard_solve(const IntegralOperator& op, const GridFunction& initial, const SolverConfig& cfg);

nlohmann::json to_json(const SolveResult& r);

/// C_{n,s} with (-Delta)^s [C (d^2 - |x|^2)_+^s] = 1; equals 1/(2n) for s = 1.
double barrier_constant(double s, int n, Normalization norm = Normalization::Angular);

/// zeta_s(x) = C_{n,s} d^{2s} (1 - |x - x0|^2 / d^2)_+^s.
double barrier_zeta(double s, int n, const Point& x0, double d, const Point& x,
                    Normalization norm = Normalization::Angular);

/// (1 / (C^{1/(2s)} diam))^{2s/(p-1)} for s <= 1; (sqrt(2n) / diam)^{2s/(p-1)}
/// for integer s >= 2. Throws std::invalid_argument for p <= 1.
double lower_bound_rho(int n, double s, double p, double diam, double C_ns);

struct ShootingOptions {
  int steps = 4000;
  double tol = 1e-10;
  int profile_nodes = 201;
};

struct RadialProfile {
  GridFunction profile;
  double u0 = 0.0;
  double sup_norm = 0.0;
  double boundary_value = 0.0;
};

/// -u'' - (n-1)/r u' = u^p, u'(0) = 0, u(R) = 0 by RK4 and bisection on u(0).
/// Throws std::invalid_argument for p <= 1 and std::runtime_error when no
/// sign change is bracketed.
RadialProfile radial_shooting_oracle(int n, double p, double R, const ShootingOptions& opts = {});

/// Radial layout on [0, R] with `count` equispaced radii about `center`.
GridLayoutPtr ball_radial_layout(const Point& center, double R, int count);

}  // namespace conekit
