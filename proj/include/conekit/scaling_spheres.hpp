#pragma once

#include "conekit/geometry.hpp"
#include "conekit/grid_function.hpp"
#include "conekit/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace conekit {

// ---------------------------------------------------------------------------
// Exponents and the bootstrap recurrence
// ---------------------------------------------------------------------------

struct ExponentParams {
  int n = 3;
  double s = 1.0;
  double a = 0.0;
  double p = 1.0;
};

/// (n + 2s + 2a) / (n - 2s), or +inf when n = 2s. Throws
/// std::invalid_argument unless a > -2s (2s < n) or a > -n (2s = n).
double p_critical(int n, double s, double a);
inline double p_critical(const ExponentParams& e) { return p_critical(e.n, e.s, e.a); }

/// Sign conventions of the recurrence:
///   DilateOutward      mu_{k+1} = p mu_k + (2s + a)
///   DilateFundamental  mu_{k+1} = p mu_k - (2s + a)
///   ShrinkInward       mu_{k+1} = p mu_k + (2s + a)
enum class BootstrapDirection { DilateOutward, DilateFundamental, ShrinkInward };
enum class Verdict { DivergesPlus, DivergesMinus, FixedPoint, Converges };

std::string_view to_string(BootstrapDirection d);
std::string_view to_string(Verdict v);
BootstrapDirection bootstrap_direction_from_string(std::string_view name);

struct BootstrapRun {
  ExponentParams params;
  double mu0 = 0.0;
  BootstrapDirection direction = BootstrapDirection::DilateOutward;
  /// mu_0, ..., mu_K.
  std::vector<double> sequence;
  /// Fixed point of the affine map (nullopt for p = 1).
  std::optional<double> fixed_point;
  Verdict verdict = Verdict::FixedPoint;
};

/// Iterates the recurrence K times. The verdict compares mu0 with the fixed
/// point (relative tolerance 1e-12): the deviation from it is multiplied by
/// p >= 1 at every step.
BootstrapRun bootstrap(const ExponentParams& params, double mu0, BootstrapDirection direction, int K);

nlohmann::json to_json(const BootstrapRun& run);

// ---------------------------------------------------------------------------
// Kelvin pullback and omega^lambda
// ---------------------------------------------------------------------------

/// (lambda / |x - P|)^{order_exp} u(x^lambda). Throws std::domain_error at x = P.
template <typename F>
double kelvin_value(const F& u, const Point& x, const Point& P, double lambda, double order_exp) {
  const Point xl = kelvin_point(x, P, lambda);
  return std::pow(lambda / (x - P).norm(), order_exp) * u(xl);
}

/// u_lambda sampled on the nodes of `target`.
template <typename F>
GridFunction kelvin_pullback(const F& u, const Point& P, double lambda, double order_exp,
                             GridLayoutPtr target) {
  return GridFunction::sample(std::move(target), [&](const Point& x) {
    return kelvin_value(u, x, P, lambda, order_exp);
  });
}

enum class Side { Inside, Outside };
enum class SphereMotion { Dilate, Shrink };

std::string_view to_string(SphereMotion m);

/// omega^lambda = u_lambda - u at scattered points.
struct OmegaSamples {
  Eigen::MatrixXd points;
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
  double min() const { return values.size() ? values.minCoeff() : kInf; }
  double max() const { return values.size() ? values.maxCoeff() : -kInf; }
};

/// Inside: omega^lambda at the candidates x with 0 < |x - P| < lambda.
/// Outside: omega^lambda at x = y^lambda for the candidates y with
/// |y - P| > lambda, i.e. on (Omega \ B_lambda)^lambda; u(y) is used as the
/// exact value of u(x^lambda). With `dom`, points outside Omega are dropped.
template <typename F>
OmegaSamples omega_lambda(const F& u, const Point& P, double lambda, double order_exp, Side side,
                          const Eigen::MatrixXd& candidates, const DomainSpec* dom = nullptr) {
  if (!(lambda > 0)) throw std::invalid_argument("omega_lambda: lambda must be positive");
  std::vector<int> keep;
  for (int j = 0; j < candidates.cols(); ++j) {
    const double r = (candidates.col(j) - P).norm();
    if (side == Side::Inside ? (r > 0 && r < lambda) : (r > lambda)) keep.push_back(j);
  }
  OmegaSamples out;
  out.points.resize(P.size(), static_cast<Eigen::Index>(keep.size()));
  out.values.resize(static_cast<Eigen::Index>(keep.size()));
  int m = 0;
  for (int j : keep) {
    const Point c = candidates.col(j);
    if (side == Side::Inside) {
      if (dom && !dom->contains(c)) continue;
      out.points.col(m) = c;
      out.values(m) = kelvin_value(u, c, P, lambda, order_exp) - u(c);
    } else {
      const Point x = kelvin_point(c, P, lambda);
      if (dom && (!dom->contains(x) || !dom->contains(c))) continue;
      out.points.col(m) = x;
      out.values(m) = std::pow(lambda / (x - P).norm(), order_exp) * u(c) - u(x);
    }
    ++m;
  }
  out.points.conservativeResize(Eigen::NoChange, m);
  out.values.conservativeResize(m);
  return out;
}

/// omega^lambda for a GridFunction with the candidates taken from its nodes
/// and order_exp = n - 2s.
OmegaSamples omega_lambda(const GridFunction& u, const Point& P, double lambda, double s, Side side);

struct Lambda0Report {
  SphereMotion motion = SphereMotion::Dilate;
  /// Last grid value (in the direction of motion) for which every tested
  /// mu passed.
  double lambda0 = 0.0;
  /// First grid value that failed, if any.
  std::optional<double> first_failure;
  /// Signed margin there (min omega for Dilate, -max omega for Shrink).
  std::optional<double> min_margin_at_failure;
  /// The first tested lambda already failed; lambda0 is the grid endpoint.
  bool empty_admissible = false;
  double tol = 0.0;
  std::vector<double> grid;
  std::vector<double> margins;
};

nlohmann::json to_json(const Lambda0Report& r);

/// Grid-resolved lambda_0.
///   Dilate: sup over the ascending grid of lambda with min omega^mu >= -tol
///           on Omega cap B_mu for all grid mu <= lambda.
///   Shrink: inf over the grid of lambda with max omega^mu <= tol on
///           (Omega \ B_mu)^mu for all grid mu >= lambda.
/// tol = 1e-10 * u_sup.
template <typename F>
Lambda0Report find_lambda0(const F& u, const Point& P, double order_exp, SphereMotion motion,
                           const std::vector<double>& grid, const Eigen::MatrixXd& candidates,
                           double u_sup, const DomainSpec* dom = nullptr) {
  if (grid.empty()) throw std::invalid_argument("find_lambda0: empty lambda grid");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("find_lambda0: lambda grid must be sorted");
  }
  Lambda0Report rep;
  rep.motion = motion;
  rep.grid = grid;
  rep.tol = 1e-10 * u_sup;
  rep.margins.assign(grid.size(), 0.0);
  const Side side = motion == SphereMotion::Dilate ? Side::Inside : Side::Outside;
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const OmegaSamples om = omega_lambda(u, P, grid[i], order_exp, side, candidates, dom);
    rep.margins[i] = motion == SphereMotion::Dilate ? om.min() : -om.max();
  });
  const int m = static_cast<int>(grid.size());
  auto index = [&](int step) { return motion == SphereMotion::Dilate ? step : m - 1 - step; };
  int last_ok = -1;
  for (int step = 0; step < m; ++step) {
    const int i = index(step);
    if (rep.margins[i] >= -rep.tol) {
      last_ok = i;
      continue;
    }
    rep.first_failure = grid[i];
    rep.min_margin_at_failure = rep.margins[i];
    break;
  }
  if (last_ok < 0) {
    rep.empty_admissible = true;
    rep.lambda0 = grid[index(0)];
  } else {
    rep.lambda0 = grid[last_ok];
  }
  return rep;
}

}  // namespace conekit
