#include "conekit/solver.hpp"

#include "conekit/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace conekit {

std::string_view to_string(PicardMode m) {
  switch (m) {
    case PicardMode::Auto: return "Auto";
    case PicardMode::Plain: return "Plain";
    case PicardMode::Scaled: return "Scaled";
  }
  return "?";
}

IntegralOperator::IntegralOperator(std::shared_ptr<const Kernel> kernel, GridLayoutPtr layout,
                                   Nonlinearity f, const SolverConfig& cfg)
    : kernel_(std::move(kernel)), layout_(std::move(layout)), f_(std::move(f)) {
  if (!kernel_ || !layout_) throw std::invalid_argument("IntegralOperator: null kernel or layout");
  const int n = kernel_->dim();
  if (layout_->dim() != n) throw std::invalid_argument("IntegralOperator: dimension mismatch");
  if (!(f_.p >= 1)) throw std::invalid_argument("IntegralOperator: p must be >= 1");
  if (f_.center.size() == 0) f_.center = Point::Zero(n);
  std::shared_ptr<const Kernel> base = kernel_;
  if (const auto* it = dynamic_cast<const IteratedKernel*>(kernel_.get())) {
    base = it->base();
    steps_ = it->steps();
  }
  const DomainSpec& dom = base->domain();
  const int N = layout_->size();
  A_a_ = Eigen::MatrixXd::Zero(N, N);
  A_0_ = Eigen::MatrixXd::Zero(N, N);
  h_ = Eigen::VectorXd::Zero(N);
  const GridFunction probe(layout_, Eigen::VectorXd::Zero(N));
  const bool weighted = f_.a != 0.0;
  parallel_for(N, [&](int i) {
    const Point x = layout_->nodes.col(i);
    if (!dom.contains(x)) return;  // boundary or exterior node: K(u) = 0 there
    QuadOptions qo;
    qo.singular_point = x;
    qo.truncation = cfg.truncation;
    qo.layers = cfg.layers;
    const QuadratureRule rule = quadrature_for(dom, cfg.order, qo);
    InterpolationAccumulator acc0(N), acca(N);
    double h = 0.0;
    Point y(n);
    for (int q = 0; q < rule.size(); ++q) {
      y = rule.nodes.col(q);
      if (y == x) continue;
      const double g = rule.weights(q) * base->eval(x, y);
      h += g;
      probe.accumulate(y, g, acc0);
      if (weighted) probe.accumulate(y, g * std::pow((y - f_.center).norm(), f_.a), acca);
    }
    h_(i) = h;
    A_0_.row(i) = acc0.finish(*layout_).transpose();
    if (weighted) {
      A_a_.row(i) = acca.finish(*layout_).transpose();
    } else {
      A_a_.row(i) = A_0_.row(i);
    }
  });
}

Eigen::VectorXd IntegralOperator::apply(const Eigen::VectorXd& u) const {
  if (u.size() != layout_->size()) throw std::invalid_argument("IntegralOperator: size mismatch");
  if ((u.array() < 0).any()) throw std::invalid_argument("IntegralOperator: u must be non-negative");
  const Eigen::VectorXd up = f_.p == 1.0 ? u : Eigen::VectorXd(u.array().pow(f_.p));
  Eigen::VectorXd out = A_a_ * up + f_.t * h_;
  for (int k = 1; k < steps_; ++k) out = A_0_ * out;
  return out;
}

GridFunction IntegralOperator::apply(const GridFunction& u) const {
  if (u.layout() != layout_ && u.layout()->nodes != layout_->nodes) {
    throw std::invalid_argument("IntegralOperator: u lives on a different layout");
  }
  return GridFunction(layout_, apply(u.values()));
}

GridFunction apply_K(std::shared_ptr<const Kernel> kernel, const GridFunction& u, const Nonlinearity& f,
                     const SolverConfig& cfg) {
  if ((u.values().array() < 0).any()) throw std::invalid_argument("apply_K: u must be non-negative");
  const IntegralOperator op(std::move(kernel), u.layout(), f, cfg);
  return op.apply(u);
}

SolveResult picard_solve(const IntegralOperator& op, const GridFunction& initial, const SolverConfig& cfg) {
  if (!(cfg.damping > 0 && cfg.damping <= 1)) throw std::invalid_argument("picard_solve: damping in (0, 1]");
  if (!(cfg.residual_tol > 0)) throw std::invalid_argument("picard_solve: residual_tol must be positive");
  if ((initial.values().array() < 0).any()) throw std::invalid_argument("picard_solve: initial must be >= 0");
  const Nonlinearity& f = op.nonlinearity();
  const double th = cfg.damping;
  PicardMode mode = cfg.mode;
  if (mode == PicardMode::Auto) {
    mode = (f.t == 0.0 && f.p > 1.0 && initial.sup_norm() > 0) ? PicardMode::Scaled : PicardMode::Plain;
  }
  if (mode == PicardMode::Scaled && !(f.t == 0.0 && f.p > 1.0 && initial.sup_norm() > 0)) {
    throw std::invalid_argument("picard_solve: scaled iteration needs t = 0, p > 1 and nonzero data");
  }
  SolveResult res;
  res.mode = mode;
  Eigen::VectorXd u = initial.values();

  if (mode == PicardMode::Plain) {
    for (int it = 0; it < cfg.max_iters; ++it) {
      const Eigen::VectorXd Ku = op.apply(u);
      const double r = (u - Ku).cwiseAbs().maxCoeff();
      res.residuals.push_back(r);
      res.iters = it;
      if (r <= cfg.residual_tol) {
        res.converged = true;
        break;
      }
      u = (1 - th) * u + th * Ku;
      res.iters = it + 1;
      if (!(u.cwiseAbs().maxCoeff() <= cfg.divergence_threshold)) {
        res.diverged = true;
        break;
      }
    }
    res.u = GridFunction(op.layout(), u);
    return res;
  }

  const double p = f.p;
  Eigen::VectorXd v = u / u.cwiseAbs().maxCoeff();
  Eigen::VectorXd out = u;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Eigen::VectorXd T = op.apply(v);
    const double kappa = T.cwiseAbs().maxCoeff();
    if (!(kappa > 0) || !std::isfinite(kappa)) {
      res.diverged = !std::isfinite(kappa);
      break;
    }
    const double c = std::pow(kappa, -1.0 / (p - 1));
    out = c * v;
    // K(c v) = c^p T = c T / kappa.
    const double r = c * (v - T / kappa).cwiseAbs().maxCoeff();
    res.residuals.push_back(r);
    res.iters = it;
    if (!(c <= cfg.divergence_threshold)) {
      res.diverged = true;
      break;
    }
    if (r <= cfg.residual_tol) {
      res.converged = true;
      break;
    }
    v = (1 - th) * v + th * T / kappa;
    v /= v.cwiseAbs().maxCoeff();
    res.iters = it + 1;
  }
  res.u = GridFunction(op.layout(), out);
  return res;
}

nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json j;
  j["residual"] = r.residuals.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.residuals.back());
  j["sup_norm"] = r.u.size() ? r.u.sup_norm() : 0.0;
  j["iters"] = r.iters;
  j["converged"] = r.converged;
  j["diverged"] = r.diverged;
  j["mode"] = std::string(to_string(r.mode));
  return j;
}

double barrier_constant(double s, int n, Normalization norm) {
  if (!(s > 0) || n < 1) throw std::invalid_argument("barrier_constant: requires s > 0, n >= 1");
  double c = std::tgamma(0.5 * n) / (std::pow(4.0, s) * std::tgamma(1 + s) * std::tgamma(0.5 * n + s));
  if (norm == Normalization::PaperCycles) c *= std::pow(2 * kPi, 2 * s);
  return c;
}

double barrier_zeta(double s, int n, const Point& x0, double d, const Point& x, Normalization norm) {
  if (!(d > 0)) throw std::invalid_argument("barrier_zeta: d must be positive");
  if (x.size() != x0.size()) throw std::invalid_argument("barrier_zeta: dimension mismatch");
  const double q = 1.0 - (x - x0).squaredNorm() / (d * d);
  if (q <= 0) return 0.0;
  if (s == 1.0) return (d * d - (x - x0).squaredNorm()) * barrier_constant(1.0, n, norm);
  return barrier_constant(s, n, norm) * std::pow(d, 2 * s) * std::pow(q, s);
}

double lower_bound_rho(int n, double s, double p, double diam, double C_ns) {
  if (!(p > 1)) throw std::invalid_argument("lower_bound_rho: p must exceed 1");
  if (!(diam > 0)) throw std::invalid_argument("lower_bound_rho: diam must be positive");
  const double expo = 2 * s / (p - 1);
  if (s >= 2 && std::floor(s) == s) return std::pow(std::sqrt(2.0 * n) / diam, expo);
  if (!(C_ns > 0)) throw std::invalid_argument("lower_bound_rho: C_ns must be positive");
  return std::pow(1.0 / (std::pow(C_ns, 1.0 / (2 * s)) * diam), expo);
}

namespace {

// RK4 for (u, v = u'), -u'' - (n-1)/r u' = sign(u)|u|^p, from r = 0 to R.
std::vector<double> shoot(int n, double p, double R, double alpha, int steps) {
  auto rhs = [&](double r, double u, double v) {
    const double up = std::copysign(std::pow(std::abs(u), p), u);
    return r == 0.0 ? -up / n : -up - (n - 1) / r * v;
  };
  std::vector<double> us(steps + 1);
  double u = alpha, v = 0.0;
  const double h = R / steps;
  us[0] = u;
  for (int i = 0; i < steps; ++i) {
    const double r = i * h;
    const double k1u = v, k1v = rhs(r, u, v);
    const double k2u = v + 0.5 * h * k1v, k2v = rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const double k3u = v + 0.5 * h * k2v, k3v = rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const double k4u = v + h * k3v, k4v = rhs(r + h, u + h * k3u, v + h * k3v);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    us[i + 1] = u;
  }
  return us;
}

}  // namespace

RadialProfile radial_shooting_oracle(int n, double p, double R, const ShootingOptions& opts) {
  if (!(p > 1)) throw std::invalid_argument("radial_shooting_oracle: requires p > 1");
  if (n < 1 || !(R > 0) || opts.steps < 2) throw std::invalid_argument("radial_shooting_oracle: bad input");
  auto end_value = [&](double alpha) { return shoot(n, p, R, alpha, opts.steps).back(); };
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (end_value(hi) > 0) {
    lo = hi;
    hi *= 2;
    if (++guard > 200) throw std::runtime_error("radial_shooting_oracle: no sign change found");
  }
  guard = 0;
  while (end_value(lo) <= 0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 200) throw std::runtime_error("radial_shooting_oracle: no sign change found");
  }
  double mid = 0.5 * (lo + hi), val = end_value(mid);
  for (int it = 0; it < 300 && std::abs(val) >= opts.tol; ++it) {
    (val > 0 ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
    mid = 0.5 * (lo + hi);
    val = end_value(mid);
  }
  const std::vector<double> us = shoot(n, p, R, mid, opts.steps);
  const int m = std::max(2, opts.profile_nodes);
  Eigen::VectorXd radii(m), vals(m);
  for (int i = 0; i < m; ++i) {
    const double pos = static_cast<double>(i) * opts.steps / (m - 1);
    const int j = static_cast<int>(std::floor(pos));
    const double t = pos - j;
    radii(i) = R * i / (m - 1);
    vals(i) = j >= opts.steps ? us.back() : (1 - t) * us[j] + t * us[j + 1];
  }
  RadialProfile out;
  out.profile = GridFunction(radial_layout(Point::Zero(n), radii), vals);
  out.u0 = mid;
  out.sup_norm = *std::max_element(us.begin(), us.end());
  out.boundary_value = val;
  return out;
}

GridLayoutPtr ball_radial_layout(const Point& center, double R, int count) {
  if (count < 2 || !(R > 0)) throw std::invalid_argument("ball_radial_layout: bad input");
  Eigen::VectorXd radii = Eigen::VectorXd::LinSpaced(count, 0.0, R);
  return radial_layout(center, radii);
}

}  // namespace conekit
