#include "conekit/frac_laplacian.hpp"

#include "conekit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conekit {

namespace {

// int_0^inf (1 - cos t) t^{-1-2s} dt.
double cosine_moment(double s) {
  // [0, 1]: termwise integration of the Taylor series of 1 - cos t.
  double head = 0.0, fact = 1.0;
  for (int k = 1; k <= 20; ++k) {
    fact *= (2.0 * k - 1) * (2.0 * k);
    head += (k % 2 ? 1.0 : -1.0) / (fact * (2.0 * k - 2 * s));
  }
  // [1, T] with T = 2 pi M by Gauss panels.
  const int M = 200;
  const double T = 2 * kPi * M;
  const auto [gx, gw] = gauss_legendre(20, 0.0, 1.0);
  double body = 0.0;
  const int panels = 4 * M;
  std::vector<double> cuts{1.0};
  for (int j = 1; j <= panels; ++j) {
    const double c = j * (T / panels);
    if (c > 1.0) cuts.push_back(c);
  }
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    for (int i = 0; i < gx.size(); ++i) {
      const double t = a + (b - a) * gx(i);
      body += gw(i) * (b - a) * (1 - std::cos(t)) * std::pow(t, -1 - 2 * s);
    }
  }
  // [T, inf): int t^{-1-2s} minus the asymptotic expansion of int cos(t) t^{-alpha}.
  const double alpha = 1 + 2 * s;
  const double tail = std::pow(T, -2 * s) / (2 * s) -
                      (alpha * std::pow(T, -alpha - 1) -
                       alpha * (alpha + 1) * (alpha + 2) * std::pow(T, -alpha - 3));
  return head + body + tail;
}

// int_{S^{n-1}} |w_1|^{2s} dw.
double angular_moment(double s, int n) {
  return 2 * std::pow(kPi, 0.5 * (n - 1)) * std::tgamma(s + 0.5) / std::tgamma(0.5 * n + s);
}

void add_graded(std::vector<double>& cuts, double center, double width, int layers, double lo,
                double hi) {
  for (int j = 0; j <= layers; ++j) {
    const double d = width * std::ldexp(1.0, -j);
    for (double c : {center - d, center + d}) {
      if (c > lo && c < hi) cuts.push_back(c);
    }
  }
  if (center > lo && center < hi) cuts.push_back(center);
}

}  // namespace

double normalization_const(double s, int n, Normalization norm) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("normalization_const: s must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("normalization_const: n must be >= 1");
  double c = 1.0 / (cosine_moment(s) * angular_moment(s, n));
  if (norm == Normalization::PaperCycles) c *= std::pow(2 * kPi, -2 * s);
  return c;
}

double frac_laplacian(const Field& u, double s, const Point& x, const FracLapConfig& cfg) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("frac_laplacian: s must lie in (0, 1)");
  if (!(cfg.r_split > 0) || cfg.inner_order < 4 || cfg.outer_order < 4 ||
      !(cfg.tail_radius > cfg.r_split) || !(cfg.outer_panel > 0) || cfg.inner_layers < 1) {
    throw std::invalid_argument("frac_laplacian: invalid configuration");
  }
  const int n = static_cast<int>(x.size());
  const double C = normalization_const(s, n, cfg.normalization);
  const double ux = u(x);

  // Radial breakpoints shared by all directions.
  const double eps = cfg.r_split * std::ldexp(1.0, -cfg.inner_layers);
  std::vector<double> cuts;
  for (int j = 0; j <= cfg.inner_layers; ++j) cuts.push_back(cfg.r_split * std::ldexp(1.0, -j));
  const int outer = static_cast<int>(std::ceil((cfg.tail_radius - cfg.r_split) / cfg.outer_panel));
  for (int j = 1; j <= outer; ++j) {
    cuts.push_back(std::min(cfg.tail_radius, cfg.r_split + j * cfg.outer_panel));
  }
  if (n == 1) {
    for (double k : cfg.kinks) {
      const double tk = std::abs(k - x(0));
      if (tk < 1e-12) throw std::domain_error("frac_laplacian: x is at a kink of u");
      add_graded(cuts, tk, std::min(cfg.outer_panel, 0.5 * tk), cfg.kink_layers, eps,
                 cfg.tail_radius);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto [ix, iw] = gauss_legendre(cfg.inner_order, 0.0, 1.0);
  const auto [ox, ow] = gauss_legendre(cfg.outer_order, 0.0, 1.0);
  const QuadratureRule dirs = sphere_rule(n, cfg.angular_order);
  Point yp(n), ym(n);

  double total = 0.0;
  for (int d = 0; d < dirs.size(); ++d) {
    const Point w = dirs.nodes.col(d);
    auto D = [&](double t) {
      yp = x + t * w;
      ym = x - t * w;
      return 2 * ux - u(yp) - u(ym);
    };
    double J = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double a = cuts[p], b = cuts[p + 1];
      const bool inner = b <= cfg.r_split;
      const Eigen::VectorXd& gx = inner ? ix : ox;
      const Eigen::VectorXd& gw = inner ? iw : ow;
      for (int i = 0; i < gx.size(); ++i) {
        const double t = a + (b - a) * gx(i);
        J += gw(i) * (b - a) * D(t) * std::pow(t, -1 - 2 * s);
      }
    }
    // Innermost [0, eps]: D(t) ~ a t^2.
    const double a2 = D(eps) / (eps * eps);
    J += a2 * std::pow(eps, 2 - 2 * s) / (2 - 2 * s);
    // Tail [R, inf): u(x +- t w) replaced by the far-field mean.
    J += 2 * (ux - cfg.far_field_mean) * std::pow(cfg.tail_radius, -2 * s) / (2 * s);
    total += dirs.weights(d) * J;
  }
  return C * 0.5 * total;
}

}  // namespace conekit
