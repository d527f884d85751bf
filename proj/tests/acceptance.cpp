// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "conekit/blowup.hpp"
#include "conekit/frac_laplacian.hpp"
#include "conekit/hypotheses.hpp"
#include "conekit/kernels.hpp"
#include "conekit/quadrature.hpp"
#include "conekit/scaling_spheres.hpp"
#include "conekit/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace conekit;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<void(Result&)>& body) {
  Result r;
  r.detail.precision(10);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    r.pass = false;
    r.detail << "[runtime " << secs << " s >= " << time_limit << " s] ";
  }
  if (!r.pass) ++failures;
  std::printf("criterion %2d: %s  %s (%.3f s) %s\n", id, r.pass ? "PASS" : "FAIL", title, secs,
              r.detail.str().c_str());
  std::fflush(stdout);
}

Point vec(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

// Flux of -grad_y G(x, .) through the sphere |y - x| = r (central differences
// in the radial direction).
double delta_flux(const Kernel& G, const Point& x, double r) {
  const int n = static_cast<int>(x.size());
  const QuadratureRule sphere = sphere_rule(n, 24);
  const double h = 1e-3 * r;
  double flux = 0.0;
  for (int q = 0; q < sphere.size(); ++q) {
    const Point w = sphere.nodes.col(q);
    const double dG = (G.eval(x, x + (r + h) * w) - G.eval(x, x + (r - h) * w)) / (2 * h);
    flux += sphere.weights(q) * (-dG) * std::pow(r, n - 1);
  }
  return flux;
}

}  // namespace

int main() {
  criterion(1, "interval to half-line consistency", 1.0, [](Result& r) {
    const double R = 1e4;
    const GreenKernel interval(0.5, DomainSpec(Interval{0.0, 2 * R}));
    const GreenKernel half(0.5, DomainSpec(HalfLine{0.0, 1}));
    const Point x = vec({1.0}), y = vec({2.0});
    const double diff = std::abs(interval(x, y) - half(x, y));
    r.detail << "|G_(0,2r) - G_(0,inf)| = " << diff << " ";
    r.require(diff < 1e-3, "difference < 1e-3");
  });

  criterion(2, "images kernels vanish on the boundary", 5.0, [](Result& r) {
    // Quarter-plane: 500 points on each edge ray.
    const GreenKernel quarter(1.0, make_half_space_k(2, 2));
    double worst_q = 0.0;
    const Point xq = vec({0.7, 1.3});
    for (int i = 1; i <= 500; ++i) {
      const double t = 10.0 * i / 500;
      worst_q = std::max(worst_q, std::abs(quarter(xq, vec({t, 0.0}))));
      worst_q = std::max(worst_q, std::abs(quarter(xq, vec({0.0, t}))));
    }
    // Unit ball in R^3: 1000 sphere directions.
    const GreenKernel ball(1.0, make_ball_k(3, 0, 1.0));
    const Point xb = vec({0.3, 0.1, -0.2});
    double worst_b = 0.0;
    for (const Point& w : direction_grid(3, 1000)) worst_b = std::max(worst_b, std::abs(ball(xb, w)));
    r.detail << "max |G| quarter-plane = " << worst_q << ", ball = " << worst_b << " ";
    r.require(worst_q < 1e-10 && worst_b < 1e-10, "max |G| < 1e-10");
  });

  criterion(3, "delta normalization by flux", 0.0, [](Result& r) {
    struct Case {
      const char* name;
      DomainSpec dom;
      Point x;
    };
    const Case cases[] = {
        {"half-space", make_half_space_k(3, 1), vec({0.4, 0.2, -0.3})},
        {"quarter-space", make_half_space_k(3, 2), vec({0.4, 0.5, -0.3})},
        {"ball", make_ball_k(3, 0, 1.0), vec({0.3, -0.2, 0.1})},
        {"exterior-ball", make_exterior_ball_k(3, 0, 1.0), vec({1.6, 0.4, -0.5})},
    };
    for (const Case& c : cases) {
      const GreenKernel G(1.0, c.dom);
      const double f = delta_flux(G, c.x, 1e-3);
      r.detail << c.name << " = " << f << "; ";
      r.require(std::abs(f - 1.0) < 1e-3, std::string(c.name) + " flux within 1e-3");
    }
  });

  criterion(4, "hypothesis sweeps (H3 margins, theta fits)", 30.0, [](Result& r) {
    HypothesisOptions opts;
    opts.samples = 1000;
    opts.seed = 7;
    const GreenKernel ball(1.0, make_ball(Point::Zero(3), 1.0));
    const GreenKernel half(1.0, make_half_space_k(3, 1));
    for (const auto* k : {&ball, &half}) {
      const auto rep = verify_hypotheses(*k, Hypothesis::H3, opts);
      r.detail << "H3 " << k->domain().kind_name() << " (" << rep.sampling << ") min margin " << rep.min_margin
               << "; ";
      r.require(rep.min_margin >= -1e-12, "H3 margin >= -1e-12");
    }
    for (int kk : {1, 2, 3}) {
      const GreenKernel G(1.0, make_half_space_k(3, kk));
      const auto far = verify_hypotheses(G, Hypothesis::H2, opts);
      const auto near = verify_hypotheses(G, Hypothesis::H2t, opts);
      r.detail << "k=" << kk << " theta far " << *far.theta_fit << " (expect " << *far.theta_expected
               << "), near " << *near.theta_fit << " (expect " << *near.theta_expected << "); ";
      r.require(std::abs(*far.theta_fit - (3 - 2 + kk)) <= 0.05, "far-field theta = n-2s+k");
      r.require(std::abs(*near.theta_fit - kk) <= 0.05, "near-vertex theta = k");
    }
  });

  criterion(5, "bootstrap classification", 0.1, [](Result& r) {
    const double ps[] = {1, 1.5, 2, 3, 4, 4.9, 5, 5.1, 7};
    int plus = 0, fixed = 0, minus = 0;
    bool order_ok = true;
    for (double p : ps) {
      const BootstrapRun run = bootstrap({3, 1.0, 0.0, p}, -0.5, BootstrapDirection::DilateOutward, 200);
      const Verdict expected = p < 5 ? Verdict::DivergesPlus : (p == 5 ? Verdict::FixedPoint : Verdict::DivergesMinus);
      order_ok = order_ok && run.verdict == expected;
      if (run.verdict == Verdict::DivergesPlus) {
        ++plus;
        bool exceeded = false;
        for (double mu : run.sequence) exceeded = exceeded || mu > 1e6;
        if (!exceeded) {
          r.detail << "p=" << p << " reaches only mu_200 = " << run.sequence.back() << "; ";
          r.require(false, "DivergesPlus exceeds 1e6 within 200 iterations");
        }
      } else if (run.verdict == Verdict::FixedPoint) {
        ++fixed;
      } else if (run.verdict == Verdict::DivergesMinus) {
        ++minus;
      }
    }
    r.detail << "verdicts: DivergesPlus x" << plus << ", FixedPoint x" << fixed << ", DivergesMinus x" << minus << " ";
    r.require(order_ok && plus == 6 && fixed == 1 && minus == 2, "verdict multiset");
  });

  criterion(6, "fixed point on the unit ball (n=3, s=1, p=2)", 60.0, [](Result& r) {
    const auto G = std::make_shared<GreenKernel>(1.0, make_ball(Point::Zero(3), 1.0));
    const auto layout = ball_radial_layout(Point::Zero(3), 1.0, 41);
    Nonlinearity f;
    f.p = 2.0;
    f.center = Point::Zero(3);
    const SolverConfig cfg;
    const IntegralOperator op(G, layout, f, cfg);
    const SolveResult res = picard_solve(op, GridFunction(layout, op.torsion()), cfg);
    const RadialProfile oracle = radial_shooting_oracle(3, 2.0, 1.0);
    const double sup = res.u.sup_norm();
    const double rel = std::abs(sup - oracle.sup_norm) / oracle.sup_norm;
    const double rho = lower_bound_rho(3, 1.0, 2.0, 2.0, 1.0 / 6.0);
    const double residual = res.residuals.empty() ? kInf : res.residuals.back();
    bool positive = true;
    for (int j = 0; j < res.u.size(); ++j) {
      if (res.u.node(j).norm() < 1.0 - 1e-12) positive = positive && res.u.values()(j) > 0;
    }
    r.detail << "iters " << res.iters << ", residual " << residual << ", sup " << sup << " vs oracle "
             << oracle.sup_norm << " (rel " << rel << "), bound " << rho << " ";
    r.require(res.converged && residual < 1e-8 && res.iters < 500, "converged");
    r.require(positive, "positive in the interior");
    r.require(rel < 1e-3, "sup norm matches the shooting oracle");
    r.require(sup >= rho, "sup norm >= lower_bound_rho");
  });

  criterion(7, "fractional Laplacian normalization", 10.0, [](Result& r) {
    FracLapConfig cfg;
    cfg.normalization = Normalization::PaperCycles;
    const Field u = [](const Point& x) { return std::cos(2 * kPi * x(0)); };
    double worst = 0.0;
    for (double s : {0.3, 0.5, 0.7}) {
      for (double x0 : {0.0, 0.13, 0.37}) {
        const Point x = vec({x0});
        worst = std::max(worst, std::abs(frac_laplacian(u, s, x, cfg) - u(x)));
      }
    }
    const double c = normalization_const(0.5, 1, Normalization::PaperCycles);
    r.detail << "max error " << worst << ", C = " << c << " vs " << 1 / (2 * kPi * kPi) << " ";
    r.require(worst < 1e-3, "(-Delta)^s cos(2 pi x) = cos(2 pi x)");
    r.require(std::abs(c - 1 / (2 * kPi * kPi)) < 1e-6, "normalization constant");
  });

  criterion(8, "barrier constancy", 0.0, [](Result& r) {
    FracLapConfig cfg;
    cfg.kinks = {-1.0, 1.0};
    const Field zeta = [](const Point& x) { return std::sqrt(std::max(0.0, 1 - x(0) * x(0))); };
    std::vector<double> vals;
    for (double x0 : {0.0, 0.3, -0.3, 0.6, -0.6}) vals.push_back(frac_laplacian(zeta, 0.5, vec({x0}), cfg));
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    const double spread = (*hi - *lo) / std::abs(vals[0]);
    r.detail << "s=1/2 values in [" << *lo << ", " << *hi << "], relative spread " << spread << "; ";
    r.require(spread < 1e-2, "constant within 1e-2 relative");
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
      const Point x0 = Point::Zero(n);
      const double h = 1e-3;
      Point x = Point::Constant(n, 0.17);
      double lap = 0.0;
      for (int i = 0; i < n; ++i) {
        Point e = Point::Zero(n);
        e(i) = h;
        lap += (barrier_zeta(1.0, n, x0, 1.0, x + e) - 2 * barrier_zeta(1.0, n, x0, 1.0, x) +
                barrier_zeta(1.0, n, x0, 1.0, x - e)) /
               (h * h);
      }
      worst = std::max(worst, std::abs(-lap - 1.0));
    }
    r.detail << "s=1 max |-Delta zeta - 1| = " << worst << " ";
    r.require(worst < 1e-8, "-Delta zeta_1 = 1");
  });

  criterion(9, "blow-up geometry", 5.0, [](Result& r) {
    const Polygon2D square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    const BcbReport rep = bcb_check(square, Eigen::Vector2d(0, 0), {1e-1, 1e-2, 1e-3, 1e-4});
    const double h = rep.entries.back().hausdorff;
    const Polygon2D L{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    const ConeDescription c = limit_cone(L, Eigen::Vector2d(1, 1));
    r.detail << "Hausdorff at rho=1e-4: " << h << ", cone angle " << rep.cone.angle << "; L-shape angle "
             << c.angle << " (error " << std::abs(c.angle - 1.5 * kPi) << ") ";
    r.require(h < 0.01, "Hausdorff < 0.01");
    r.require(std::abs(rep.cone.angle - kPi / 2) < 1e-12, "square vertex angle pi/2");
    r.require(std::abs(c.angle - 1.5 * kPi) < 1e-12, "reentrant angle 3 pi/2");
  });

  criterion(10, "scaling-spheres engine", 0.0, [](Result& r) {
    const int n = 3;
    const double s = 1.0, m = n - 2 * s;
    const Point P = Point::Zero(n);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    Eigen::MatrixXd cand(n, 1000);
    for (int j = 0; j < cand.cols(); ++j) {
      for (int i = 0; i < n; ++i) cand(i, j) = U(rng);
    }
    // (a) omega for the fundamental-solution profile |x|^{-(n-2s)} about P = 0.
    const auto fund = [m](const Point& x) { return std::pow(x.norm(), -m); };
    double dev = 0.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (Side side : {Side::Inside, Side::Outside}) {
        const OmegaSamples om = omega_lambda(fund, P, lambda, m, side, cand);
        for (int j = 0; j < om.size(); ++j) dev = std::max(dev, std::abs(om.values(j)));
      }
    }
    r.detail << "(a) max |omega| for |x|^{-(n-2s)}: " << dev << "; ";
    r.require(dev < 1e-12, "omega = 0 for the fundamental profile");

    // (b) anti-symmetry at 1000 exact pairs for the Gaussian.
    const auto gauss = [](const Point& x) { return std::exp(-x.squaredNorm()); };
    const double lambda = 1.3;
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j < cand.cols(); ++j) {
      const Point x = cand.col(j);
      const Point xl = kelvin_point(x, P, lambda);
      const double w = kelvin_value(gauss, x, P, lambda, m) - gauss(x);
      const double wl = kelvin_value(gauss, xl, P, lambda, m) - gauss(xl);
      worst = std::max(worst, std::abs(w + std::pow(lambda / x.norm(), m) * wl));
      scale = std::max(scale, std::abs(w));
    }
    r.detail << "(b) anti-symmetry max defect " << worst << " (|omega| up to " << scale << "); ";
    r.require(worst <= 1e-10 * std::max(1.0, scale), "anti-symmetry to 1e-10");

    // (c) lambda_0 for the Gaussian (shrinking spheres) on a coarse and a 10x finer grid.
    Eigen::MatrixXd ray(n, 4000);
    for (int j = 0; j < ray.cols(); ++j) {
      const double t = std::pow(10.0, -2.0 + 3.3 * j / (ray.cols() - 1));
      const Point d = Point::Constant(n, 1.0 / std::sqrt(n));
      ray.col(j) = t * d;
    }
    auto grid = [](int count) {
      std::vector<double> g(count);
      for (int i = 0; i < count; ++i) g[i] = 0.1 + 2.9 * i / (count - 1);
      return g;
    };
    const std::vector<double> coarse = grid(30), fine = grid(291);
    const double cell = coarse[1] - coarse[0];
    const auto rc = find_lambda0(gauss, P, m, SphereMotion::Shrink, coarse, ray, 1.0);
    const auto rf = find_lambda0(gauss, P, m, SphereMotion::Shrink, fine, ray, 1.0);
    r.detail << "(c) lambda0 coarse " << rc.lambda0 << ", fine " << rf.lambda0 << ", cell " << cell << " ";
    r.require(!rc.empty_admissible && !rf.empty_admissible, "finite lambda0");
    r.require(std::abs(rc.lambda0 - rf.lambda0) <= cell + 1e-12, "refinement within one coarse cell");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
