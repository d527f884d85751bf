#include "conekit/hypotheses.hpp"

#include "conekit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace conekit {

namespace {

using Rng = std::mt19937_64;

Point random_direction(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Point w(n);
  do {
    for (int i = 0; i < n; ++i) w(i) = g(rng);
  } while (w.norm() < 1e-8);
  return w.normalized();
}

double log_uniform(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Kernel extended by zero outside the closed domain.
double kernel_ext(const Kernel& K, const Point& x, const Point& y) {
  const DomainSpec& dom = K.domain();
  if (!dom.contains_closure(x, 1e-12 * (1 + x.norm())) ||
      !dom.contains_closure(y, 1e-12 * (1 + y.norm()))) {
    return 0.0;
  }
  return K.eval(x, y);
}

struct ConeInfo {
  int k = 0;
  Frame frame;
  bool orthant = false;
};

ConeInfo cone_info(const DomainSpec& dom) {
  ConeInfo c;
  const int n = dom.dim();
  c.frame = identity_frame(n);
  if (const auto* d = dom.as<HalfSpaceK>()) c = {d->k, d->frame, true};
  if (const auto* d = dom.as<BallK>()) c = {d->k, d->frame, true};
  if (const auto* d = dom.as<ExteriorBallK>()) c = {d->k, d->frame, true};
  if (dom.as<Ball>() || dom.as<FreeSpace>()) c.orthant = true;
  return c;
}

// Directions well inside the cross-section at every radius in [r_lo, r_hi].
std::vector<Point> interior_directions(const DomainSpec& dom, const Point& P, int count, double r_lo,
                                       double r_hi, Rng& rng) {
  const int n = dom.dim();
  std::vector<Point> out;
  if (n == 1) {
    for (double sgn : {1.0, -1.0}) {
      Point w = Point::Constant(1, sgn);
      if (dom.contains(P + r_lo * w) && dom.contains(P + r_hi * w)) out.push_back(w);
    }
    return out;
  }
  const ConeInfo ci = cone_info(dom);
  std::normal_distribution<double> g;
  for (int tries = 0; tries < 100000 && static_cast<int>(out.size()) < count; ++tries) {
    Point w;
    if (ci.orthant) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z(i) = g(rng);
      for (int i = 0; i < ci.k; ++i) z(i) = std::abs(z(i)) + 0.5;
      z.normalize();
      w = ci.frame * z;
    } else {
      w = random_direction(n, rng);
    }
    bool ok = true;
    for (double t = 0.0; t <= 1.0 && ok; t += 0.125) {
      ok = dom.contains(P + std::exp(std::log(r_lo) + t * std::log(r_hi / r_lo)) * w);
    }
    if (ok) out.push_back(w);
  }
  return out;
}

std::optional<double> expected_theta(const Kernel& K, Hypothesis which) {
  const auto* gk = dynamic_cast<const GreenKernel*>(&K);
  if (!gk) return std::nullopt;
  const DomainSpec& dom = gk->domain();
  if (dom.as<HalfLine>() || dom.as<Interval>()) return 0.5;
  const int n = dom.dim();
  const double s = gk->order();
  const int k = cone_info(dom).k;
  if (which == Hypothesis::H2) return n - 2 * s + k;
  return static_cast<double>(k);
}

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double length_scale(const DomainSpec& dom, const Point& P) {
  const RadialExtent ext = radial_extent(dom, P);
  if (std::isfinite(ext.rho)) return ext.rho;
  return std::max(1.0, ext.d);
}

HypothesisReport theta_check(const Kernel& K, Hypothesis which, const Point& P,
                             const HypothesisOptions& opts, Rng& rng) {
  const DomainSpec& dom = K.domain();
  const bool far = which == Hypothesis::H2;
  const RadialExtent ext = radial_extent(dom, P);
  HypothesisReport rep;
  rep.hypothesis = which;
  rep.sampling = far ? "far-field" : "near-vertex";
  if (far && dom.bounded()) throw std::runtime_error("verify_hypotheses: H2 needs an unbounded domain");
  if (!far && !dom.contains_closure(P)) {
    throw std::runtime_error("verify_hypotheses: H2t needs the centre in the closed domain");
  }
  const double r0 = far ? std::max(1.0, 2.0 * ext.d) : 0.5 * length_scale(dom, P);
  const double r_lo = far ? 1e2 * r0 : 1e-4 * r0;
  const double r_hi = far ? 1e4 * r0 : 1e-2 * r0;
  const auto dirs = interior_directions(dom, P, opts.rays, std::min(r0, r_lo), std::max(r0, r_hi), rng);
  if (dirs.empty()) throw std::runtime_error("verify_hypotheses: no interior ray found");
  const Point x0 = P + r0 * dirs.front();
  rep.theta_expected = expected_theta(K, which);
  double theta_sum = 0.0;
  rep.min_margin = kInf;
  bool slopes_ok = true;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    std::vector<double> lr, lk;
    std::vector<double> rs(opts.ray_samples), ks(opts.ray_samples);
    for (int i = 0; i < opts.ray_samples; ++i) {
      rs[i] = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (opts.ray_samples - 1));
      ks[i] = K.eval(x0, P + rs[i] * dirs[d]);
    }
    bool positive = true;
    for (int i = 0; i < opts.ray_samples; ++i) {
      if (!(ks[i] > 0)) positive = false;
      lr.push_back(std::log(rs[i]));
      lk.push_back(std::log(std::max(ks[i], 1e-300)));
    }
    const double slope = fit_slope(lr, lk);
    const double theta = far ? -slope : slope;
    rep.fits["theta_ray_" + std::to_string(d)] = theta;
    theta_sum += theta;
    const double th = rep.theta_expected.value_or(theta);
    for (int i = 0; i < opts.ray_samples; ++i) {
      const double m = ks[i] * std::pow(rs[i], far ? th : -th);
      rep.min_margin = std::min(rep.min_margin, positive ? m : std::min(m, ks[i]));
    }
    if (rep.theta_expected && std::abs(theta - *rep.theta_expected) > opts.theta_tolerance) {
      slopes_ok = false;
    }
    if (!std::isfinite(theta)) slopes_ok = false;
  }
  rep.theta_fit = theta_sum / static_cast<double>(dirs.size());
  rep.samples = static_cast<int>(dirs.size()) * opts.ray_samples;
  rep.pass = slopes_ok && rep.min_margin > 0;
  return rep;
}

std::optional<Point> sample_shell(const DomainSpec& dom, const Point& P, double r_lo, double r_hi,
                                  Rng& rng) {
  for (int tries = 0; tries < 20000; ++tries) {
    const Point x = P + log_uniform(r_lo, r_hi, rng) * random_direction(dom.dim(), rng);
    if (dom.contains(x)) return x;
  }
  return std::nullopt;
}

HypothesisReport h1_check(const Kernel& K, const Point& P, const HypothesisOptions& opts, Rng& rng) {
  const DomainSpec& dom = K.domain();
  const int n = dom.dim();
  const double s = K.order();
  const bool critical = 2 * s >= n;
  const double scale = length_scale(dom, P);
  const RadialExtent ext = radial_extent(dom, P);
  const double r_lo = std::max(1e-3 * scale, ext.d * (1 + 1e-6));
  const double r_hi = dom.bounded() ? ext.rho : 1e2 * scale;
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < opts.samples; ++i) {
    auto x = sample_shell(dom, P, r_lo, r_hi, rng);
    auto y = sample_shell(dom, P, r_lo, r_hi, rng);
    if (!x || !y) throw std::runtime_error("verify_hypotheses: cannot sample the domain");
    if (*x == *y) continue;
    pairs.emplace_back(*x, *y);
  }
  std::vector<double> kv(pairs.size());
  parallel_for(static_cast<int>(pairs.size()),
               [&](int i) { kv[i] = K.eval(pairs[i].first, pairs[i].second); });
  HypothesisReport rep;
  rep.hypothesis = Hypothesis::H1;
  rep.sampling = "pairs";
  rep.samples = static_cast<int>(pairs.size());
  rep.min_margin = kInf;
  for (double v : kv) rep.min_margin = std::min(rep.min_margin, v);
  if (!critical) {
    double c2 = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      c2 = std::max(c2, kv[i] * std::pow((pairs[i].first - pairs[i].second).norm(), n - 2 * s));
    }
    rep.fits["C2"] = c2;
    rep.pass = rep.min_margin > opts.tolerance && std::isfinite(c2);
  } else {
    auto base = [&](std::size_t i) {
      const Point& x = pairs[i].first;
      const Point& y = pairs[i].second;
      return (1 + (x - P).norm()) * (1 + (y - P).norm()) / (x - y).norm();
    };
    double bmin = kInf;
    for (std::size_t i = 0; i < pairs.size(); ++i) bmin = std::min(bmin, base(i));
    const double c0 = std::exp(1.0) / bmin;
    double c1 = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) c1 = std::max(c1, kv[i] / std::log(c0 * base(i)));
    rep.fits["C0"] = c0;
    rep.fits["C1"] = c1;
    rep.pass = rep.min_margin > opts.tolerance && std::isfinite(c1);
  }
  return rep;
}

struct H3Sample {
  double lambda;
  Point x, y;
};

HypothesisReport h3_check(const Kernel& K, Hypothesis which, const Point& P,
                          const HypothesisOptions& opts, Rng& rng) {
  const DomainSpec& dom = K.domain();
  const int n = dom.dim();
  const double beta = n - 2 * K.order();
  const RadialExtent ext = radial_extent(dom, P);
  bool outer = false;
  if (which == Hypothesis::H3) {
    const double lo = std::max(ext.d, 1e-3 * length_scale(dom, P));
    const double hi = std::isfinite(ext.rho) ? ext.rho : 1e3 * std::max(1.0, ext.d);
    std::vector<double> grid;
    for (int i = 0; i <= 64; ++i) grid.push_back(lo * std::pow(hi / lo, i / 64.0) * (1 + 1e-9));
    const MssTag tag = classify_mss(dom, P, grid).tag;
    outer = tag == MssTag::OuterGRC || tag == MssTag::Both;
  }
  HypothesisReport rep;
  rep.hypothesis = which;
  rep.sampling = outer ? "outer" : "inner";

  std::vector<H3Sample> samples;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < opts.samples; ++i) {
    bool found = false;
    for (int tries = 0; tries < 2000 && !found; ++tries) {
      H3Sample smp;
      if (outer) {
        const double base = std::max(ext.d, 1e-2 * length_scale(dom, P));
        smp.lambda = ext.d > 0 ? ext.d * (1 + 4 * unif(rng) + 1e-6) : log_uniform(0.1 * base, 10 * base, rng);
        auto x = sample_shell(dom, P, smp.lambda * (1 + 1e-9), 4 * smp.lambda, rng);
        auto y = sample_shell(dom, P, smp.lambda * (1 + 1e-9), 8 * smp.lambda, rng);
        if (!x || !y) continue;
        if (!dom.contains(kelvin_point(*x, P, smp.lambda))) continue;
        smp.x = *x;
        smp.y = *y;
      } else {
        if (!std::isfinite(ext.rho)) {
          smp.lambda = log_uniform(0.1, 10.0, rng);
        } else {
          smp.lambda = ext.rho * (0.02 + 0.97 * unif(rng));
        }
        auto x = sample_shell(dom, P, 1e-3 * smp.lambda, smp.lambda * (1 - 1e-9), rng);
        auto y = sample_shell(dom, P, 1e-3 * smp.lambda, smp.lambda * (1 - 1e-9), rng);
        if (!x || !y) continue;
        if (!dom.contains(kelvin_point(*y, P, smp.lambda))) continue;
        smp.x = *x;
        smp.y = *y;
      }
      if (smp.x == smp.y) continue;
      samples.push_back(smp);
      found = true;
    }
    if (!found) throw std::runtime_error("verify_hypotheses: empty admissible sample set");
  }

  std::vector<double> m1(samples.size()), m2(samples.size());
  parallel_for(static_cast<int>(samples.size()), [&](int i) {
    const H3Sample& sm = samples[i];
    const double lam = sm.lambda;
    const Point xl = kelvin_point(sm.x, P, lam), yl = kelvin_point(sm.y, P, lam);
    const double rx = (sm.x - P).norm(), ry = (sm.y - P).norm();
    const double lhs = K.eval(sm.x, sm.y) - std::pow(lam / rx, beta) * kernel_ext(K, xl, sm.y);
    m1[i] = lhs;
    const double rhs = std::pow(lam * lam / (rx * ry), beta) * kernel_ext(K, xl, yl) -
                       std::pow(lam / ry, beta) * kernel_ext(K, sm.x, yl);
    m2[i] = lhs - rhs;
  });
  rep.samples = static_cast<int>(samples.size());
  rep.min_margin = *std::min_element(m1.begin(), m1.end());
  rep.fits["min_margin_second"] = *std::min_element(m2.begin(), m2.end());
  rep.pass = rep.min_margin >= opts.tolerance;
  return rep;
}

}  // namespace

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3: return "H3";
    case Hypothesis::H2t: return "H2t";
    case Hypothesis::H3t: return "H3t";
  }
  return "?";
}

Hypothesis hypothesis_from_string(std::string_view name) {
  for (Hypothesis h : {Hypothesis::H1, Hypothesis::H2, Hypothesis::H3, Hypothesis::H2t, Hypothesis::H3t}) {
    if (to_string(h) == name) return h;
  }
  throw std::invalid_argument("unknown hypothesis: " + std::string(name));
}

nlohmann::json to_json(const HypothesisReport& r) {
  nlohmann::json j;
  j["hypothesis"] = std::string(to_string(r.hypothesis));
  j["min_margin"] = r.min_margin;
  j["theta_fit"] = r.theta_fit ? nlohmann::json(*r.theta_fit) : nlohmann::json(nullptr);
  j["theta_expected"] = r.theta_expected ? nlohmann::json(*r.theta_expected) : nlohmann::json(nullptr);
  j["pass"] = r.pass;
  j["sampling"] = r.sampling;
  j["samples"] = r.samples;
  j["fits"] = r.fits;
  return j;
}

Point domain_center(const DomainSpec& dom) {
  Point c = Point::Zero(dom.dim());
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ball>) {
          c = d.center;
        } else if constexpr (std::is_same_v<T, HalfSpaceK> || std::is_same_v<T, BallK> ||
                             std::is_same_v<T, ExteriorBallK> || std::is_same_v<T, TruncatedCone>) {
          c = d.vertex;
        } else if constexpr (std::is_same_v<T, HalfLine>) {
          c(0) = d.origin;
        } else if constexpr (std::is_same_v<T, Interval>) {
          c(0) = d.a;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          c = Point(d.vertices.front());
        }
      },
      dom.kind());
  return c;
}

HypothesisReport verify_hypotheses(const Kernel& kernel, Hypothesis which, const HypothesisOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("verify_hypotheses: samples must be >= 1");
  Rng rng(opts.seed);
  const Point P = opts.center.value_or(domain_center(kernel.domain()));
  switch (which) {
    case Hypothesis::H1: return h1_check(kernel, P, opts, rng);
    case Hypothesis::H2:
    case Hypothesis::H2t: return theta_check(kernel, which, P, opts, rng);
    case Hypothesis::H3:
    case Hypothesis::H3t: return h3_check(kernel, which, P, opts, rng);
  }
  throw std::invalid_argument("verify_hypotheses: unknown hypothesis");
}

}  // namespace conekit
