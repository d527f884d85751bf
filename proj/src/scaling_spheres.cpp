#include "conekit/scaling_spheres.hpp"

#include <stdexcept>
#include <string>

namespace conekit {

double p_critical(int n, double s, double a) {
  if (n < 1 || !(s > 0) || 2 * s > n) throw std::invalid_argument("p_critical: requires 0 < 2s <= n");
  if (2 * s == n) {
    if (!(a > -n)) throw std::invalid_argument("p_critical: requires a > -n when 2s = n");
    return kInf;
  }
  if (!(a > -2 * s)) throw std::invalid_argument("p_critical: requires a > -2s");
  return (n + 2 * s + 2 * a) / (n - 2 * s);
}

std::string_view to_string(BootstrapDirection d) {
  switch (d) {
    case BootstrapDirection::DilateOutward: return "DilateOutward";
    case BootstrapDirection::DilateFundamental: return "DilateFundamental";
    case BootstrapDirection::ShrinkInward: return "ShrinkInward";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::DivergesPlus: return "DivergesPlus";
    case Verdict::DivergesMinus: return "DivergesMinus";
    case Verdict::FixedPoint: return "FixedPoint";
    case Verdict::Converges: return "Converges";
  }
  return "?";
}

BootstrapDirection bootstrap_direction_from_string(std::string_view name) {
  for (auto d : {BootstrapDirection::DilateOutward, BootstrapDirection::DilateFundamental,
                 BootstrapDirection::ShrinkInward}) {
    if (to_string(d) == name) return d;
  }
  if (name == "+" || name == "plus") return BootstrapDirection::DilateOutward;
  if (name == "-" || name == "minus") return BootstrapDirection::DilateFundamental;
  throw std::invalid_argument("unknown bootstrap direction: " + std::string(name));
}

std::string_view to_string(SphereMotion m) { return m == SphereMotion::Dilate ? "Dilate" : "Shrink"; }

BootstrapRun bootstrap(const ExponentParams& params, double mu0, BootstrapDirection direction, int K) {
  if (K < 1) throw std::invalid_argument("bootstrap: K must be >= 1");
  p_critical(params);
  const double p = params.p;
  if (!(p >= 1)) throw std::invalid_argument("bootstrap: p must be >= 1");
  const double shift = (direction == BootstrapDirection::DilateFundamental ? -1.0 : 1.0) *
                       (2 * params.s + params.a);
  BootstrapRun run;
  run.params = params;
  run.mu0 = mu0;
  run.direction = direction;
  run.sequence.reserve(K + 1);
  run.sequence.push_back(mu0);
  double mu = mu0;
  for (int k = 0; k < K; ++k) {
    mu = p * mu + shift;
    run.sequence.push_back(mu);
  }
  if (p == 1.0) {
    run.verdict = shift > 0 ? Verdict::DivergesPlus : shift < 0 ? Verdict::DivergesMinus : Verdict::FixedPoint;
    return run;
  }
  const double star = -shift / (p - 1);
  run.fixed_point = star;
  const double dev = mu0 - star;
  if (std::abs(dev) <= 1e-12 * std::max({1.0, std::abs(star), std::abs(mu0)})) {
    run.verdict = Verdict::FixedPoint;
  } else {
    run.verdict = dev > 0 ? Verdict::DivergesPlus : Verdict::DivergesMinus;
  }
  return run;
}

nlohmann::json to_json(const BootstrapRun& run) {
  nlohmann::json j;
  j["n"] = run.params.n;
  j["s"] = run.params.s;
  j["a"] = run.params.a;
  j["p"] = run.params.p;
  const double pc = p_critical(run.params);
  j["p_critical"] = std::isfinite(pc) ? nlohmann::json(pc) : nlohmann::json("inf");
  j["mu0"] = run.mu0;
  j["direction"] = std::string(to_string(run.direction));
  j["sequence"] = run.sequence;
  j["fixed_point"] = run.fixed_point ? nlohmann::json(*run.fixed_point) : nlohmann::json(nullptr);
  j["verdict"] = std::string(to_string(run.verdict));
  return j;
}

OmegaSamples omega_lambda(const GridFunction& u, const Point& P, double lambda, double s, Side side) {
  const double order_exp = u.dim() - 2 * s;
  return omega_lambda<GridFunction>(u, P, lambda, order_exp, side, u.nodes());
}

nlohmann::json to_json(const Lambda0Report& r) {
  nlohmann::json j;
  j["motion"] = std::string(to_string(r.motion));
  j["lambda0"] = r.lambda0;
  j["first_failure"] = r.first_failure ? nlohmann::json(*r.first_failure) : nlohmann::json(nullptr);
  j["min_margin_at_failure"] =
      r.min_margin_at_failure ? nlohmann::json(*r.min_margin_at_failure) : nlohmann::json(nullptr);
  j["empty_admissible"] = r.empty_admissible;
  j["tol"] = r.tol;
  j["grid"] = r.grid;
  j["margins"] = r.margins;
  return j;
}

}  // namespace conekit
