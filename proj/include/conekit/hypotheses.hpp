#pragma once

#include "conekit/kernels.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace conekit {

enum class Hypothesis { H1, H2, H3, H2t, H3t };

std::string_view to_string(Hypothesis h);
Hypothesis hypothesis_from_string(std::string_view name);

struct HypothesisOptions {
  int samples = 1000;
  std::uint64_t seed = 0;
  /// Centre P; defaults to the vertex / centre / origin of the domain.
  std::optional<Point> center;
  /// Number of rays for the theta fit and samples per ray.
  int rays = 8;
  int ray_samples = 12;
  double tolerance = -1e-12;
  double theta_tolerance = 0.05;
};

struct HypothesisReport {
  Hypothesis hypothesis = Hypothesis::H1;
  /// Smallest inequality margin over the samples.
  double min_margin = 0.0;
  /// H2 / H2t: mean fitted exponent over the rays.
  std::optional<double> theta_fit;
  std::optional<double> theta_expected;
  bool pass = false;
  /// "inner" or "outer" for H3-type checks; "far-field" / "near-vertex" for fits.
  std::string sampling;
  int samples = 0;
  /// Extra fitted quantities (per-ray slopes, H1 constants, second H3 margin).
  std::map<std::string, double> fits;
};

nlohmann::json to_json(const HypothesisReport& r);

/// Default centre P of a domain.
Point domain_center(const DomainSpec& dom);

/// Samples the chosen hypothesis with a seeded generator. Throws
/// std::runtime_error when the admissible sample set is empty.
HypothesisReport verify_hypotheses(const Kernel& kernel, Hypothesis which,
                                   const HypothesisOptions& opts = {});

}  // namespace conekit
