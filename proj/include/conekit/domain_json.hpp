#pragma once

#include "conekit/geometry.hpp"

#include <json.hpp>

namespace conekit {

/// DomainSpec <-> {"kind": ..., "dim": n, ...}. Field names per kind:
///   FreeSpace      dim
///   HalfSpaceK     k, vertex, frame
///   Ball           center, radius
///   BallK          k, vertex, frame, radius
///   ExteriorBallK  k, vertex, frame, radius
///   TruncatedCone  vertex, section, r_min, r_max
///   Polygon2D      vertices  [[x, y], ...]
///   Interval       a, b
///   HalfLine       origin, direction (+1 / -1)
/// `frame` is a list of n axis vectors; vertex and frame default to the
/// origin and the identity. Sections are {"type": "orthant", "k", "frame",
/// "cap": {"axis", "cos_half_angle"}}, {"type": "arcs", "arcs": [[start,
/// length], ...]} or {"type": "signs", "negative", "positive"}.
nlohmann::json to_json(const DomainSpec& dom);
DomainSpec domain_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CrossSection& cs);
CrossSection section_from_json(const nlohmann::json& j, int dim);

}  // namespace conekit
