#include "conekit/domain_json.hpp"

#include <stdexcept>
#include <string>

namespace conekit {

using nlohmann::json;

namespace {

json vec(const Point& p) { return json(std::vector<double>(p.data(), p.data() + p.size())); }

Point point_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json frame_json(const Frame& f) {
  json cols = json::array();
  for (Eigen::Index c = 0; c < f.cols(); ++c) cols.push_back(vec(f.col(c)));
  return cols;
}

Frame frame_from(const json& j, int n) {
  Frame f(n, n);
  if (j.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("frame must list n axes");
  for (int c = 0; c < n; ++c) {
    const Point col = point_from(j.at(c));
    if (col.size() != n) throw std::invalid_argument("frame axis has wrong length");
    f.col(c) = col;
  }
  return f;
}

int dim_of(const json& j) {
  if (j.contains("dim")) return j.at("dim").get<int>();
  throw std::invalid_argument("domain JSON needs \"dim\"");
}

Point vertex_or_origin(const json& j, int n) {
  if (!j.contains("vertex")) return Point::Zero(n);
  Point v = point_from(j.at("vertex"));
  if (v.size() != n) throw std::invalid_argument("vertex has wrong dimension");
  return v;
}

Frame frame_or_identity(const json& j, int n) {
  return j.contains("frame") ? frame_from(j.at("frame"), n) : identity_frame(n);
}

}  // namespace

json to_json(const CrossSection& cs) {
  json j = std::visit(
      [&](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SphericalCapProduct>) {
          json o{{"type", "orthant"}, {"k", r.k}, {"frame", frame_json(r.frame)}};
          if (r.cap) o["cap"] = {{"axis", vec(r.cap->axis)}, {"cos_half_angle", r.cap->cos_half_angle}};
          return o;
        } else if constexpr (std::is_same_v<T, ArcUnion>) {
          json arcs = json::array();
          for (const auto& a : r.arcs) arcs.push_back({a.start, a.length});
          return {{"type", "arcs"}, {"arcs", arcs}};
        } else if constexpr (std::is_same_v<T, SignSet>) {
          return {{"type", "signs"}, {"negative", r.negative}, {"positive", r.positive}};
        } else {
          return {{"type", "indicator"}, {"center", vec(r.center)}, {"radius", r.radius},
                  {"domain", to_json(*r.domain)}};
        }
      },
      cs.repr());
  j["empty"] = cs.empty();
  return j;
}

CrossSection section_from_json(const json& j, int n) {
  const std::string type = j.at("type").get<std::string>();
  const bool empty = j.value("empty", false);
  if (type == "orthant") {
    SphericalCapProduct s{j.value("k", 0), frame_or_identity(j, n), std::nullopt};
    if (j.contains("cap")) {
      s.cap = SphericalCap{point_from(j.at("cap").at("axis")),
                           j.at("cap").at("cos_half_angle").get<double>()};
    }
    return CrossSection(n, s, empty);
  }
  if (type == "arcs") {
    ArcUnion a;
    for (const auto& arc : j.at("arcs")) a.arcs.push_back({arc.at(0).get<double>(), arc.at(1).get<double>()});
    return CrossSection(n, a, empty);
  }
  if (type == "signs") {
    return CrossSection(n, SignSet{j.value("negative", false), j.value("positive", false)}, empty);
  }
  if (type == "indicator") {
    return CrossSection(n,
                        IndicatorSection{std::make_shared<const DomainSpec>(domain_from_json(j.at("domain"))),
                                         point_from(j.at("center")), j.at("radius").get<double>()},
                        empty);
  }
  throw std::invalid_argument("unknown cross-section type: " + type);
}

json to_json(const DomainSpec& dom) {
  json j = std::visit(
      [&](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return json::object();
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          return {{"k", d.k}, {"vertex", vec(d.vertex)}, {"frame", frame_json(d.frame)}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {{"center", vec(d.center)}, {"radius", d.radius}};
        } else if constexpr (std::is_same_v<T, BallK> || std::is_same_v<T, ExteriorBallK>) {
          return {{"k", d.k}, {"vertex", vec(d.vertex)}, {"frame", frame_json(d.frame)}, {"radius", d.radius}};
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          return {{"vertex", vec(d.vertex)}, {"section", to_json(d.section)},
                  {"r_min", d.r_min}, {"r_max", d.r_max}};
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          json vs = json::array();
          for (const auto& v : d.vertices) vs.push_back({v.x(), v.y()});
          return {{"vertices", vs}};
        } else if constexpr (std::is_same_v<T, Interval>) {
          return {{"a", d.a}, {"b", d.b}};
        } else {
          return {{"origin", d.origin}, {"direction", d.direction}};
        }
      },
      dom.kind());
  j["kind"] = std::string(dom.kind_name());
  j["dim"] = dom.dim();
  return j;
}

DomainSpec domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "FreeSpace") return DomainSpec(FreeSpace{dim_of(j)});
  if (kind == "HalfSpaceK") {
    const int n = dim_of(j);
    return DomainSpec(HalfSpaceK{j.at("k").get<int>(), vertex_or_origin(j, n), frame_or_identity(j, n)});
  }
  if (kind == "Ball") {
    Point c = point_from(j.at("center"));
    if (j.contains("dim") && c.size() != j.at("dim").get<int>()) {
      throw std::invalid_argument("Ball: center dimension disagrees with dim");
    }
    return DomainSpec(Ball{std::move(c), j.at("radius").get<double>()});
  }
  if (kind == "BallK") {
    const int n = dim_of(j);
    return DomainSpec(BallK{j.value("k", 0), vertex_or_origin(j, n), frame_or_identity(j, n),
                            j.at("radius").get<double>()});
  }
  if (kind == "ExteriorBallK") {
    const int n = dim_of(j);
    return DomainSpec(ExteriorBallK{j.value("k", 0), vertex_or_origin(j, n), frame_or_identity(j, n),
                                    j.at("radius").get<double>()});
  }
  if (kind == "TruncatedCone") {
    const int n = dim_of(j);
    return DomainSpec(TruncatedCone{vertex_or_origin(j, n), section_from_json(j.at("section"), n),
                                    j.at("r_min").get<double>(), j.at("r_max").get<double>()});
  }
  if (kind == "Polygon2D") {
    std::vector<Eigen::Vector2d> vs;
    for (const auto& v : j.at("vertices")) vs.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return DomainSpec(Polygon2D{std::move(vs)});
  }
  if (kind == "Interval") return DomainSpec(Interval{j.at("a").get<double>(), j.at("b").get<double>()});
  if (kind == "HalfLine") {
    return DomainSpec(HalfLine{j.at("origin").get<double>(), j.value("direction", 1)});
  }
  throw std::invalid_argument("unknown domain kind: " + kind);
}

}  // namespace conekit
