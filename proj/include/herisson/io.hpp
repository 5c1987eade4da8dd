#pragma once

// File formats. JSON is the only format read back; OBJ and SVG are views.

#include "herisson/geometry.hpp"
#include "herisson/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace herisson::io {

using Json = nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

namespace detail {

inline double number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
  return j.get<double>();
}

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Json values_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Eigen::VectorXd values_from(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  Eigen::VectorXd out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = number(j[i], what);
  return out;
}

inline std::string fmt(double x, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON

inline Json fan_to_json(const Fan& fan) {
  Json eq = Json::array();
  for (const Vec3& n : fan.equipment) eq.push_back(detail::vec_json(n));
  Json cells = Json::array();
  for (const auto& c : fan.cells) cells.push_back(c);
  return Json{{"equipment", eq}, {"cells", cells}};
}

inline Fan fan_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("equipment") || !j.contains("cells"))
    throw Error(ErrorCode::ParseError, "a fan needs \"equipment\" and \"cells\"");
  Fan fan;
  const Json& eq = j.at("equipment");
  const Json& cells = j.at("cells");
  if (!eq.is_array() || !cells.is_array()) throw Error(ErrorCode::ParseError, "equipment and cells must be arrays");
  for (const Json& v : eq) {
    if (!v.is_array() || v.size() != 3) throw Error(ErrorCode::ParseError, "equipment vectors have three components");
    fan.equipment.emplace_back(detail::number(v[0], "equipment"), detail::number(v[1], "equipment"),
                               detail::number(v[2], "equipment"));
  }
  for (const Json& c : cells) {
    if (!c.is_array()) throw Error(ErrorCode::ParseError, "cells are arrays of face indices");
    std::vector<int> cell;
    for (const Json& x : c) {
      if (!x.is_number_integer()) throw Error(ErrorCode::ParseError, "face indices are integers");
      cell.push_back(x.get<int>());
    }
    fan.cells.push_back(std::move(cell));
  }
  return fan;
}

/// Fan plus support numbers. The realized fields (vertices, faces, signs,
/// areas) are written for readers and recomputed on import.
inline Json herisson_to_json(const Herisson& H) {
  Json j = fan_to_json(H.fan());
  j["h"] = detail::values_json(H.h.h);
  Json vertices = Json::array();
  for (const Vec3& v : H.vertices) vertices.push_back(detail::vec_json(v));
  j["vertices"] = vertices;
  Json faces = Json::array();
  for (const auto& f : H.faces) faces.push_back(f);
  j["faces"] = faces;
  j["signs"] = H.signs;
  j["oriented_areas"] = detail::values_json(H.oriented_areas.f);
  return j;
}

inline Herisson herisson_from_json(const Json& j) {
  const Fan fan = fan_from_json(j);
  if (!j.contains("h")) throw Error(ErrorCode::ParseError, "a herisson needs support numbers \"h\"");
  return reconstruct(fan, SupportVector(detail::values_from(j.at("h"), "h")));
}

/// A bare array, or an object holding "h", "g" or "f".
inline Eigen::VectorXd values_from_json(const Json& j) {
  if (j.is_array()) return detail::values_from(j, "values");
  for (const char* key : {"h", "g", "f"})
    if (j.is_object() && j.contains(key)) return detail::values_from(j.at(key), key);
  throw Error(ErrorCode::ParseError, "expected an array or an object with \"h\", \"g\" or \"f\"");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Fan load_fan(const std::string& path) { return fan_from_json(parse(read_text(path))); }
inline Herisson load_herisson(const std::string& path) { return herisson_from_json(parse(read_text(path))); }
inline Eigen::VectorXd load_values(const std::string& path) { return values_from_json(parse(read_text(path))); }

inline void save_herisson(const std::string& path, const Herisson& H) { write_text(path, dump(herisson_to_json(H))); }

inline std::string trace_jsonl(const std::vector<TraceRecord>& trace) {
  std::string out;
  for (const auto& r : trace) {
    const Json j{{"t", r.t}, {"residual", r.residual}, {"min_abs_area", r.min_abs_area}, {"max_perimeter", r.max_perimeter}};
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// OBJ: every face is an independent polygon, so self-intersecting herissons
// export as they are.

inline std::string to_obj(const Herisson& H) {
  std::string out = "# herisson with " + std::to_string(H.face_count()) + " faces\n";
  int next_vertex = 1;
  for (int j = 0; j < H.face_count(); ++j) {
    out += "# face " + std::to_string(j) + " sign " + (H.signs[j] > 0 ? "+1" : "-1") + " area " +
           detail::fmt(H.oriented_areas[j]) + "\n";
    out += "o face_" + std::to_string(j) + "\n";
    const auto poly = H.face_polygon(j);
    for (const Vec3& v : poly)
      out += "v " + detail::fmt(v.x()) + " " + detail::fmt(v.y()) + " " + detail::fmt(v.z()) + "\n";
    out += "f";
    for (std::size_t k = 0; k < poly.size(); ++k) out += " " + std::to_string(next_vertex + static_cast<int>(k));
    out += "\n";
    next_vertex += static_cast<int>(poly.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG: stereographic projection of the sphere partition.

/// Projection point: antipode of the equipment centroid, or the antipode of
/// the first cell's centre when the centroid vanishes or the pole falls near
/// an arc.
inline Vec3 projection_pole(const Fan& fan) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& n : fan.equipment) sum += n;
  auto near_arc = [&](const Vec3& p) {
    for (const auto& cell : fan.cells)
      for (std::size_t i = 0; i < cell.size(); ++i) {
        const Vec3& a = fan.equipment[cell[i]];
        const Vec3& b = fan.equipment[cell[(i + 1) % cell.size()]];
        const Vec3 axis = a.cross(b).normalized();
        const Vec3 foot = (p - axis.dot(p) * axis);
        if (std::abs(axis.dot(p)) < 1e-3 && foot.norm() > 0 &&
            herisson::detail::on_minor_arc(a, b, foot.normalized(), 1e-3))
          return true;
        if ((p - a).norm() < 1e-3) return true;
      }
    return false;
  };
  if (sum.norm() > 1e-9) {
    const Vec3 pole = -sum.normalized();
    if (!near_arc(pole)) return pole;
  }
  Vec3 centre = Vec3::Zero();
  for (int f : fan.cells.front()) centre += fan.equipment[f];
  // A point inside a cell is never on an arc.
  return centre.normalized();
}

inline std::string to_svg(const Fan& fan) {
  const Vec3 pole = projection_pole(fan);
  Vec3 e1 = std::abs(pole.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = (e1 - e1.dot(pole) * pole).normalized();
  const Vec3 e2 = pole.cross(e1);
  auto project = [&](const Vec3& x) -> Vec2 {
    const double d = 1.0 - x.normalized().dot(pole);
    return Vec2(x.normalized().dot(e1) / d, -x.normalized().dot(e2) / d);  // y flipped for SVG
  };

  struct Path {
    Vec2 a, m, b;
  };
  std::vector<Path> paths;
  double extent = 1.0;
  const FanTopology topo(fan);
  for (const auto& arc : topo.arcs()) {
    const Vec3& a = fan.equipment[arc.a];
    const Vec3& b = fan.equipment[arc.b];
    Path p{project(a), project(a + b), project(b)};
    for (const Vec2* q : {&p.a, &p.m, &p.b}) extent = std::max(extent, q->cwiseAbs().maxCoeff());
    paths.push_back(p);
  }
  extent *= 1.1;

  auto f = [](double x) { return detail::fmt(x, "%.6f"); };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + f(-extent) + " " + f(-extent) + " " +
                    f(2 * extent) + " " + f(2 * extent) + "\">\n";
  out += "<metadata>stereographic projection from pole " + f(pole.x()) + " " + f(pole.y()) + " " + f(pole.z()) +
         "</metadata>\n";
  out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + f(extent / 300) + "\">\n";
  for (const Path& p : paths) {
    const Vec2 u = p.m - p.a, v = p.b - p.m;
    const double turn = u.x() * v.y() - u.y() * v.x();
    out += "<path d=\"M " + f(p.a.x()) + " " + f(p.a.y()) + " ";
    const double chord = (p.b - p.a).norm();
    if (std::abs(turn) < 1e-12 * std::max(1.0, chord * chord)) {
      out += "L " + f(p.b.x()) + " " + f(p.b.y());
    } else {
      // Circle through the three projected points.
      const Vec2 ab = p.m - p.a, ac = p.b - p.a;
      const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
      const Vec2 c = p.a + Vec2(ac.y() * ab.squaredNorm() - ab.y() * ac.squaredNorm(),
                                ab.x() * ac.squaredNorm() - ac.x() * ab.squaredNorm()) / d;
      const double r = (p.a - c).norm();
      const double side_m = ac.x() * (p.m - p.a).y() - ac.y() * (p.m - p.a).x();
      const double side_c = ac.x() * (c - p.a).y() - ac.y() * (c - p.a).x();
      const int large = side_m * side_c > 0 ? 1 : 0;
      const int sweep = turn > 0 ? 1 : 0;
      out += "A " + f(r) + " " + f(r) + " 0 " + std::to_string(large) + " " + std::to_string(sweep) + " " +
             f(p.b.x()) + " " + f(p.b.y());
    }
    out += "\"/>\n";
  }
  out += "</g>\n<g fill=\"black\" font-size=\"" + f(extent / 25) + "\">\n";
  for (int j = 0; j < fan.face_count(); ++j) {
    const Vec2 q = project(fan.equipment[j]);
    out += "<circle cx=\"" + f(q.x()) + "\" cy=\"" + f(q.y()) + "\" r=\"" + f(extent / 120) + "\"/>";
    out += "<text x=\"" + f(q.x()) + "\" y=\"" + f(q.y()) + "\">" + std::to_string(j) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace herisson::io
