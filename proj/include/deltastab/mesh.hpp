#pragma once

// Triangulations of rectangular domains: structured construction, uniform
// red refinement, point location, and coarse-into-fine vertex injection.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "deltastab/errors.hpp"

namespace deltastab {

struct Rect {
  double l1 = 1.0;
  double l2 = 1.0;
};

struct BarycentricLocation {
  int triangle_index = -1;
  std::array<double, 3> weights{};
};

struct Triangulation {
  Rect domain;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<char> boundary_vertex_flags;
  int refinement_level = 0;
  std::shared_ptr<const Triangulation> parent;
  std::vector<int> parent_injection;  // parent vertex index -> our vertex index

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

inline double triangle_area(const Triangulation& m, int t) {
  const auto& tri = m.triangles[t];
  const Eigen::Vector2d& a = m.vertices[tri[0]];
  const Eigen::Vector2d& b = m.vertices[tri[1]];
  const Eigen::Vector2d& c = m.vertices[tri[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

inline double total_area(const Triangulation& m) {
  double s = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) s += triangle_area(m, t);
  return s;
}

inline bool on_rect_boundary(const Rect& r, const Eigen::Vector2d& p) {
  const double tol = 1e-12 * std::max(r.l1, r.l2);
  return std::abs(p.x()) <= tol || std::abs(p.x() - r.l1) <= tol ||
         std::abs(p.y()) <= tol || std::abs(p.y() - r.l2) <= tol;
}

namespace detail {

inline void validate_mesh(const Triangulation& m) {
  const Rect& r = m.domain;
  if (r.l1 <= 0 || r.l2 <= 0) throw Error("mesh: domain side lengths must be positive");
  if (m.boundary_vertex_flags.size() != m.vertices.size())
    throw Error("mesh: boundary flag count mismatch");
  const double ctol = 1e-12 * std::max(r.l1, r.l2);
  for (const auto& p : m.vertices) {
    if (p.x() < -ctol || p.x() > r.l1 + ctol || p.y() < -ctol || p.y() > r.l2 + ctol)
      throw Error("mesh: vertex outside the domain rectangle");
  }
  double area = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    for (int v : m.triangles[t])
      if (v < 0 || v >= m.vertex_count()) throw Error("mesh: triangle index out of range");
    const double a = triangle_area(m, t);
    if (!(a > 0)) throw Error("mesh: nonpositive triangle area");
    area += a;
  }
  const double target = r.l1 * r.l2;
  if (std::abs(area - target) > 1e-12 * target)
    throw Error("mesh: triangle areas do not cover the rectangle");
  for (int i = 0; i < m.vertex_count(); ++i) {
    if (static_cast<bool>(m.boundary_vertex_flags[i]) != on_rect_boundary(r, m.vertices[i]))
      throw Error("mesh: boundary flag inconsistent with rectangle geometry");
  }
}

}  // namespace detail

inline Triangulation build_structured_mesh(const Rect& rect, int nx, int ny) {
  if (nx < 1 || ny < 1) throw Error("build_structured_mesh: need nx >= 1 and ny >= 1");
  Triangulation m;
  m.domain = rect;
  m.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  m.boundary_vertex_flags.reserve(m.vertices.capacity());
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.vertices.emplace_back(rect.l1 * i / nx, rect.l2 * j / ny);
      m.boundary_vertex_flags.push_back(i == 0 || i == nx || j == 0 || j == ny);
    }
  }
  auto idx = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = idx(i, j), v10 = idx(i + 1, j);
      const int v01 = idx(i, j + 1), v11 = idx(i + 1, j + 1);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }
  }
  detail::validate_mesh(m);
  return m;
}

// Splits every triangle into 4 congruent children through the edge midpoints.
// Parent vertices keep their indices; midpoints are appended.
inline Triangulation refine(const Triangulation& mesh) {
  Triangulation out;
  out.domain = mesh.domain;
  out.vertices = mesh.vertices;
  out.refinement_level = mesh.refinement_level + 1;
  out.parent = std::make_shared<Triangulation>(mesh);
  out.parent_injection.resize(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) out.parent_injection[i] = static_cast<int>(i);

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.emplace_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  out.boundary_vertex_flags.resize(out.vertices.size());
  for (size_t i = 0; i < out.vertices.size(); ++i)
    out.boundary_vertex_flags[i] = on_rect_boundary(out.domain, out.vertices[i]);
  detail::validate_mesh(out);
  return out;
}

// Points within 1e-10 of the rectangle are snapped inward before the search.
inline BarycentricLocation locate_point(const Triangulation& mesh, Eigen::Vector2d p) {
  const Rect& r = mesh.domain;
  const double snap = 1e-10;
  if (p.x() < -snap || p.x() > r.l1 + snap || p.y() < -snap || p.y() > r.l2 + snap)
    throw PointOutsideDomain("locate_point: point outside the closed domain");
  p.x() = std::min(std::max(p.x(), 0.0), r.l1);
  p.y() = std::min(std::max(p.y(), 0.0), r.l2);

  int best_t = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best_w{};
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d& a = mesh.vertices[tri[0]];
    const Eigen::Vector2d& b = mesh.vertices[tri[1]];
    const Eigen::Vector2d& c = mesh.vertices[tri[2]];
    const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    const double w0 = ((b.x() - p.x()) * (c.y() - p.y()) - (c.x() - p.x()) * (b.y() - p.y())) / det;
    const double w1 = ((c.x() - p.x()) * (a.y() - p.y()) - (a.x() - p.x()) * (c.y() - p.y())) / det;
    const double w2 = 1.0 - w0 - w1;
    const double mn = std::min({w0, w1, w2});
    if (mn > best_min) {
      best_min = mn;
      best_t = t;
      best_w = {w0, w1, w2};
    }
    if (mn >= -1e-9) break;  // inside this triangle; earlier candidates can't matter
  }
  if (best_min < -1e-6)
    throw PointOutsideDomain("locate_point: no containing triangle found");
  BarycentricLocation loc;
  loc.triangle_index = best_t;
  double sum = 0.0;
  for (int n = 0; n < 3; ++n) {
    loc.weights[n] = std::min(std::max(best_w[n], 0.0), 1.0);
    sum += loc.weights[n];
  }
  for (double& w : loc.weights) w /= sum;
  return loc;
}

inline std::uint64_t mesh_hash(const Triangulation& m) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  auto mix = [&h](const void* data, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(&bits, sizeof bits);
  };
  mix_double(m.domain.l1);
  mix_double(m.domain.l2);
  const int nv = m.vertex_count(), nt = m.triangle_count();
  mix(&nv, sizeof nv);
  mix(&nt, sizeof nt);
  for (const auto& p : m.vertices) {
    mix_double(p.x());
    mix_double(p.y());
  }
  for (const auto& tri : m.triangles) mix(tri.data(), sizeof(int) * 3);
  return h;
}

// Composition of the stored parent injections from `coarse` up to `fine`.
inline std::vector<int> coarse_node_injection(const Triangulation& coarse,
                                              const Triangulation& fine) {
  const std::uint64_t target = mesh_hash(coarse);
  std::vector<const Triangulation*> chain;  // fine, fine.parent, ...
  const Triangulation* cur = &fine;
  while (true) {
    if (mesh_hash(*cur) == target) break;
    if (!cur->parent)
      throw NotARefinement("coarse_node_injection: fine mesh is not a refinement of coarse");
    chain.push_back(cur);
    cur = cur->parent.get();
  }
  std::vector<int> map(coarse.vertices.size());
  for (size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const std::vector<int>& inj = (*it)->parent_injection;
    for (int& v : map) v = inj[v];
  }
  return map;
}

// Text format: `vertices N triangles K`, N lines `x y flag`, K lines `i j k`.
inline void write_mesh(std::ostream& os, const Triangulation& m) {
  os << "vertices " << m.vertex_count() << " triangles " << m.triangle_count() << "\n";
  char buf[80];
  for (int i = 0; i < m.vertex_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", m.vertices[i].x(), m.vertices[i].y(),
                  m.boundary_vertex_flags[i] ? 1 : 0);
    os << buf;
  }
  for (const auto& tri : m.triangles) os << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
}

inline Triangulation read_mesh(std::istream& is, const Rect& rect) {
  std::string kw1, kw2;
  int nv = 0, nt = 0;
  if (!(is >> kw1 >> nv >> kw2 >> nt) || kw1 != "vertices" || kw2 != "triangles" || nv < 3 ||
      nt < 1)
    throw ConfigError("mesh file: bad header (expected `vertices N triangles K`)");
  Triangulation m;
  m.domain = rect;
  m.vertices.resize(nv);
  m.boundary_vertex_flags.resize(nv);
  for (int i = 0; i < nv; ++i) {
    double x, y;
    int flag;
    if (!(is >> x >> y >> flag)) throw ConfigError("mesh file: truncated vertex list");
    m.vertices[i] = {x, y};
    m.boundary_vertex_flags[i] = flag != 0;
  }
  m.triangles.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tri = m.triangles[t];
    if (!(is >> tri[0] >> tri[1] >> tri[2])) throw ConfigError("mesh file: truncated triangle list");
    for (int v : tri)
      if (v < 0 || v >= nv) throw ConfigError("mesh file: triangle index out of range");
    if (triangle_area(m, t) < 0) std::swap(tri[1], tri[2]);  // normalize orientation
  }
  try {
    detail::validate_mesh(m);
  } catch (const Error& e) {
    throw ConfigError(std::string("mesh file: ") + e.what());
  }
  return m;
}

}  // namespace deltastab
