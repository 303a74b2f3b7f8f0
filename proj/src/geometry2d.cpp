#include "cutdg/geometry2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cutdg/error.hpp"

namespace cutdg {

namespace {

constexpr double level_snap = 1e-14;

BoundaryTag tag_for(const TriMesh& m, const Vec2& a, const Vec2& b) {
  if (a(0) == m.x_min && b(0) == m.x_min) return BoundaryTag::left;
  if (a(0) == m.x_max && b(0) == m.x_max) return BoundaryTag::right;
  if (a(1) == m.y_min && b(1) == m.y_min) return BoundaryTag::bottom;
  if (a(1) == m.y_max && b(1) == m.y_max) return BoundaryTag::top;
  return BoundaryTag::none;
}

}  // namespace

Vec2 TriMesh::edge_normal(int e) const {
  const TriEdge& ed = edges[e];
  const Vec2 d = vertices[ed.v[1]] - vertices[ed.v[0]];
  Vec2 n(d(1), -d(0));
  n.normalize();
  const Vec2 mid = (vertices[ed.v[0]] + vertices[ed.v[1]]) / 2;
  if (n.dot(mid - centroid(ed.tri[0])) < 0) n = -n;
  return n;
}

TriMesh build_tri_mesh(double x_min, double x_max, double y_min, double y_max, int nx, int ny) {
  if (!(x_min < x_max) || !(y_min < y_max)) throw Error(Errc::invalid_extent, "empty rectangle");
  if (nx < 1 || ny < 1) throw Error(Errc::invalid_count, "need at least one cell per direction");
  TriMesh m;
  m.x_min = x_min;
  m.x_max = x_max;
  m.y_min = y_min;
  m.y_max = y_max;
  m.nx = nx;
  m.ny = ny;
  const double hx = (x_max - x_min) / nx, hy = (y_max - y_min) / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(i == nx ? x_max : x_min + i * hx, j == ny ? y_max : y_min + j * hy);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }

  std::map<std::pair<int, int>, int> lookup;
  m.triangle_edges.resize(m.triangles.size());
  for (int t = 0; t < m.n_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      int p = m.triangles[t][k], q = m.triangles[t][(k + 1) % 3];
      const auto key = std::minmax(p, q);
      auto [it, fresh] = lookup.try_emplace(key, static_cast<int>(m.edges.size()));
      if (fresh) {
        TriEdge e;
        e.v = {key.first, key.second};
        e.tri = {t, -1};
        m.edges.push_back(e);
      } else {
        m.edges[it->second].tri[1] = t;
      }
      m.triangle_edges[t][k] = it->second;
    }
  for (auto& e : m.edges) {
    if (e.tri[1] < 0) e.tag = tag_for(m, m.vertices[e.v[0]], m.vertices[e.v[1]]);
    m.h = std::max(m.h, (m.vertices[e.v[1]] - m.vertices[e.v[0]]).norm());
  }
  return m;
}

LineInterface LineInterface::make(const Vec2& normal, double offset) {
  const double len = normal.norm();
  if (!(len > 0)) throw Error(Errc::invalid_extent, "zero interface normal");
  return {normal / len, offset / len};
}

LineInterface LineInterface::diagonal(double c0) { return make(Vec2(1, 1), c0); }

namespace {

double signed_level(const LineInterface& line, const Vec2& x, int side, double tol) {
  const double l = line.level(x);
  if (std::abs(l) <= tol) return 0.0;
  return side == 1 ? l : -l;
}

void push_unique(std::vector<Vec2>& pts, const Vec2& p, double tol) {
  for (const auto& q : pts)
    if ((q - p).norm() <= tol) return;
  pts.push_back(p);
}

double snap_tol(const std::vector<Vec2>& poly) {
  double d = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) d = std::max(d, (poly[i] - poly[(i + 1) % poly.size()]).norm());
  return level_snap * d;
}

}  // namespace

std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const LineInterface& line, int side) {
  const double tol = snap_tol(poly);
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double sp = signed_level(line, p, side, tol), sq = signed_level(line, q, side, tol);
    if (sp <= 0) push_unique(out, p, tol);
    if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) push_unique(out, p + sp / (sp - sq) * (q - p), tol);
  }
  return out;
}

std::optional<std::array<Vec2, 2>> clip_segment(const Vec2& a, const Vec2& b, const LineInterface& line, int side) {
  const double tol = level_snap * (b - a).norm();
  const double sa = signed_level(line, a, side, tol), sb = signed_level(line, b, side, tol);
  if (sa <= 0 && sb <= 0) return std::array<Vec2, 2>{a, b};
  if (sa >= 0 && sb >= 0) return std::nullopt;
  const Vec2 x = a + sa / (sa - sb) * (b - a);
  return sa < 0 ? std::array<Vec2, 2>{a, x} : std::array<Vec2, 2>{x, b};
}

std::pair<ActiveTopology2D, ActiveTopology2D> classify_2d(const TriMesh& mesh, const LineInterface& line) {
  {
    const std::array<Vec2, 4> corners{Vec2(mesh.x_min, mesh.y_min), Vec2(mesh.x_max, mesh.y_min),
                                      Vec2(mesh.x_max, mesh.y_max), Vec2(mesh.x_min, mesh.y_max)};
    bool neg = false, pos = false;
    for (const auto& c : corners) {
      const double l = line.level(c);
      neg = neg || l < 0;
      pos = pos || l > 0;
    }
    if (!(neg && pos)) throw Error(Errc::line_misses_domain, "interface does not cross the rectangle");
  }

  std::array<ActiveTopology2D, 2> topo;
  for (int s = 0; s < 2; ++s) {
    topo[s].side = s + 1;
    topo[s].local.assign(mesh.n_triangles(), -1);
  }
  const double tol = level_snap * mesh.h;
  std::vector<char> cut(mesh.n_triangles(), 0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    std::array<double, 3> l;
    bool neg = false, pos = false;
    for (int k = 0; k < 3; ++k) {
      l[k] = line.level(mesh.vertex(t, k));
      if (std::abs(l[k]) <= tol) l[k] = 0;
      neg = neg || l[k] < 0;
      pos = pos || l[k] > 0;
    }
    cut[t] = neg && pos;
    std::optional<std::array<Vec2, 2>> seg;
    if (cut[t]) {
      std::vector<Vec2> pts;
      for (int k = 0; k < 3; ++k) {
        const Vec2& p = mesh.vertex(t, k);
        const Vec2& q = mesh.vertex(t, (k + 1) % 3);
        const double lp = l[k], lq = l[(k + 1) % 3];
        if (lp == 0) push_unique(pts, p, tol);
        if ((lp < 0 && lq > 0) || (lp > 0 && lq < 0)) push_unique(pts, p + lp / (lp - lq) * (q - p), tol);
      }
      if (pts.size() == 2) seg = std::array<Vec2, 2>{pts[0], pts[1]};
    }
    for (int s = 0; s < 2; ++s) {
      if (!(s == 0 ? neg : pos)) continue;
      CutRegion2D r;
      r.triangle = t;
      r.cut = cut[t];
      r.polygon = cut[t] ? clip_polygon(mesh.polygon(t), line, s + 1) : mesh.polygon(t);
      r.segment = seg;
      topo[s].local[t] = topo[s].size();
      topo[s].triangles.push_back(t);
      topo[s].regions.push_back(std::move(r));
    }
  }

  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    const TriEdge& ed = mesh.edges[e];
    for (auto& tp : topo) {
      if (ed.tri[1] < 0) {
        if (tp.contains(ed.tri[0])) tp.boundary_edges.push_back(e);
        continue;
      }
      if (!(tp.contains(ed.tri[0]) && tp.contains(ed.tri[1]))) continue;
      tp.interior_edges.push_back(e);
      if (cut[ed.tri[0]] || cut[ed.tri[1]]) tp.stabilized_faces.push_back(e);
    }
  }
  return {std::move(topo[0]), std::move(topo[1])};
}

}  // namespace cutdg
