#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace cutdg {

using Vec2 = Eigen::Vector2d;

enum class BoundaryTag { none, left, bottom, right, top };

struct TriEdge {
  std::array<int, 2> v{-1, -1};
  // tri[1] is -1 on the boundary.
  std::array<int, 2> tri{-1, -1};
  BoundaryTag tag = BoundaryTag::none;
};

// Uniform nx x ny grid, each cell split along its lower-left to upper-right diagonal.
struct TriMesh {
  double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
  int nx = 0, ny = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<TriEdge> edges;
  std::vector<std::array<int, 3>> triangle_edges;
  double h = 0;  // longest edge

  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double cell_size() const { return (x_max - x_min) / nx; }
  const Vec2& vertex(int t, int k) const { return vertices[triangles[t][k]]; }
  Vec2 centroid(int t) const { return (vertex(t, 0) + vertex(t, 1) + vertex(t, 2)) / 3.0; }
  std::vector<Vec2> polygon(int t) const { return {vertex(t, 0), vertex(t, 1), vertex(t, 2)}; }
  // Unit normal of an edge; interior edges point from tri[0] to tri[1], boundary edges outward.
  Vec2 edge_normal(int e) const;
  double edge_length(int e) const { return (vertices[edges[e].v[1]] - vertices[edges[e].v[0]]).norm(); }
};

TriMesh build_tri_mesh(double x_min, double x_max, double y_min, double y_max, int nx, int ny);

// Straight interface n . x = c with side 1 where n . x < c.
struct LineInterface {
  Vec2 n{1, 0};
  double c = 0;

  double level(const Vec2& x) const { return n.dot(x) - c; }
  static LineInterface make(const Vec2& normal, double offset);
  // The line x + y = c0.
  static LineInterface diagonal(double c0);
};

struct CutRegion2D {
  int triangle = -1;
  std::vector<Vec2> polygon;
  std::optional<std::array<Vec2, 2>> segment;
  bool cut = false;
};

struct ActiveTopology2D {
  int side = 1;
  std::vector<int> triangles;
  std::vector<int> local;  // mesh triangle -> position in `triangles`, or -1
  std::vector<CutRegion2D> regions;
  std::vector<int> interior_edges;
  std::vector<int> boundary_edges;
  std::vector<int> stabilized_faces;

  bool contains(int t) const { return local[t] >= 0; }
  int size() const { return static_cast<int>(triangles.size()); }
  const CutRegion2D& region(int t) const { return regions[local[t]]; }
};

// Part of a convex polygon on one side of the line (side 1: level <= 0).
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const LineInterface& line, int side);
std::optional<std::array<Vec2, 2>> clip_segment(const Vec2& a, const Vec2& b, const LineInterface& line, int side);

std::pair<ActiveTopology2D, ActiveTopology2D> classify_2d(const TriMesh& mesh, const LineInterface& line);

}  // namespace cutdg
