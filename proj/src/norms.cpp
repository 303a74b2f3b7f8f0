#include "cutdg/norms.hpp"

#include <algorithm>
#include <cmath>

#include "cutdg/quadrature.hpp"

namespace cutdg {

ErrorNorms error_norms(const std::vector<PhysicalPiece>& pieces, int points, const PieceEvaluator& approx,
                       const ExactFunction& exact) {
  ErrorNorms n;
  double l2sq = 0;
  for (const PhysicalPiece& p : pieces) {
    if (!(p.b > p.a)) continue;
    const Rule1D<double> rule = gauss_rule<double>(points, p.a, p.b);
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const double x = rule.points(0, q);
      const double d = std::abs(approx(p.side, p.elem, x) - exact(p.side, x));
      n.l1 += rule.weights(q) * d;
      l2sq += rule.weights(q) * d * d;
      n.linf = std::max(n.linf, d);
    }
    for (double x : {p.a, p.b}) n.linf = std::max(n.linf, std::abs(approx(p.side, p.elem, x) - exact(p.side, x)));
  }
  n.l2 = std::sqrt(l2sq);
  return n;
}

std::vector<PhysicalPiece> physical_pieces(const DgOperators& ops) {
  std::vector<PhysicalPiece> out;
  for (int s = 1; s <= 2; ++s) {
    const ActiveTopology& tp = ops.side(s);
    for (int j = tp.first; j <= tp.last; ++j)
      out.push_back({s, j, tp.physical_left(ops.mesh, j), tp.physical_right(ops.mesh, j)});
  }
  return out;
}

std::vector<PhysicalPiece> physical_pieces(const SpatialField& u, double x_gamma) {
  std::vector<PhysicalPiece> out;
  const BackgroundMesh1D& m = u.mesh;
  for (int s = 1; s <= 2; ++s)
    for (int j = u.first[s - 1]; j <= u.last[s - 1]; ++j) {
      const double a = s == 1 ? m.nodes[j] : std::max(m.nodes[j], x_gamma);
      const double b = s == 1 ? std::min(m.nodes[j + 1], x_gamma) : m.nodes[j + 1];
      out.push_back({s, j, a, b});
    }
  return out;
}

ErrorNorms error_norms(const DgOperators& ops, const Eigen::VectorXd& u, const ExactFunction& exact, int comp) {
  return error_norms(
      physical_pieces(ops), ops.degree + 3,
      [&](int s, int j, double x) { return evaluate(ops, u, s, j, x, comp); }, exact);
}

ErrorNorms error_norms(const SpatialField& u, double x_gamma, const ExactFunction& exact) {
  return error_norms(
      physical_pieces(u, x_gamma), u.degree + 3, [&](int s, int j, double x) { return u.value(s, j, x); }, exact);
}

ErrorNorms error_norms_2d(const Operators2D& ops, const Eigen::VectorXd& u, const PlaneFunction& exact) {
  ErrorNorms n;
  double l2sq = 0;
  const int deg = 2 * ops.degree + 3;
  for (int s = 1; s <= 2; ++s)
    for (const CutRegion2D& r : ops.side(s).regions) {
      if (r.polygon.size() < 3 || !(std::abs(polygon_area(r.polygon)) > 0)) continue;
      const Rule2D<double> rule =
          r.cut ? polygon_rule<double>(deg, r.polygon)
                : triangle_rule<double>(deg, r.polygon[0], r.polygon[1], r.polygon[2]);
      auto diff = [&](const Vec2& x) { return std::abs(evaluate_2d(ops, u, s, r.triangle, x) - exact(s, x)); };
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const double d = diff(rule.points.col(q));
        n.l1 += rule.weights(q) * d;
        l2sq += rule.weights(q) * d * d;
        n.linf = std::max(n.linf, d);
      }
      for (const Vec2& v : r.polygon) n.linf = std::max(n.linf, diff(v));
    }
  n.l2 = std::sqrt(l2sq);
  return n;
}

}  // namespace cutdg
