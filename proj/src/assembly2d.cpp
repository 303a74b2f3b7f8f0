#include "cutdg/assembly2d.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

#include "cutdg/error.hpp"
#include "cutdg/quadrature.hpp"

namespace cutdg {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

const TriangleBasis<double>& triangle_basis(int degree) {
  static const std::vector<TriangleBasis<double>> table = [] {
    std::vector<TriangleBasis<double>> t;
    for (int r = 0; r <= 6; ++r) t.emplace_back(r);
    return t;
  }();
  if (degree < 0 || degree > 6) throw Error(Errc::invalid_count, "triangle degree outside 0..6");
  return table[degree];
}

void add_block(Triplets& trip, int row0, int col0, const Eigen::MatrixXd& B) {
  for (int i = 0; i < B.rows(); ++i)
    for (int j = 0; j < B.cols(); ++j)
      if (B(i, j) != 0.0) trip.emplace_back(row0 + i, col0 + j, B(i, j));
}

Rule2D<double> region_rule(const TriMesh& mesh, const CutRegion2D& r, int degree) {
  if (!r.cut) return triangle_rule<double>(degree, mesh.vertex(r.triangle, 0), mesh.vertex(r.triangle, 1),
                                           mesh.vertex(r.triangle, 2));
  return polygon_rule<double>(degree, r.polygon);
}

bool has_area(const CutRegion2D& r) { return r.polygon.size() >= 3 && std::abs(polygon_area(r.polygon)) > 0; }

// Interface pieces: (side-1 triangle, side-2 triangle, segment).
struct InterfacePiece {
  int t1, t2;
  Vec2 p, q;
};

std::vector<InterfacePiece> interface_pieces(const Operators2D& ops) {
  std::vector<InterfacePiece> out;
  const auto& s1 = ops.side(1);
  const auto& s2 = ops.side(2);
  for (const auto& r : s1.regions)
    if (r.cut && r.segment) out.push_back({r.triangle, r.triangle, (*r.segment)[0], (*r.segment)[1]});
  // Interface lying on a mesh edge.
  const double tol = 1e-14 * ops.mesh.h;
  for (int e = 0; e < static_cast<int>(ops.mesh.edges.size()); ++e) {
    const TriEdge& ed = ops.mesh.edges[e];
    if (ed.tri[1] < 0) continue;
    const Vec2& p = ops.mesh.vertices[ed.v[0]];
    const Vec2& q = ops.mesh.vertices[ed.v[1]];
    if (std::abs(ops.line.level(p)) > tol || std::abs(ops.line.level(q)) > tol) continue;
    const int ta = ed.tri[0], tb = ed.tri[1];
    const bool a_in_1 = s1.contains(ta) && !s1.region(ta).cut && !s2.contains(ta);
    const bool b_in_1 = s1.contains(tb) && !s1.region(tb).cut && !s2.contains(tb);
    if (a_in_1 && !b_in_1) out.push_back({ta, tb, p, q});
    if (b_in_1 && !a_in_1) out.push_back({tb, ta, p, q});
  }
  return out;
}

void emit_ghost_2d(const Operators2D& ops, int s, double scale, Triplets& trip) {
  const auto& b = triangle_basis(ops.degree);
  const int nb = ops.dofs.block;
  const double h = ops.mesh.cell_size();
  for (int side = 1; side <= 2; ++side)
    for (int e : ops.side(side).stabilized_faces) {
      const TriEdge& ed = ops.mesh.edges[e];
      const Vec2 n = ops.mesh.edge_normal(e);
      const Rule2D<double> rule =
          segment_rule<double>(ops.degree + 1, ops.mesh.vertices[ed.v[0]], ops.mesh.vertices[ed.v[1]]);
      const int tm = ed.tri[0], tp = ed.tri[1];
      Eigen::MatrixXd Bmm = Eigen::MatrixXd::Zero(nb, nb), Bmp = Bmm, Bpp = Bmm;
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Vec2 x = rule.points.col(q);
        for (int k = 0; k <= ops.degree; ++k) {
          const double c = scale * rule.weights(q) * ops.penalties.omega_k(k) * std::pow(h, 2 * k + s);
          const Eigen::VectorXd dm = b.eval_directional(ops.frames[tm], x, n, k);
          const Eigen::VectorXd dp = b.eval_directional(ops.frames[tp], x, n, k);
          Bmm += c * dm * dm.transpose();
          Bmp += c * dm * dp.transpose();
          Bpp += c * dp * dp.transpose();
        }
      }
      const int im = ops.dofs.index(side, tm, 0), ip = ops.dofs.index(side, tp, 0);
      add_block(trip, im, im, Bmm);
      add_block(trip, im, ip, -Bmp);
      add_block(trip, ip, im, -Bmp.transpose());
      add_block(trip, ip, ip, Bpp);
    }
}

}  // namespace

Operators2D assemble_2d(const TriMesh& mesh, const LineInterface& line, int degree, const PenaltyConfig& penalties,
                        const Vec2& a1, const Vec2& a2) {
  const double a1n = a1.dot(line.n), a2n = a2.dot(line.n);
  if (a1n == 0.0 || a2n == 0.0) throw Error(Errc::zero_normal_speed, "velocity tangential to the interface");
  if (a1n * a2n < 0) throw Error(Errc::ill_posed_interface, "normal speeds of opposite sign");

  auto [s1, s2] = classify_2d(mesh, line);
  Operators2D ops;
  ops.mesh = mesh;
  ops.line = line;
  ops.degree = degree;
  ops.a1 = a1;
  ops.a2 = a2;
  ops.penalties = penalties;
  ops.topo = {std::move(s1), std::move(s2)};
  const auto& b = triangle_basis(degree);
  const int nb = b.dof_count();

  DofMap2D& d = ops.dofs;
  d.degree = degree;
  d.block = nb;
  d.local = {ops.topo[0].local, ops.topo[1].local};
  d.offset = {0, ops.topo[0].size() * nb};
  d.size = (ops.topo[0].size() + ops.topo[1].size()) * nb;

  ops.frames.resize(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t)
    ops.frames[t] = TriangleBasis<double>::frame(mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2));

  Triplets mtrip, ktrip, btrip;
  ops.outflux_u = Eigen::VectorXd::Zero(d.size);
  ops.integral_weights = Eigen::VectorXd::Zero(d.size);
  std::vector<double> outflux_g;
  const int vdeg = 2 * degree + 1;

  for (int side = 1; side <= 2; ++side) {
    const ActiveTopology2D& tp = ops.side(side);
    const Vec2 a = ops.a(side);

    for (const CutRegion2D& r : tp.regions) {
      if (!has_area(r)) continue;
      const auto& fr = ops.frames[r.triangle];
      const Rule2D<double> rule = region_rule(mesh, r, vdeg);
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nb, nb), K = M;
      Eigen::VectorXd w1 = Eigen::VectorXd::Zero(nb);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Vec2 x = rule.points.col(q);
        const Eigen::VectorXd phi = b.eval(fr, x);
        const Eigen::VectorXd adphi = degree > 0 ? Eigen::VectorXd(a(0) * b.eval(fr, x, 1, 0) + a(1) * b.eval(fr, x, 0, 1))
                                                 : Eigen::VectorXd::Zero(nb);
        M += rule.weights(q) * phi * phi.transpose();
        K -= rule.weights(q) * adphi * phi.transpose();
        w1 += rule.weights(q) * phi;
      }
      const int i0 = d.index(side, r.triangle, 0);
      add_block(mtrip, i0, i0, M);
      add_block(ktrip, i0, i0, K);
      ops.integral_weights.segment(i0, nb) += w1;
    }

    for (int e : tp.interior_edges) {
      const TriEdge& ed = mesh.edges[e];
      const auto seg = clip_segment(mesh.vertices[ed.v[0]], mesh.vertices[ed.v[1]], line, side);
      if (!seg || !((*seg)[1] - (*seg)[0]).norm()) continue;
      const Vec2 n = mesh.edge_normal(e);
      const double an = a.dot(n), lam = std::abs(an);
      const int tm = ed.tri[0], tpl = ed.tri[1];
      const Rule2D<double> rule = segment_rule<double>(degree + 1, (*seg)[0], (*seg)[1]);
      Eigen::MatrixXd Bmm = Eigen::MatrixXd::Zero(nb, nb), Bmp = Bmm, Bpm = Bmm, Bpp = Bmm;
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Vec2 x = rule.points.col(q);
        const Eigen::VectorXd pm = b.eval(ops.frames[tm], x), pp = b.eval(ops.frames[tpl], x);
        const double w = rule.weights(q), up = 0.5 * (an + lam), dn = 0.5 * (an - lam);
        Bmm += w * up * pm * pm.transpose();
        Bmp += w * dn * pm * pp.transpose();
        Bpm -= w * up * pp * pm.transpose();
        Bpp -= w * dn * pp * pp.transpose();
      }
      const int im = d.index(side, tm, 0), ip = d.index(side, tpl, 0);
      add_block(ktrip, im, im, Bmm);
      add_block(ktrip, im, ip, Bmp);
      add_block(ktrip, ip, im, Bpm);
      add_block(ktrip, ip, ip, Bpp);
    }

    for (int e : tp.boundary_edges) {
      const TriEdge& ed = mesh.edges[e];
      const auto seg = clip_segment(mesh.vertices[ed.v[0]], mesh.vertices[ed.v[1]], line, side);
      if (!seg || !((*seg)[1] - (*seg)[0]).norm()) continue;
      const Vec2 n = mesh.edge_normal(e);
      const double an = a.dot(n), lam = std::abs(an);
      const bool inflow = ed.tag == BoundaryTag::left || ed.tag == BoundaryTag::bottom;
      const int t = ed.tri[0];
      const int i0 = d.index(side, t, 0);
      const Rule2D<double> rule = segment_rule<double>(degree + 1, (*seg)[0], (*seg)[1]);
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nb, nb);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Vec2 x = rule.points.col(q);
        const Eigen::VectorXd phi = b.eval(ops.frames[t], x);
        const double w = rule.weights(q);
        const double cu = inflow ? 0.5 * (an + lam) : an;
        B += w * cu * phi * phi.transpose();
        ops.outflux_u.segment(i0, nb) += w * cu * phi;
        if (inflow) {
          const int col = static_cast<int>(ops.inflow_points.size());
          ops.inflow_points.push_back(x);
          outflux_g.push_back(w * 0.5 * (an - lam));
          for (int i = 0; i < nb; ++i) btrip.emplace_back(i0 + i, col, -w * 0.5 * (an - lam) * phi(i));
        }
      }
      add_block(ktrip, i0, i0, B);
    }
  }

  const double l1 = penalties.lambda_1, l2 = penalties.lambda_2;
  for (const InterfacePiece& pc : interface_pieces(ops)) {
    if (!(pc.q - pc.p).norm()) continue;
    const Rule2D<double> rule = segment_rule<double>(degree + 1, pc.p, pc.q);
    Eigen::MatrixXd B11 = Eigen::MatrixXd::Zero(nb, nb), B12 = B11, B21 = B11, B22 = B11;
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const Vec2 x = rule.points.col(q);
      const Eigen::VectorXd p1 = b.eval(ops.frames[pc.t1], x), p2 = b.eval(ops.frames[pc.t2], x);
      const double w = rule.weights(q);
      B11 += w * (1 - l1) * a1n * p1 * p1.transpose();
      B12 += w * l1 * a2n * p1 * p2.transpose();
      B22 += w * (-1 - l2) * a2n * p2 * p2.transpose();
      B21 += w * l2 * a1n * p2 * p1.transpose();
    }
    const int i1 = d.index(1, pc.t1, 0), i2 = d.index(2, pc.t2, 0);
    add_block(ktrip, i1, i1, B11);
    add_block(ktrip, i1, i2, B12);
    add_block(ktrip, i2, i1, B21);
    add_block(ktrip, i2, i2, B22);
  }

  emit_ghost_2d(ops, 1, penalties.gamma_M, mtrip);
  emit_ghost_2d(ops, 0, penalties.gamma_A, ktrip);

  ops.mass.resize(d.size, d.size);
  ops.mass.setFromTriplets(mtrip.begin(), mtrip.end());
  ops.spatial.resize(d.size, d.size);
  ops.spatial.setFromTriplets(ktrip.begin(), ktrip.end());
  const int np = static_cast<int>(ops.inflow_points.size());
  ops.inflow.resize(d.size, np);
  ops.inflow.setFromTriplets(btrip.begin(), btrip.end());
  ops.outflux_g = Eigen::Map<Eigen::VectorXd>(outflux_g.data(), np);
  return ops;
}

SparseMatrix ghost_penalty_2d(const Operators2D& ops, int s) {
  Triplets trip;
  Operators2D unit = ops;
  unit.penalties = PenaltyConfig{};
  emit_ghost_2d(unit, s, 1.0, trip);
  SparseMatrix J(ops.dofs.size, ops.dofs.size);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

Eigen::VectorXd project_2d(const Operators2D& ops, const PlaneFunction& f, int quadrature_degree) {
  const auto& b = triangle_basis(ops.degree);
  const int nb = ops.dofs.block;
  const int deg = quadrature_degree >= 0 ? quadrature_degree : 2 * ops.degree + 4;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ops.dofs.size);
  for (int side = 1; side <= 2; ++side)
    for (const CutRegion2D& r : ops.side(side).regions) {
      if (!has_area(r)) continue;
      const Rule2D<double> rule = region_rule(ops.mesh, r, deg);
      const int i0 = ops.dofs.index(side, r.triangle, 0);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Vec2 x = rule.points.col(q);
        rhs.segment(i0, nb) += rule.weights(q) * f(side, x) * b.eval(ops.frames[r.triangle], x);
      }
    }
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(ops.mass);
  if (ldlt.info() != Eigen::Success) throw Error(Errc::singular_mass, "2D mass factorization failed");
  Eigen::VectorXd u = ldlt.solve(rhs);
  if (!u.allFinite()) throw Error(Errc::singular_mass, "2D mass solve failed");
  return u;
}

double evaluate_2d(const Operators2D& ops, const Eigen::VectorXd& u, int side, int tri, const Vec2& x) {
  const auto& b = triangle_basis(ops.degree);
  return b.eval(ops.frames[tri], x).dot(u.segment(ops.dofs.index(side, tri, 0), ops.dofs.block));
}

double integral_2d(const Operators2D& ops, const Eigen::VectorXd& u) { return ops.integral_weights.dot(u); }

double l2_error_2d(const Operators2D& ops, const Eigen::VectorXd& u, const PlaneFunction& exact) {
  double e2 = 0;
  for (int side = 1; side <= 2; ++side)
    for (const CutRegion2D& r : ops.side(side).regions) {
      if (!has_area(r)) continue;
      const Rule2D<double> rule = region_rule(ops.mesh, r, 2 * ops.degree + 3);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Vec2 x = rule.points.col(q);
        const double diff = evaluate_2d(ops, u, side, r.triangle, x) - exact(side, x);
        e2 += rule.weights(q) * diff * diff;
      }
    }
  return std::sqrt(e2);
}

double dt_2d(const Operators2D& ops) {
  return 0.5 * ops.mesh.cell_size() / ((2 * ops.degree + 1) * std::max(ops.a1.norm(), ops.a2.norm()));
}

Run2DResult advance_2d(const Operators2D& ops, const Eigen::VectorXd& u0, const PlaneTimeFunction& g, double t_end,
                       double dt, const RkScheme& scheme, int record_every) {
  if (!(dt > 0) || !(t_end >= 0)) throw Error(Errc::invalid_extent, "non-positive time step");
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(ops.mass);
  if (ldlt.info() != Eigen::Success) throw Error(Errc::solver_failure, "2D mass factorization failed");
  const auto& pts = ops.inflow_points;
  const BoundaryDataLadder ladder([&](double t) {
    Eigen::VectorXd v(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) v(k) = g ? g(pts[k], t) : 0.0;
    return v;
  });

  Run2DResult res;
  res.u = u0;
  const double I0 = integral_2d(ops, u0);
  res.times.push_back(0);
  res.conservation.push_back(0);
  const int n = t_end > 0 ? std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9))) : 0;
  const double step = n ? t_end / n : 0;
  double net = 0;
  for (int k = 0; k < n; ++k) {
    const double t = k * step;
    const auto gs = ladder.stage_values(scheme, t, step);
    double outflow = 0;
    res.u = rk_step(
        scheme,
        [&](int i, double, const Eigen::VectorXd& U) {
          outflow += scheme.b(i) * (ops.outflux_u.dot(U) + ops.outflux_g.dot(gs[i]));
          Eigen::VectorXd rhs = -(ops.spatial * U) + ops.inflow * gs[i];
          return Eigen::VectorXd(ldlt.solve(rhs));
        },
        res.u, t, step);
    net -= step * outflow;
    ++res.steps;
    if ((k + 1) % std::max(1, record_every) == 0 || k + 1 == n) {
      res.times.push_back(t + step);
      res.conservation.push_back(net - (integral_2d(ops, res.u) - I0));
    }
  }
  return res;
}

}  // namespace cutdg
