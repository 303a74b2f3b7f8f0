#include "cutdg/coupled.hpp"

#include <algorithm>
#include <cmath>

#include "cutdg/error.hpp"
#include "kernel1d.hpp"

namespace cutdg {

DomainPartition partition_for(const BackgroundMesh1D& mesh, const SlabTopology& slab, int pad) {
  const int n = mesh.n_elements;
  int lo = slab.active_1.back(), hi = slab.active_2.front();
  if (lo > hi) std::swap(lo, hi);
  for (int side = 1; side <= 2; ++side)
    for (int k : slab.stabilized_faces(side)) {
      lo = std::min(lo, k - 1);
      hi = std::max(hi, k);
    }
  for (int j : slab.swept_elements) {
    lo = std::min(lo, j);
    hi = std::max(hi, j);
  }
  DomainPartition p;
  p.n_elements = n;
  p.l_first = std::max(0, lo - pad);
  p.l_last = std::min(n - 1, hi + pad);
  return p;
}

ExplicitRegion make_explicit_region(const BackgroundMesh1D& mesh, int side, int first, int last, double a,
                                    EndKind left, EndKind right, int degree) {
  if (last < first) throw Error(Errc::empty_sub_extent, "explicit region without elements");
  ExplicitRegion r;
  r.side = side;
  r.first = first;
  r.last = last;
  r.degree = degree;
  r.a = a;
  r.left = left;
  r.right = right;
  DofMap1D& d = r.dofs;
  d.degree = degree;
  d.components = 1;
  d.first = {0, 0};
  d.last = {-1, -1};
  d.first[side - 1] = first;
  d.last[side - 1] = last;
  d.offset = {0, 0};
  d.size = (last - first + 1) * (degree + 1);

  detail::Snapshot snap;
  snap.mesh = &mesh;
  snap.degree = degree;
  snap.spans = {{side, first, last, mesh.nodes[first], mesh.nodes[last + 1]}};
  snap.A = {Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, a)};
  snap.speed = {std::abs(a), std::abs(a)};
  snap.left = left;
  snap.right = right;
  snap.interface = false;

  detail::TripletSink sink(d, 1);
  detail::emit_spatial(snap, sink);
  r.K = sink.build();
  r.b_left = sink.data_columns[0].col(0);
  r.b_right = sink.data_columns[1].col(0);

  detail::TripletSink msink(d, 1);
  detail::emit_mass(mesh, degree, 1, snap.spans, msink);
  r.mass_diag = msink.build().diagonal();
  return r;
}

Eigen::VectorXd ExplicitRegion::rate(const Eigen::VectorXd& u, double g_left, double g_right) const {
  Eigen::VectorXd rhs = -(K * u) + b_left * g_left + b_right * g_right;
  return rhs.cwiseQuotient(mass_diag);
}

Rk2Stages rk2_explicit_step(const ExplicitRegion& region, const Eigen::VectorXd& u, double dt,
                            std::array<double, 2> left_values, std::array<double, 2> right_values) {
  Rk2Stages s;
  s.stage1 = u + dt * region.rate(u, left_values[0], right_values[0]);
  s.next = 0.5 * (u + s.stage1) + 0.5 * dt * region.rate(s.stage1, left_values[1], right_values[1]);
  return s;
}

namespace {

Eigen::VectorXd gather(const SpatialField& f, int side, int first, int last) {
  const int nb = f.degree + 1;
  Eigen::VectorXd v(nb * (last - first + 1));
  for (int j = first; j <= last; ++j) {
    if (!f.has(side, j)) throw Error(Errc::inconsistent_topologies, "field misses element " + std::to_string(j));
    v.segment((j - first) * nb, nb) = f.element(side, j);
  }
  return v;
}

void scatter(SpatialField& f, int side, int first, const Eigen::VectorXd& v) {
  const int nb = f.degree + 1;
  const int count = static_cast<int>(v.size()) / nb;
  for (int j = first; j < first + count; ++j)
    f.coeffs[side - 1].segment((j - f.first[side - 1]) * nb, nb) = v.segment((j - first) * nb, nb);
}

double region_value(const BackgroundMesh1D& m, const ExplicitRegion& r, const Eigen::VectorXd& u, int elem, double x) {
  const auto& b = detail::interval_basis(r.degree);
  return b.eval(m.nodes[elem], m.nodes[elem + 1], x).dot(u.segment((elem - r.first) * (r.degree + 1), r.degree + 1));
}

}  // namespace

CoupledResult coupled_advance(const CoupledConfig& c) {
  if (!(c.dt > 0) || !(c.t_end > 0)) throw Error(Errc::invalid_extent, "non-positive time step or end time");
  const BackgroundMesh1D& m = c.mesh;
  const int n_el = m.n_elements;
  SlabProblem p;
  p.mesh = &m;
  p.a1 = c.a1;
  p.a2 = c.a2;
  p.penalties = c.penalties;
  p.path = c.path;
  p.rs = 1;
  p.rt = 1;
  p.quadrature = TimeQuadrature::make(c.quadrature);
  p.right = {EndKind::extrapolate, {}};
  auto g = [&](double t) { return c.inflow ? c.inflow(t) : 0.0; };

  CoupledResult res;
  SpatialField u = project_field(m, c.path.position(0), 1, c.penalties, c.initial);
  const double I0 = field_integral(u, c.path.position(0), m.x_left, m.x_right);
  res.times.push_back(0);
  res.conservation.push_back(0);

  const int steps = std::max(1, static_cast<int>(std::ceil(c.t_end / c.dt - 1e-9)));
  const double dt_uniform = c.t_end / steps;
  double net = 0;
  for (int k = 0; k < steps; ++k) {
    const double t0 = k * dt_uniform, t1 = (k + 1 == steps) ? c.t_end : (k + 1) * dt_uniform, dt = t1 - t0;
    std::vector<double> qt;
    for (int q = 0; q < p.quadrature.size(); ++q) {
      const double t = p.quadrature.point(q, t0, dt), xp = c.path.velocity(t);
      if (!(c.a1 - xp > 0 && c.a2 - xp > 0))
        throw Error(Errc::sign_condition_violated, "a_i - x' must stay positive, t=" + std::to_string(t));
      qt.push_back(t);
    }
    const SlabTopology topo = slab_topology(m, c.path, t0, t1, qt);
    const DomainPartition part = partition_for(m, topo, c.pad);
    res.partitions.push_back(part);

    // Left far field.
    Rk2Stages left;
    double f0 = 0, f1 = 0;
    if (part.has_left()) {
      const ExplicitRegion r1 = make_explicit_region(m, 1, 0, part.l_first - 1, c.a1, EndKind::data,
                                                     EndKind::extrapolate);
      const Eigen::VectorXd u1 = gather(u, 1, 0, part.l_first - 1);
      left = rk2_explicit_step(r1, u1, dt, {g(t0), g(t1)}, {0, 0});
      const double xe = part.x_e1(m);
      f0 = c.a1 * region_value(m, r1, u1, part.l_first - 1, xe);
      f1 = c.a1 * region_value(m, r1, left.stage1, part.l_first - 1, xe);
      p.left = {EndKind::prescribed, [=](int, double t) { return f0 + (t - t0) / dt * (f1 - f0); }};
    } else {
      p.left = {EndKind::data, [&](int, double t) { return g(t); }};
    }

    // Interface region.
    p.lo = part.l_first;
    p.hi = part.l_last;
    const SlabSystem sys = assemble_slab(p, t0, dt, u);
    const Eigen::VectorXd sol = solve_slab(sys);
    const auto [slab_in, slab_out] = slab_end_fluxes(p, sys, sol);
    const SpatialField start = slab_trace(m, sys, sol, 0.0);
    const SpatialField end = slab_trace(m, sys, sol, 1.0);
    double influx = slab_in, outflux = slab_out;
    if (part.has_left()) {
      res.flux_mismatch = std::max(res.flux_mismatch, std::abs(slab_in - 0.5 * dt * (f0 + f1)));
      influx = 0.5 * dt * c.a1 * (g(t0) + g(t1));
    }

    // Right far field.
    Rk2Stages right;
    if (part.has_right()) {
      const ExplicitRegion r2 = make_explicit_region(m, 2, part.l_last + 1, n_el - 1, c.a2, EndKind::prescribed,
                                                     EndKind::extrapolate);
      const Eigen::VectorXd u2 = gather(u, 2, part.l_last + 1, n_el - 1);
      const double xe = part.x_e2(m);
      const double v0 = c.a2 * start.value(2, part.l_last, xe), v1 = c.a2 * end.value(2, part.l_last, xe);
      right = rk2_explicit_step(r2, u2, dt, {v0, v1}, {0, 0});
      outflux = 0.5 * dt * c.a2 *
                (region_value(m, r2, u2, n_el - 1, m.x_right) + region_value(m, r2, right.stage1, n_el - 1, m.x_right));
    }

    const SlabSpace& sp = sys.space;
    SpatialField next = SpatialField::zeros(m, 1, {0, sp.first[1]}, {sp.last[0], n_el - 1});
    if (part.has_left()) scatter(next, 1, 0, left.next);
    scatter(next, 1, sp.first[0], end.coeffs[0]);
    scatter(next, 2, sp.first[1], end.coeffs[1]);
    if (part.has_right()) scatter(next, 2, part.l_last + 1, right.next);

    net += influx - outflux;
    res.times.push_back(t1);
    res.conservation.push_back(net - (field_integral(next, c.path.position(t1), m.x_left, m.x_right) - I0));
    u = std::move(next);
    ++res.slabs;
  }
  res.final = std::move(u);
  return res;
}

}  // namespace cutdg
