#include "cutdg/spacetime.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

#include "cutdg/error.hpp"
#include "cutdg/quadrature.hpp"
#include "kernel1d.hpp"

namespace cutdg {

double SpatialField::value(int side, int elem, double x) const {
  const auto& b = detail::interval_basis(degree);
  return b.eval(mesh.nodes[elem], mesh.nodes[elem + 1], x).dot(element(side, elem));
}

SpatialField SpatialField::zeros(const BackgroundMesh1D& mesh, int degree, std::array<int, 2> first,
                                 std::array<int, 2> last) {
  SpatialField f;
  f.mesh = mesh;
  f.degree = degree;
  f.first = first;
  f.last = last;
  for (int s = 0; s < 2; ++s) f.coeffs[s] = Eigen::VectorXd::Zero(std::max(0, last[s] - first[s] + 1) * (degree + 1));
  return f;
}

SpatialField SpatialField::from_operators(const DgOperators& ops, const Eigen::VectorXd& u) {
  if (ops.dofs.components != 1) throw Error(Errc::inconsistent_topologies, "scalar fields only");
  SpatialField f = zeros(ops.mesh, ops.degree, ops.dofs.first, ops.dofs.last);
  for (int s = 1; s <= 2; ++s) f.coeffs[s - 1] = u.segment(ops.dofs.offset[s - 1], f.coeffs[s - 1].size());
  return f;
}

TimeQuadrature TimeQuadrature::make(TimeQuadratureKind kind) {
  TimeQuadrature q;
  q.kind = kind;
  if (kind == TimeQuadratureKind::trapezoid) {
    q.tau = {0.0, 1.0};
    q.fraction = {0.5, 0.5};
  } else {
    q.tau = {0.0, 0.5, 1.0};
    q.fraction = {1.0 / 6, 4.0 / 6, 1.0 / 6};
  }
  return q;
}

SlabSpace SlabSpace::make(const SlabTopology& slab, int rs, int rt, int lo, int hi) {
  SlabSpace sp;
  sp.rs = rs;
  sp.rt = rt;
  sp.slab = slab;
  for (int side = 1; side <= 2; ++side) {
    const auto& act = slab.active(side);
    int f = hi + 1, l = lo - 1;
    for (int j : act)
      if (j >= lo && j <= hi) {
        f = std::min(f, j);
        l = std::max(l, j);
      }
    if (l < f) throw Error(Errc::inconsistent_topologies, "region misses a side of the interface");
    sp.first[side - 1] = f;
    sp.last[side - 1] = l;
  }
  const int n1 = sp.last[0] - sp.first[0] + 1, n2 = sp.last[1] - sp.first[1] + 1;
  sp.offset = {0, n1 * sp.block()};
  sp.size = (n1 + n2) * sp.block();
  return sp;
}

namespace {

struct TimeBasis {
  Eigen::VectorXd psi;
  Eigen::VectorXd dpsi;  // d/dtau
};

TimeBasis time_basis(int rt, double tau) {
  const auto& b = detail::interval_basis(rt);
  TimeBasis t;
  t.psi = b.eval(0.0, 1.0, tau, 0);
  t.dpsi = rt > 0 ? b.eval(0.0, 1.0, tau, 1) : Eigen::VectorXd::Zero(1);
  return t;
}

class SlabSink : public detail::Sink {
 public:
  SlabSink(const SlabSpace& sp, std::vector<Eigen::Triplet<double>>& trip, Eigen::VectorXd& rhs)
      : sp_(sp), trip_(trip), rhs_(rhs) {}

  void matrix(const detail::LocalDof& v, const detail::LocalDof& u, double value) override {
    for (int lv = 0; lv <= sp_.rt; ++lv)
      for (int lu = 0; lu <= sp_.rt; ++lu) {
        const double f = T(lv, lu);
        if (f == 0.0) continue;
        trip_.emplace_back(sp_.index(v.side, v.elem, lv, v.mode), sp_.index(u.side, u.elem, lu, u.mode), value * f);
      }
  }

  void data(const detail::LocalDof& v, int end, int, double value) override {
    for (int lv = 0; lv <= sp_.rt; ++lv) rhs_(sp_.index(v.side, v.elem, lv, v.mode)) += value * d(lv) * g[end];
  }

  Eigen::MatrixXd T;
  Eigen::VectorXd d;
  std::array<double, 2> g{0, 0};

 private:
  const SlabSpace& sp_;
  std::vector<Eigen::Triplet<double>>& trip_;
  Eigen::VectorXd& rhs_;
};

int region_hi(const SlabProblem& p) { return p.hi < 0 ? p.mesh->n_elements - 1 : p.hi; }

// Instantaneous side spans cropped to the region.
std::vector<detail::SideSpan> spans_at(const SlabProblem& p, double t) {
  const BackgroundMesh1D& m = *p.mesh;
  const auto [s1, s2] = classify(m, p.path.position(t));
  const int lo = p.lo, hi = region_hi(p);
  detail::SideSpan a{1, std::max(s1.first, lo), std::min(s1.last, hi), std::max(s1.x_begin, m.nodes[lo]), s1.x_end};
  detail::SideSpan b{2, std::max(s2.first, lo), std::min(s2.last, hi), s2.x_begin, std::min(s2.x_end, m.nodes[hi + 1])};
  if (a.last < a.first || b.last < b.first)
    throw Error(Errc::inconsistent_topologies, "interface leaves the slab region");
  return {a, b};
}

detail::Snapshot snapshot_at(const SlabProblem& p, double t) {
  detail::Snapshot s;
  s.mesh = p.mesh;
  s.degree = p.rs;
  s.spans = spans_at(p, t);
  s.A = {Eigen::MatrixXd::Constant(1, 1, p.a1), Eigen::MatrixXd::Constant(1, 1, p.a2)};
  s.speed = {std::abs(p.a1), std::abs(p.a2)};
  s.left = p.left.kind;
  s.right = p.right.kind;
  s.interface = true;
  s.x_gamma = s.spans[0].x_end;
  s.lambda = {p.penalties.lambda_1, p.penalties.lambda_2};
  const double xp = p.path.velocity(t);
  const Eigen::MatrixXd rel1 = Eigen::MatrixXd::Constant(1, 1, p.a1 - xp);
  const Eigen::MatrixXd rel2 = Eigen::MatrixXd::Constant(1, 1, p.a2 - xp);
  s.iface_jump = {rel1, rel2};
  if (p.formulation == Formulation::integrated_by_parts)
    s.iface_flux = {rel1, rel2};
  else
    s.iface_flux = s.A;
  return s;
}

double end_value(const SlabEnd& e, int q, double t) { return e.value ? e.value(q, t) : 0.0; }

double slab_value(const BackgroundMesh1D& mesh, const SlabSpace& sp, const Eigen::VectorXd& sol, int side, int elem,
                  double x, double tau) {
  const auto& b = detail::interval_basis(sp.rs);
  const Eigen::VectorXd phi = b.eval(mesh.nodes[elem], mesh.nodes[elem + 1], x);
  const Eigen::VectorXd psi = time_basis(sp.rt, tau).psi;
  double v = 0;
  for (int l = 0; l <= sp.rt; ++l)
    v += psi(l) * phi.dot(sol.segment(sp.index(side, elem, l, 0), sp.rs + 1));
  return v;
}

void check_sweep(const BackgroundMesh1D& m, const InterfacePath& path, double t0, double dt) {
  double lo = path.position(t0), hi = lo;
  for (int i = 1; i < slab_time_samples; ++i) {
    const double x = path.position(t0 + dt * i / (slab_time_samples - 1));
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi - lo >= m.h())
    throw Error(Errc::slab_sweeps_more_than_one_element, "interface moves " + std::to_string(hi - lo) + " in one slab");
}

}  // namespace

SlabSystem assemble_slab(const SlabProblem& p, double t_start, double dt, const SpatialField& u_prev) {
  return assemble_slab(p, t_start, dt, [&](int side, int elem, double x) {
    if (!u_prev.has(side, elem))
      throw Error(Errc::inconsistent_topologies, "previous slab does not cover element " + std::to_string(elem));
    return u_prev.value(side, elem, x);
  });
}

SlabSystem assemble_slab(const SlabProblem& p, double t_start, double dt, const TraceFunction& u_prev) {
  if (!p.mesh) throw Error(Errc::invalid_extent, "slab problem without mesh");
  if (!(dt > 0)) throw Error(Errc::invalid_extent, "non-positive slab length");
  const BackgroundMesh1D& m = *p.mesh;
  check_sweep(m, p.path, t_start, dt);
  const TimeQuadrature& quad = p.quadrature;

  std::vector<double> extra;
  for (int q = 0; q < quad.size(); ++q) extra.push_back(quad.point(q, t_start, dt));
  const SlabTopology topo = slab_topology(m, p.path, t_start, t_start + dt, extra);

  SlabSystem sys;
  sys.space = SlabSpace::make(topo, p.rs, p.rt, p.lo, region_hi(p));
  sys.t_start = t_start;
  sys.dt = dt;
  const SlabSpace& sp = sys.space;
  sys.rhs = Eigen::VectorXd::Zero(sp.size);
  std::vector<Eigen::Triplet<double>> trip;
  SlabSink sink(sp, trip, sys.rhs);
  const int nt = p.rt + 1;
  const TimeBasis at0 = time_basis(p.rt, 0.0), at1 = time_basis(p.rt, 1.0);

  if (p.mask.time) {
    if (p.formulation == Formulation::integrated_by_parts) {
      sink.T = at1.psi * at1.psi.transpose();
      detail::emit_mass(m, p.rs, 1, spans_at(p, t_start + dt), sink);
    } else {
      sink.T = at0.psi * at0.psi.transpose();
      detail::emit_mass(m, p.rs, 1, spans_at(p, t_start), sink);
    }
  }

  for (int q = 0; q < quad.size(); ++q) {
    const double t = quad.point(q, t_start, dt), w = quad.weight(q, dt);
    const TimeBasis tb = time_basis(p.rt, quad.tau[q]);
    const double xp = p.path.velocity(t);
    if ((p.a1 - xp) * (p.a2 - xp) <= 0 || (p.a1 - xp) * p.a1 <= 0) ++sys.sign_warnings;

    if (p.mask.time) {
      if (p.formulation == Formulation::integrated_by_parts)
        sink.T = -(w / dt) * tb.dpsi * tb.psi.transpose();
      else
        sink.T = (w / dt) * tb.psi * tb.dpsi.transpose();
      detail::emit_mass(m, p.rs, 1, spans_at(p, t), sink);
    }

    sink.T = w * tb.psi * tb.psi.transpose();
    sink.d = w * tb.psi;
    sink.g = {end_value(p.left, q, t), end_value(p.right, q, t)};
    detail::emit_spatial(snapshot_at(p, t), sink, {p.mask.volume, p.mask.edges, p.mask.ends, p.mask.interface});
  }

  if (p.mask.ghost && p.penalties.gamma_A != 0.0) {
    sink.T = dt * Eigen::MatrixXd::Identity(nt, nt);
    for (int side = 1; side <= 2; ++side) {
      std::vector<int> faces;
      for (int k : topo.stabilized_faces(side))
        if (sp.has(side, k - 1) && sp.has(side, k)) faces.push_back(k);
      detail::emit_ghost(m, p.rs, 1, side, faces, 0, p.penalties, p.penalties.gamma_A, sink);
    }
  }

  // Upwind trace of the previous slab at t_start.
  const auto& b = detail::interval_basis(p.rs);
  for (const detail::SideSpan& s : spans_at(p, t_start)) {
    for (int j = s.first; j <= s.last; ++j) {
      const double a = std::max(m.nodes[j], s.x_begin), c = std::min(m.nodes[j + 1], s.x_end);
      if (!(c > a)) continue;
      const Rule1D<double> rule = gauss_rule<double>(p.rs + 3, a, c);
      Eigen::VectorXd proj = Eigen::VectorXd::Zero(p.rs + 1);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const double x = rule.points(0, q);
        proj += rule.weights(q) * u_prev(s.side, j, x) * b.eval(m.nodes[j], m.nodes[j + 1], x);
      }
      for (int l = 0; l < nt; ++l) sys.rhs.segment(sp.index(s.side, j, l, 0), p.rs + 1) += at0.psi(l) * proj;
    }
  }

  sys.matrix.resize(sp.size, sp.size);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

namespace {

// Hager's estimate of the 1-norm of the inverse.
double inverse_norm_estimate(const Eigen::SparseLU<SparseMatrix>& lu, const Eigen::SparseLU<SparseMatrix>& lut,
                             int n) {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double est = 0;
  for (int it = 0; it < 5; ++it) {
    const Eigen::VectorXd y = lu.solve(x);
    est = y.lpNorm<1>();
    const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = lut.solve(xi);
    Eigen::Index j;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x(j) = 1;
  }
  return est;
}

}  // namespace

Eigen::VectorXd solve_slab(const SlabSystem& system, SlabSolveInfo* info, bool estimate_condition) {
  Eigen::SparseLU<SparseMatrix> lu;
  SparseMatrix A = system.matrix;
  A.makeCompressed();
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(Errc::singular_system, "slab factorization failed");
  Eigen::VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw Error(Errc::singular_system, "slab solve failed");
  if (info && estimate_condition) {
    SparseMatrix At = A.transpose();
    At.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lut(At);
    double norm1 = 0;
    for (int k = 0; k < A.outerSize(); ++k) {
      double col = 0;
      for (SparseMatrix::InnerIterator it(A, k); it; ++it) col += std::abs(it.value());
      norm1 = std::max(norm1, col);
    }
    info->condition_estimate = norm1 * inverse_norm_estimate(lu, lut, static_cast<int>(A.rows()));
  }
  return x;
}

SpatialField slab_trace(const BackgroundMesh1D& mesh, const SlabSystem& system, const Eigen::VectorXd& sol,
                        double tau) {
  const SlabSpace& sp = system.space;
  SpatialField f = SpatialField::zeros(mesh, sp.rs, sp.first, sp.last);
  const Eigen::VectorXd psi = time_basis(sp.rt, tau).psi;
  for (int side = 1; side <= 2; ++side)
    for (int j = sp.first[side - 1]; j <= sp.last[side - 1]; ++j) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(sp.rs + 1);
      for (int l = 0; l <= sp.rt; ++l) c += psi(l) * sol.segment(sp.index(side, j, l, 0), sp.rs + 1);
      f.coeffs[side - 1].segment((j - sp.first[side - 1]) * (sp.rs + 1), sp.rs + 1) = c;
    }
  return f;
}

namespace {

template <typename F>
double side_integral(const SpatialField& u, int side, double a0, double b0, F&& g) {
  double total = 0;
  const auto& m = u.mesh;
  for (int j = u.first[side - 1]; j <= u.last[side - 1]; ++j) {
    const double a = std::max(m.nodes[j], a0), c = std::min(m.nodes[j + 1], b0);
    if (!(c > a)) continue;
    const Rule1D<double> rule = gauss_rule<double>(u.degree + 2, a, c);
    for (Eigen::Index q = 0; q < rule.size(); ++q) total += rule.weights(q) * g(u.value(side, j, rule.points(0, q)));
  }
  return total;
}

}  // namespace

double field_integral(const SpatialField& u, double x_gamma, double x_lo, double x_hi) {
  auto id = [](double v) { return v; };
  return side_integral(u, 1, x_lo, x_gamma, id) + side_integral(u, 2, x_gamma, x_hi, id);
}

double field_energy(const SpatialField& u, double x_gamma, double eta) {
  auto sq = [](double v) { return v * v; };
  return 0.5 * side_integral(u, 1, u.mesh.x_left, x_gamma, sq) +
         0.5 * eta * side_integral(u, 2, x_gamma, u.mesh.x_right, sq);
}

std::pair<double, double> slab_end_fluxes(const SlabProblem& p, const SlabSystem& sys, const Eigen::VectorXd& sol) {
  const BackgroundMesh1D& m = *p.mesh;
  const SlabSpace& sp = sys.space;
  double in = 0, out = 0;
  for (int q = 0; q < p.quadrature.size(); ++q) {
    const double t = p.quadrature.point(q, sys.t_start, sys.dt), w = p.quadrature.weight(q, sys.dt);
    const auto spans = spans_at(p, t);
    const auto& s1 = spans.front();
    const auto& s2 = spans.back();
    const double uL = slab_value(m, sp, sol, 1, s1.first, s1.x_begin, p.quadrature.tau[q]);
    const double uR = slab_value(m, sp, sol, 2, s2.last, s2.x_end, p.quadrature.tau[q]);
    const double l1 = std::abs(p.a1), l2 = std::abs(p.a2);
    double fL = 0, fR = 0;
    switch (p.left.kind) {
      case EndKind::data: fL = 0.5 * (p.a1 + l1) * end_value(p.left, q, t) + 0.5 * (p.a1 - l1) * uL; break;
      case EndKind::extrapolate: fL = p.a1 * uL; break;
      case EndKind::prescribed: fL = end_value(p.left, q, t); break;
    }
    switch (p.right.kind) {
      case EndKind::data: fR = 0.5 * (p.a2 + l2) * uR + 0.5 * (p.a2 - l2) * end_value(p.right, q, t); break;
      case EndKind::extrapolate: fR = p.a2 * uR; break;
      case EndKind::prescribed: fR = end_value(p.right, q, t); break;
    }
    in += w * fL;
    out += w * fR;
  }
  return {in, out};
}

SpatialField project_field(const BackgroundMesh1D& mesh, double x_gamma, int degree, const PenaltyConfig& penalties,
                           const std::function<double(int side, double x)>& f) {
  const FluxModel unit = FluxModel::scalar(1, 1);
  const DgOperators ops = assemble_operators(mesh, x_gamma, degree, penalties, unit, BoundarySpec::upwind(unit));
  return SpatialField::from_operators(ops, project_initial(ops, f));
}

namespace {

double jump_energy(const SpatialField& plus, const SpatialField& minus, double x_gamma) {
  double total = 0;
  const auto& m = plus.mesh;
  for (int side = 1; side <= 2; ++side) {
    const double a0 = side == 1 ? m.x_left : x_gamma, b0 = side == 1 ? x_gamma : m.x_right;
    for (int j = plus.first[side - 1]; j <= plus.last[side - 1]; ++j) {
      const double a = std::max(m.nodes[j], a0), c = std::min(m.nodes[j + 1], b0);
      if (!(c > a) || !minus.has(side, j)) continue;
      const Rule1D<double> rule = gauss_rule<double>(plus.degree + 2, a, c);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const double x = rule.points(0, q);
        const double d = plus.value(side, j, x) - minus.value(side, j, x);
        total += rule.weights(q) * d * d;
      }
    }
  }
  return 0.5 * total;
}

}  // namespace

SpaceTimeResult advance(const SpaceTimeConfig& c) {
  if (!(c.dt > 0) || !(c.t_end > 0)) throw Error(Errc::invalid_extent, "non-positive time step or end time");
  const BackgroundMesh1D& m = c.mesh;
  SlabProblem p;
  p.mesh = &m;
  p.a1 = c.a1;
  p.a2 = c.a2;
  p.penalties = c.penalties;
  p.path = c.path;
  p.rs = c.rs;
  p.rt = c.rt;
  p.quadrature = TimeQuadrature::make(c.quadrature);
  p.formulation = c.formulation;
  p.left = {EndKind::data, [g = c.inflow](int, double t) { return g ? g(t) : 0.0; }};
  p.right = {EndKind::extrapolate, {}};

  SpaceTimeResult res;
  SpatialField u = project_field(m, c.path.position(0), c.rs, c.penalties, c.initial);
  const double I0 = field_integral(u, c.path.position(0), m.x_left, m.x_right);
  res.times.push_back(0);
  res.conservation.push_back(0);
  res.energy.push_back(field_energy(u, c.path.position(0)));
  res.jump_dissipation.push_back(0);

  const int n = std::max(1, static_cast<int>(std::ceil(c.t_end / c.dt - 1e-9)));
  const double dt = c.t_end / n;
  double net_flux = 0;
  for (int k = 0; k < n; ++k) {
    const double t0 = k * dt, t1 = (k + 1 == n) ? c.t_end : (k + 1) * dt;
    const SlabSystem sys = assemble_slab(p, t0, t1 - t0, u);
    SlabSolveInfo info;
    const Eigen::VectorXd sol = solve_slab(sys, &info, c.estimate_condition);
    if (info.condition_estimate) res.max_condition = std::max(res.max_condition, *info.condition_estimate);
    res.sign_warnings += sys.sign_warnings;
    const auto [in, out] = slab_end_fluxes(p, sys, sol);
    net_flux += in - out;
    const SpatialField start = slab_trace(m, sys, sol, 0.0);
    SpatialField end = slab_trace(m, sys, sol, 1.0);
    const double xg = c.path.position(t1);
    res.times.push_back(t1);
    res.conservation.push_back(net_flux - (field_integral(end, xg, m.x_left, m.x_right) - I0));
    res.energy.push_back(field_energy(end, xg));
    res.jump_dissipation.push_back(jump_energy(start, u, c.path.position(t0)));
    u = std::move(end);
    ++res.slabs;
  }
  res.final = std::move(u);
  return res;
}

}  // namespace cutdg
