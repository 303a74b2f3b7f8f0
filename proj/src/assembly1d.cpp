#include "cutdg/assembly1d.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>

#include "cutdg/error.hpp"
#include "cutdg/quadrature.hpp"
#include "kernel1d.hpp"

namespace cutdg {

double default_omega(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return 1.0 / (f * f * (2 * k + 1));
}

double PenaltyConfig::omega_k(int k) const {
  if (omega.empty()) return default_omega(k);
  return omega.at(k);
}

bool PenaltyConfig::conservative() const { return std::abs(lambda_2 - lambda_1 + 1.0) <= 1e-14; }

FluxModel FluxModel::scalar(double a1, double a2) {
  if (a1 == 0.0 || a2 == 0.0) throw Error(Errc::zero_speed, "scalar speed is zero");
  if (a1 * a2 < 0) throw Error(Errc::ill_posed_interface, "speeds of opposite sign");
  FluxModel f;
  f.kind = Kind::scalar;
  f.A1 = Eigen::MatrixXd::Constant(1, 1, a1);
  f.A2 = Eigen::MatrixXd::Constant(1, 1, a2);
  f.speed1 = std::abs(a1);
  f.speed2 = std::abs(a2);
  return f;
}

namespace {

double spectral_radius(const Eigen::MatrixXd& A) {
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

FluxModel FluxModel::system(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2) {
  return system(A1, A2, spectral_radius(A1), spectral_radius(A2));
}

FluxModel FluxModel::system(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2, double speed1, double speed2) {
  if (A1.rows() != A1.cols() || A1.rows() != A2.rows() || A2.rows() != A2.cols())
    throw Error(Errc::inconsistent_topologies, "flux matrices of different shapes");
  if (speed1 <= 0 || speed2 <= 0) throw Error(Errc::zero_speed, "zero spectral radius");
  FluxModel f;
  f.kind = Kind::system;
  f.A1 = A1;
  f.A2 = A2;
  f.speed1 = speed1;
  f.speed2 = speed2;
  return f;
}

BoundarySpec BoundarySpec::upwind(const FluxModel& flux) {
  const Eigen::VectorXd ev = flux.A1.eigenvalues().real();
  if (ev.minCoeff() > 0) return {EndKind::data, EndKind::extrapolate};
  if (ev.maxCoeff() < 0) return {EndKind::extrapolate, EndKind::data};
  return data_both();
}

DofMap1D DofMap1D::make(const ActiveTopology& s1, const ActiveTopology& s2, int degree, int components) {
  DofMap1D d;
  d.degree = degree;
  d.components = components;
  d.first = {s1.first, s2.first};
  d.last = {s1.last, s2.last};
  d.offset = {0, s1.size() * d.block()};
  d.size = (s1.size() + s2.size()) * d.block();
  return d;
}

namespace {

void check_pair(const ActiveTopology& s1, const ActiveTopology& s2) {
  if (s1.side != 1 || s2.side != 2 || s1.x_end != s2.x_begin || s1.size() <= 0 || s2.size() <= 0)
    throw Error(Errc::inconsistent_topologies, "topologies do not share an interface");
}

std::vector<detail::SideSpan> spans_of(const ActiveTopology& s1, const ActiveTopology& s2) {
  return {detail::span_of(s1), detail::span_of(s2)};
}

}  // namespace

SparseMatrix assemble_mass(const BackgroundMesh1D& mesh, const ActiveTopology& s1, const ActiveTopology& s2,
                           int degree, const PenaltyConfig& penalties, int components) {
  check_pair(s1, s2);
  const DofMap1D dofs = DofMap1D::make(s1, s2, degree, components);
  detail::TripletSink sink(dofs, components);
  detail::emit_mass(mesh, degree, components, spans_of(s1, s2), sink);
  for (const ActiveTopology* t : {&s1, &s2})
    detail::emit_ghost(mesh, degree, components, t->side, t->stabilized_faces, 1, penalties, penalties.gamma_M, sink);
  return sink.build();
}

SpatialPart assemble_spatial(const BackgroundMesh1D& mesh, const ActiveTopology& s1, const ActiveTopology& s2,
                             int degree, const PenaltyConfig& penalties, const FluxModel& flux,
                             const BoundarySpec& bc) {
  check_pair(s1, s2);
  const int m = flux.components();
  const DofMap1D dofs = DofMap1D::make(s1, s2, degree, m);
  detail::Snapshot snap;
  snap.mesh = &mesh;
  snap.degree = degree;
  snap.spans = spans_of(s1, s2);
  snap.A = {flux.A1, flux.A2};
  snap.speed = {flux.speed1, flux.speed2};
  snap.left = bc.left;
  snap.right = bc.right;
  snap.interface = true;
  snap.x_gamma = s1.x_end;
  snap.lambda = {penalties.lambda_1, penalties.lambda_2};
  snap.iface_flux = {flux.A1, flux.A2};
  snap.iface_jump = {flux.A1, flux.A2};

  detail::TripletSink sink(dofs, m);
  detail::emit_spatial(snap, sink);
  for (const ActiveTopology* t : {&s1, &s2})
    detail::emit_ghost(mesh, degree, m, t->side, t->stabilized_faces, 0, penalties, penalties.gamma_A, sink);
  return {sink.build(), sink.data_columns[0], sink.data_columns[1]};
}

SparseMatrix ghost_penalty(const BackgroundMesh1D& mesh, const ActiveTopology& s1, const ActiveTopology& s2,
                           int degree, int s, int components) {
  check_pair(s1, s2);
  const DofMap1D dofs = DofMap1D::make(s1, s2, degree, components);
  detail::TripletSink sink(dofs, components);
  const PenaltyConfig unit{};
  for (const ActiveTopology* t : {&s1, &s2})
    detail::emit_ghost(mesh, degree, components, t->side, t->stabilized_faces, s, unit, 1.0, sink);
  return sink.build();
}

DgOperators assemble_operators(const BackgroundMesh1D& mesh, double x_gamma, int degree,
                               const PenaltyConfig& penalties, const FluxModel& flux, const BoundarySpec& bc) {
  auto [s1, s2] = classify(mesh, x_gamma);
  DgOperators ops;
  ops.mesh = mesh;
  ops.degree = degree;
  ops.flux = flux;
  ops.penalties = penalties;
  ops.bc = bc;
  ops.x_gamma = s1.x_end;
  ops.dofs = DofMap1D::make(s1, s2, degree, flux.components());
  ops.mass = assemble_mass(mesh, s1, s2, degree, penalties, flux.components());
  SpatialPart sp = assemble_spatial(mesh, s1, s2, degree, penalties, flux, bc);
  ops.spatial = std::move(sp.spatial);
  ops.inflow_left = std::move(sp.inflow_left);
  ops.inflow_right = std::move(sp.inflow_right);
  ops.topo = {std::move(s1), std::move(s2)};
  return ops;
}

namespace {

Eigen::VectorXd project(const DgOperators& ops, const SideVectorFunction& f) {
  const auto& b = detail::interval_basis(ops.degree);
  const int m = ops.dofs.components;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ops.dofs.size);
  for (int side = 1; side <= 2; ++side) {
    const ActiveTopology& t = ops.side(side);
    for (int j = t.first; j <= t.last; ++j) {
      const double a = t.physical_left(ops.mesh, j), c = t.physical_right(ops.mesh, j);
      if (!(c > a)) continue;
      const Rule1D<double> rule = gauss_rule<double>(ops.degree + 6, a, c);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const double x = rule.points(0, q);
        const Eigen::VectorXd phi = b.eval(ops.mesh.nodes[j], ops.mesh.nodes[j + 1], x);
        const Eigen::VectorXd fx = f(side, x);
        for (int c2 = 0; c2 < m; ++c2)
          rhs.segment(ops.dofs.index(side, j, c2, 0), ops.degree + 1) += rule.weights(q) * fx(c2) * phi;
      }
    }
  }
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(ops.mass);
  if (ldlt.info() != Eigen::Success) throw Error(Errc::singular_mass, "mass factorization failed");
  Eigen::VectorXd u = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !u.allFinite()) throw Error(Errc::singular_mass, "mass solve failed");
  return u;
}

}  // namespace

Eigen::VectorXd project_initial(const DgOperators& ops, const SideFunction& f) {
  return project(ops, [&](int side, double x) { return Eigen::VectorXd::Constant(1, f(side, x)); });
}

Eigen::VectorXd project_initial(const DgOperators& ops, const SideVectorFunction& f) { return project(ops, f); }

double evaluate(const DgOperators& ops, const Eigen::VectorXd& u, int side, int elem, double x, int comp) {
  const auto& b = detail::interval_basis(ops.degree);
  const Eigen::VectorXd phi = b.eval(ops.mesh.nodes[elem], ops.mesh.nodes[elem + 1], x);
  return phi.dot(u.segment(ops.dofs.index(side, elem, comp, 0), ops.degree + 1));
}

double evaluate(const DgOperators& ops, const Eigen::VectorXd& u, int side, double x, int comp) {
  const ActiveTopology& t = ops.side(side);
  int j = static_cast<int>(std::floor((x - ops.mesh.x_left) / ops.mesh.h()));
  j = std::clamp(j, t.first, t.last);
  return evaluate(ops, u, side, j, x, comp);
}

Eigen::VectorXd total_integral(const DgOperators& ops, const Eigen::VectorXd& u) {
  const int m = ops.dofs.components;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
  for (int side = 1; side <= 2; ++side) {
    const ActiveTopology& t = ops.side(side);
    for (int j = t.first; j <= t.last; ++j) {
      const double a = t.physical_left(ops.mesh, j), c = t.physical_right(ops.mesh, j);
      if (!(c > a)) continue;
      const Rule1D<double> rule = gauss_rule<double>(ops.degree + 2, a, c);
      for (Eigen::Index q = 0; q < rule.size(); ++q)
        for (int comp = 0; comp < m; ++comp)
          total(comp) += rule.weights(q) * evaluate(ops, u, side, j, rule.points(0, q), comp);
    }
  }
  return total;
}

namespace {

Eigen::VectorXd trace(const DgOperators& ops, const Eigen::VectorXd& u, int side, int elem, double x) {
  Eigen::VectorXd v(ops.dofs.components);
  for (int c = 0; c < v.size(); ++c) v(c) = evaluate(ops, u, side, elem, x, c);
  return v;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> boundary_fluxes(const DgOperators& ops, const Eigen::VectorXd& u,
                                                            const Eigen::VectorXd& g_left,
                                                            const Eigen::VectorXd& g_right) {
  const ActiveTopology& t1 = ops.side(1);
  const ActiveTopology& t2 = ops.side(2);
  const Eigen::MatrixXd& A1 = ops.flux.A1;
  const Eigen::MatrixXd& A2 = ops.flux.A2;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A1.rows(), A1.cols());
  const Eigen::VectorXd uL = trace(ops, u, 1, t1.first, ops.mesh.x_left);
  const Eigen::VectorXd uR = trace(ops, u, 2, t2.last, ops.mesh.x_right);
  const double l1 = ops.flux.speed1, l2 = ops.flux.speed2;

  Eigen::VectorXd fL, fR;
  switch (ops.bc.left) {
    case EndKind::data: fL = 0.5 * (A1 + l1 * I) * g_left + 0.5 * (A1 - l1 * I) * uL; break;
    case EndKind::extrapolate: fL = A1 * uL; break;
    case EndKind::prescribed: fL = g_left; break;
  }
  switch (ops.bc.right) {
    case EndKind::data: fR = 0.5 * (A2 + l2 * I) * uR + 0.5 * (A2 - l2 * I) * g_right; break;
    case EndKind::extrapolate: fR = A2 * uR; break;
    case EndKind::prescribed: fR = g_right; break;
  }
  return {fL, fR};
}

Eigen::VectorXd ones_test_vector(const DofMap1D& dofs, int comp) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dofs.size);
  for (int side = 1; side <= 2; ++side)
    for (int j = dofs.first[side - 1]; j <= dofs.last[side - 1]; ++j) v(dofs.index(side, j, comp, 0)) = 1.0;
  return v;
}

}  // namespace cutdg
