#include <doctest.h>

#include <random>

#include "cutdg/coupled.hpp"
#include "cutdg/norms.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace cutdg;

namespace {

const double pi = std::acos(-1.0);

CoupledConfig inflow_config(int n, double t_end, int pad = 0) {
  CoupledConfig c;
  c.mesh = build_mesh(-1, 1, n);
  c.path = InterfacePath::sinusoidal_in(-0.499, -1, 1);
  c.inflow = [](double t) { return std::sin(4 * pi * (-1 + 3 * t)); };
  c.initial = [](int, double) { return 0.0; };
  c.dt = c.mesh.h() / 12;
  c.t_end = t_end;
  c.pad = pad;
  return c;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("partition covers the swept and stabilized elements") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 20);
  const SlabTopology s = slab_topology(m, InterfacePath::linear(-0.02, 1.0), 0.0, 0.04);
  const DomainPartition p = partition_for(m, s);
  CHECK(p.l_first <= 8);
  CHECK(p.l_last >= 11);
  CHECK(p.has_left());
  CHECK(p.has_right());
  const DomainPartition q = partition_for(m, s, 2);
  CHECK(q.l_first == p.l_first - 2);
  CHECK(q.l_last == p.l_last + 2);
  const DomainPartition wide = partition_for(m, s, 100);
  CHECK_FALSE(wide.has_left());
  CHECK_FALSE(wide.has_right());
  CHECK(p.x_e1(m) == m.nodes[p.l_first]);
  CHECK(p.x_e2(m) == m.nodes[p.l_last + 1]);
}

TEST_CASE("partition regions outside the implicit block are never cut") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 40);
  const InterfacePath path = InterfacePath::sinusoidal_in(-0.499, -1, 1);
  const double dt = m.h() / 12;
  for (int k = 0; k < 200; ++k) {
    const double t0 = k * dt;
    const DomainPartition p = partition_for(m, slab_topology(m, path, t0, t0 + dt));
    for (double t : {t0, t0 + dt / 2, t0 + dt}) {
      const double x = path.position(t);
      CHECK(x > p.x_e1(m));
      CHECK(x < p.x_e2(m));
    }
  }
}

TEST_CASE("explicit region matches uncut upwind DG") {
  const int n = 7;
  const BackgroundMesh1D m = build_mesh(0, 1, n);
  for (int r = 0; r <= 3; ++r) {
    const ExplicitRegion reg = make_explicit_region(m, 1, 0, n - 1, 1.5, EndKind::data, EndKind::extrapolate, r);
    // Equal speeds with (0, -1) penalties reduce the coupling to the upwind flux.
    const oracle::FittedDg ref = oracle::fitted_dg(n, m.h(), 3, r, 1.5, 1.5, 0.0, -1.0);
    CAPTURE(r);
    CHECK((props::dense(reg.K) - ref.spatial).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((reg.b_left - ref.inflow).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(reg.b_right.cwiseAbs().maxCoeff() == 0.0);
    CHECK((reg.mass_diag.array() - m.h()).abs().maxCoeff() <= 1e-15);
  }
  CHECK_THROWS_AS(make_explicit_region(m, 1, 3, 2, 1.0, EndKind::data, EndKind::extrapolate), Error);
}

TEST_CASE("Heun step") {
  const BackgroundMesh1D m = build_mesh(0, 1, 6);
  const ExplicitRegion reg = make_explicit_region(m, 2, 1, 5, 1.0, EndKind::data, EndKind::extrapolate, 1);
  const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(reg.size(), -1, 2);
  const double dt = 0.01;
  // Zero operator input
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(reg.size());
  CHECK(rk2_explicit_step(reg, z, dt, {0, 0}, {0, 0}).next.norm() == 0.0);
  // u + dt L u + dt^2/2 L^2 u for homogeneous data.
  const Eigen::MatrixXd L = (-props::dense(reg.K)).array().colwise() / reg.mass_diag.array();
  const Eigen::VectorXd expect = u + dt * L * u + dt * dt / 2 * L * (L * u);
  const Rk2Stages s = rk2_explicit_step(reg, u, dt, {0, 0}, {0, 0});
  CHECK((s.stage1 - (u + dt * L * u)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((s.next - expect).cwiseAbs().maxCoeff() <= 1e-12);
  // Constant inflow state is steady.
  const Eigen::VectorXd c = Eigen::VectorXd::Map(std::vector<double>{3, 0, 3, 0, 3, 0, 3, 0, 3, 0}.data(), 10);
  CHECK((rk2_explicit_step(reg, c, dt, {3, 3}, {0, 0}).next - c).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("steady state across the implicit and explicit regions") {
  for (int pad : {0, 1}) {
    CAPTURE(pad);
    CHECK(props::coupled_steady_deviation(false, 20, 0.05, pad) <= 1e-12);
    CHECK(props::coupled_steady_deviation(true, 20, 0.05, pad) <= 1e-12);
    CHECK(props::coupled_steady_deviation(false, 20, 0.05, pad, TimeQuadratureKind::trapezoid) <= 1e-12);
  }
  // Two-point rule with a moving cut: consistent but not exact.
  const double trap = props::coupled_steady_deviation(true, 20, 0.05, 0, TimeQuadratureKind::trapezoid);
  CHECK(trap > 1e-8);
  CHECK(trap < 1e-2);
}

TEST_CASE("coupled scheme with the three-point rule conserves mass") {
  CoupledConfig c = inflow_config(40, 0.3);
  c.quadrature = TimeQuadratureKind::simpson;
  const CoupledResult r = coupled_advance(c);
  CHECK(max_abs(r.conservation) <= 1e-12);
  CHECK(r.flux_mismatch <= 1e-12);
}

TEST_CASE("coupled scheme conserves mass") {
  const CoupledResult r = coupled_advance(inflow_config(40, 0.6));
  CHECK(r.slabs > 0);
  CHECK(r.partitions.size() == static_cast<std::size_t>(r.slabs));
  CHECK(max_abs(r.conservation) <= 1e-12);
  CHECK(r.flux_mismatch <= 1e-12);
  const CoupledResult padded = coupled_advance(inflow_config(40, 0.3, 2));
  CHECK(max_abs(padded.conservation) <= 1e-12);
}

TEST_CASE("zero data stays zero") {
  CoupledConfig c = inflow_config(20, 0.1);
  c.inflow = [](double) { return 0.0; };
  const CoupledResult r = coupled_advance(c);
  CHECK(r.final.coeffs[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.final.coeffs[1].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("explicit upstream region ignores a downstream perturbation within one step") {
  CoupledConfig c = inflow_config(40, 0.0);
  c.initial = [](int, double x) { return std::cos(3 * x); };
  c.dt = c.mesh.h() / 12;
  c.t_end = c.dt;
  const CoupledResult base = coupled_advance(c);
  CoupledConfig d = c;
  d.initial = [](int side, double x) { return std::cos(3 * x) + (side == 2 && x > 0.5 ? 1.0 : 0.0); };
  const CoupledResult pert = coupled_advance(d);
  const DomainPartition& p = base.partitions.front();
  REQUIRE(p.has_left());
  // Side 1 elements left of the implicit region, away from the perturbation.
  for (int j = 0; j < p.l_first; ++j)
    CHECK((base.final.element(1, j) - pert.final.element(1, j)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coupled configuration errors") {
  CoupledConfig c = inflow_config(20, 0.1);
  c.dt = 0;
  CHECK_THROWS_AS(coupled_advance(c), Error);
  c = inflow_config(20, 0.05);
  c.path = InterfacePath::linear(-0.2, 1.5);
  c.dt = c.mesh.h() / 20;
  CHECK_THROWS_AS(coupled_advance(c), Error);
}
