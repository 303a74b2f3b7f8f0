#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cutdg/analysis.hpp"
#include "cutdg/assembly1d.hpp"
#include "cutdg/assembly2d.hpp"
#include "cutdg/coupled.hpp"
#include "cutdg/norms.hpp"
#include "cutdg/quadrature.hpp"
#include "cutdg/spacetime.hpp"
#include "oracles.hpp"

// Property checks shared by the unit tests and the acceptance driver. Each returns the measured quantity; the
// caller compares it with the tolerance.
namespace props {

using namespace cutdg;

inline Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

// Largest entrywise difference between the assembled operators with the interface on a node and the
// two-domain DG oracle.
inline double fitted_equivalence_error(int r, int n = 10) {
  const BackgroundMesh1D mesh = build_mesh(-1, 1, n);
  const int k = n / 2;
  const FluxModel flux = FluxModel::scalar(2, 1);
  const PenaltyConfig pen{0.1, -0.9, 0.25, 0.75, {}};
  const DgOperators ops = assemble_operators(mesh, mesh.nodes[k], r, pen, flux, BoundarySpec::upwind(flux));
  const oracle::FittedDg ref = oracle::fitted_dg(n, mesh.h(), k, r, 2, 1, pen.lambda_1, pen.lambda_2);
  if (ops.dofs.size != ref.mass.rows()) return INFINITY;
  double err = (dense(ops.mass) - ref.mass).cwiseAbs().maxCoeff();
  err = std::max(err, (dense(ops.spatial) - ref.spatial).cwiseAbs().maxCoeff());
  err = std::max(err, (ops.inflow_left.col(0) - ref.inflow).cwiseAbs().maxCoeff());
  err = std::max(err, ops.inflow_right.cwiseAbs().maxCoeff());
  return err;
}

// Constant two-sided state u1 = a2, u2 = a1 with inflow a2: largest entry of spatial u - inflow g.
inline double stationary_steady_residual(int r, double x_gamma, int n = 20) {
  const double a1 = 2, a2 = 1;
  const BackgroundMesh1D mesh = build_mesh(-1, 1, n);
  const FluxModel flux = FluxModel::scalar(a1, a2);
  const DgOperators ops =
      assemble_operators(mesh, x_gamma, r, PenaltyConfig{0.1, -0.9, 0.25, 0.75, {}}, flux, BoundarySpec::upwind(flux));
  const Eigen::VectorXd u = project_initial(ops, SideFunction([&](int side, double) { return side == 1 ? a2 : a1; }));
  return (ops.spatial * u - ops.inflow_left.col(0) * a2).cwiseAbs().maxCoeff();
}

// Constant states (a2 - x', a1 - x') solve the problem with a linearly moving interface.
inline InterfacePath steady_path(bool moving) {
  return moving ? InterfacePath::linear(1e-4, 0.111) : InterfacePath::constant(1e-4);
}

inline double field_max_deviation(const SpatialField& f, double x_gamma, double c1, double c2) {
  const ErrorNorms e = error_norms(f, x_gamma, [&](int side, double) { return side == 1 ? c1 : c2; });
  return e.linf;
}

inline double spacetime_steady_deviation(bool moving, int rs = 1, int n = 20, double t_end = 0.05) {
  SpaceTimeConfig c;
  c.mesh = build_mesh(-1, 1, n);
  c.path = steady_path(moving);
  c.rs = rs;
  const double xp = moving ? 0.111 : 0.0, u1 = c.a2 - xp, u2 = c.a1 - xp;
  c.inflow = [=](double) { return u1; };
  c.initial = [=](int side, double) { return side == 1 ? u1 : u2; };
  c.dt = c.mesh.h() / 12;
  c.t_end = t_end;
  const SpaceTimeResult res = advance(c);
  return field_max_deviation(res.final, c.path.position(c.t_end), u1, u2);
}

// A moving cut needs the three-point rule in time; the trapezoid is inexact on the cut geometry.
inline double coupled_steady_deviation(bool moving, int n = 20, double t_end = 0.05, int pad = 0,
                                       TimeQuadratureKind q = TimeQuadratureKind::simpson) {
  CoupledConfig c;
  c.mesh = build_mesh(-1, 1, n);
  c.path = steady_path(moving);
  c.quadrature = q;
  const double xp = moving ? 0.111 : 0.0, u1 = c.a2 - xp, u2 = c.a1 - xp;
  c.inflow = [=](double) { return u1; };
  c.initial = [=](int side, double) { return side == 1 ? u1 : u2; };
  c.dt = c.mesh.h() / 12;
  c.t_end = t_end;
  c.pad = pad;
  const CoupledResult res = coupled_advance(c);
  return field_max_deviation(res.final, c.path.position(c.t_end), u1, u2);
}

// a1 = (3, 1), a2 = (2, 1) across x + y = c0: u1 = 3, u2 = 4 balance the normal fluxes.
inline double twod_steady_residual(int r, int n = 8, double c0 = 0.5) {
  const TriMesh mesh = build_tri_mesh(-1, 1, -1, 1, n, n);
  const Operators2D ops =
      assemble_2d(mesh, LineInterface::diagonal(c0), r, PenaltyConfig{0.1, -0.9, 0.25, 0.75, {}}, {3, 1}, {2, 1});
  const Eigen::VectorXd u = project_2d(ops, [](int side, const Vec2&) { return side == 1 ? 3.0 : 4.0; });
  const Eigen::VectorXd g = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(ops.inflow_points.size()), 3.0);
  return (ops.spatial * u - ops.inflow * g).cwiseAbs().maxCoeff();
}

// Smallest eigenvalue of sym(W spatial) relative to its spectral radius, W = diag(1, eta) by side, for
// positive speeds, conservative penalties lambda_1 <= 1/2 and eta from the closed-form range.
inline double dissipativity_margin(int r, double x_gamma, double lambda_1, int n = 16) {
  const double a1 = 2, a2 = 1;
  const PenaltyConfig pen{lambda_1, lambda_1 - 1, 0.25, 0.75, {}};
  const BackgroundMesh1D mesh = build_mesh(-1, 1, n);
  const FluxModel flux = FluxModel::scalar(a1, a2);
  const DgOperators ops = assemble_operators(mesh, x_gamma, r, pen, flux, BoundarySpec::upwind(flux));
  const EtaInterval range = feasible_eta(a1, a2, pen.lambda_1, pen.lambda_2, true);
  if (range.empty) return -INFINITY;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(ops.dofs.size);
  w.tail(ops.dofs.size - ops.dofs.offset[1]).setConstant(range.sample());
  const Eigen::MatrixXd wk = w.asDiagonal() * dense(ops.spatial);
  const Eigen::MatrixXd sym = 0.5 * (wk + wk.transpose());
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  return ev.minCoeff() / std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

// Space-time slabs with a moving interface, zero inflow and eta from the range of the relative speeds:
// largest per-slab increase of E_eta (negative when it always decreases).
inline double slab_energy_increase(int n = 20, int slabs = 30) {
  const double a1 = 2, a2 = 1, xp = 0.111;
  SlabProblem p;
  const BackgroundMesh1D mesh = build_mesh(-1, 1, n);
  p.mesh = &mesh;
  p.a1 = a1;
  p.a2 = a2;
  p.penalties = PenaltyConfig{0.0, -1.0, 0.25, 0.75, {}};
  p.path = InterfacePath::linear(-0.3, xp);
  p.left = {EndKind::data, [](int, double) { return 0.0; }};
  const double eta = feasible_eta(a1 - xp, a2 - xp, 0.0, -1.0, true).sample();
  SpatialField u = project_field(mesh, p.path.position(0), p.rs, p.penalties, [](int side, double x) {
    return side == 1 ? std::exp(-40 * (x + 0.5) * (x + 0.5)) : 0.3 * std::sin(3 * x);
  });
  const double dt = mesh.h() / 12;
  double worst = -INFINITY;
  for (int k = 0; k < slabs; ++k) {
    const double t0 = k * dt;
    const double before = field_energy(u, p.path.position(t0), eta);
    const SlabSystem sys = assemble_slab(p, t0, dt, u);
    const Eigen::VectorXd sol = solve_slab(sys);
    u = slab_trace(mesh, sys, sol, 1.0);
    worst = std::max(worst, field_energy(u, p.path.position(t0 + dt), eta) - before);
  }
  return worst;
}

struct RegionCounts {
  int samples = 0;
  int failures = 0;
};

// Conservative penalties with the sign pattern of the speeds: a nonempty range whose sample is PSD.
inline RegionCounts conservative_region_soundness(int samples, unsigned seed = 7) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> speed(0.05, 5), lam(-3, 0.5);
  RegionCounts c{samples, 0};
  for (int i = 0; i < samples; ++i) {
    const bool negative = i % 2 == 1;
    double a1 = speed(gen), a2 = speed(gen), l1 = lam(gen);
    if (negative) {
      a1 = -a1;
      a2 = -a2;
      l1 = 1 - l1;
    }
    const EtaInterval r = feasible_eta(a1, a2, l1, l1 - 1, true);
    if (r.empty || !psd_check(build_s_scalar(a1, a2, l1, l1 - 1, r.sample())).psd ||
        !oracle::scalar_s_psd(a1, a2, l1, l1 - 1, r.sample(), 1e-10))
      ++c.failures;
  }
  return c;
}

// lambda_1 = 1/2 + eps with positive speeds and conservative lambda_2: no eta on a log grid over (0, 100]
// makes S PSD, and the closed form reports an empty range.
inline RegionCounts conservative_region_sharpness(int samples, int grid = 400, unsigned seed = 11) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> speed(0.05, 5), leps(-3, 0);
  RegionCounts c{samples, 0};
  for (int i = 0; i < samples; ++i) {
    const double a1 = speed(gen), a2 = speed(gen), l1 = 0.5 + std::pow(10.0, leps(gen));
    bool any = !feasible_eta(a1, a2, l1, l1 - 1, true).empty;
    for (int g = 0; g < grid && !any; ++g) {
      const double eta = 100 * std::pow(10.0, -8.0 * g / (grid - 1));
      any = oracle::scalar_s_psd(a1, a2, l1, l1 - 1, eta, 0.0);
    }
    c.failures += any;
  }
  return c;
}

// Non-conservative region of positive speeds: lambda_1 <= 1/2, lambda_2 <= -1/2, lambda_1 - lambda_2 >= 1/2.
inline RegionCounts nonconservative_region_soundness(int samples, unsigned seed = 13) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> speed(0.05, 5), l1d(-2, 0.5), l2d(-3, -0.5);
  RegionCounts c{samples, 0};
  for (int i = 0; i < samples; ++i) {
    const double a1 = speed(gen), a2 = speed(gen), l1 = l1d(gen), l2 = l2d(gen);
    if (l1 - l2 < 0.5) {
      --c.samples;
      continue;
    }
    const EtaInterval r = feasible_eta(a1, a2, l1, l2, false);
    if (r.empty || !oracle::scalar_s_psd(a1, a2, l1, l2, r.sample(), 1e-10)) ++c.failures;
  }
  return c;
}

// Outside the region (lambda_1 > 1/2 or lambda_2 > -1/2 or lambda_1 - lambda_2 < 1/2): no PSD eta on the grid.
inline RegionCounts nonconservative_region_sharpness(int samples, int grid = 400, unsigned seed = 17) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> speed(0.05, 5), lam(-3, 3), leps(-3, 0);
  RegionCounts c{samples, 0};
  for (int i = 0; i < samples; ++i) {
    const double a1 = speed(gen), a2 = speed(gen);
    double l1 = lam(gen), l2 = lam(gen);
    switch (i % 3) {
      case 0: l1 = 0.5 + std::pow(10.0, leps(gen)); break;
      case 1: l2 = -0.5 + std::pow(10.0, leps(gen)); break;
      default: l2 = l1 - 0.5 + std::pow(10.0, leps(gen)); break;
    }
    bool any = !feasible_eta(a1, a2, l1, l2, false).empty;
    for (int g = 0; g < grid && !any; ++g) {
      const double eta = 100 * std::pow(10.0, -8.0 * g / (grid - 1));
      any = oracle::scalar_s_psd(a1, a2, l1, l2, eta, 0.0);
    }
    c.failures += any;
  }
  return c;
}

// Largest relative error of Gauss rules (1..20 points) on x^p over [0.5, 1.5], p up to 2n - 1.
inline double gauss_exactness_error() {
  double worst = 0;
  for (int n = 1; n <= max_gauss_points; ++n) {
    const Rule1D<double> rule = gauss_rule<double>(n, 0.5, 1.5);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double q = 0;
      for (Eigen::Index i = 0; i < rule.size(); ++i) q += rule.weights(i) * std::pow(rule.points(0, i), p);
      const double exact = oracle::monomial_integral(p, 0.5, 1.5);
      worst = std::max(worst, std::abs(q - exact) / exact);
    }
  }
  return worst;
}

inline double rule_monomial_error(const Rule2D<double>& rule, const std::vector<Vec2>& poly, int degree) {
  double worst = 0;
  for (int p = 0; p <= degree; ++p)
    for (int q = 0; p + q <= degree; ++q) {
      double v = 0;
      for (Eigen::Index i = 0; i < rule.size(); ++i)
        v += rule.weights(i) * std::pow(rule.points(0, i), p) * std::pow(rule.points(1, i), q);
      const double exact = oracle::polygon_monomial_integral(poly, p, q);
      worst = std::max(worst, std::abs(v - exact) / std::abs(exact));
    }
  return worst;
}

// Triangle rules of degree 0..12 and cut-polygon rules of degree 2r + 1, r = 0..4, in the positive quadrant.
inline double polygon_exactness_error() {
  const std::vector<Vec2> tri{{0.2, 0.1}, {1.3, 0.4}, {0.5, 1.2}};
  double worst = 0;
  for (int d = 0; d <= 12; ++d) worst = std::max(worst, rule_monomial_error(triangle_rule<double>(d, tri[0], tri[1], tri[2]), tri, d));
  const LineInterface line = LineInterface::diagonal(1.0);
  for (int side = 1; side <= 2; ++side) {
    const std::vector<Vec2> piece = clip_polygon(tri, line, side);
    for (int r = 0; r <= 4; ++r) worst = std::max(worst, rule_monomial_error(polygon_rule<double>(2 * r + 1, piece), piece, 2 * r + 1));
  }
  return worst;
}

}  // namespace props
