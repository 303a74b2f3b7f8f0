#include "cutdg/timestepper.hpp"

#include <cmath>
#include <limits>

#include "cutdg/error.hpp"

namespace cutdg {

RkScheme RkScheme::from_shu_osher(RkKind kind, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& beta) {
  const int s = static_cast<int>(alpha.rows());
  // Row i holds the coefficients of dt L(U_k) in U_i; U_0 = u.
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(s + 1, s);
  for (int i = 1; i <= s; ++i)
    for (int k = 0; k < i; ++k) {
      coeff.row(i) += alpha(i - 1, k) * coeff.row(k);
      coeff(i, k) += beta(i - 1, k);
    }
  RkScheme r;
  r.kind = kind;
  r.a = coeff.topRows(s);
  r.b = coeff.row(s).transpose();
  r.c = r.a.rowwise().sum();
  return r;
}

RkScheme RkScheme::make(RkKind kind) {
  switch (kind) {
    case RkKind::tvd_rk3: {
      Eigen::MatrixXd al = Eigen::MatrixXd::Zero(3, 3), be = Eigen::MatrixXd::Zero(3, 3);
      al(0, 0) = 1;
      be(0, 0) = 1;
      al(1, 0) = 0.75;
      al(1, 1) = 0.25;
      be(1, 1) = 0.25;
      al(2, 0) = 1.0 / 3;
      al(2, 2) = 2.0 / 3;
      be(2, 2) = 2.0 / 3;
      return from_shu_osher(kind, al, be);
    }
    case RkKind::rk2_tvd: {
      Eigen::MatrixXd al = Eigen::MatrixXd::Zero(2, 2), be = Eigen::MatrixXd::Zero(2, 2);
      al(0, 0) = 1;
      be(0, 0) = 1;
      al(1, 0) = 0.5;
      al(1, 1) = 0.5;
      be(1, 1) = 0.5;
      return from_shu_osher(kind, al, be);
    }
    case RkKind::ssp_rk4_5: {
      // Spiteri-Ruuth SSP(5,4) coefficients.
      Eigen::MatrixXd al = Eigen::MatrixXd::Zero(5, 5), be = Eigen::MatrixXd::Zero(5, 5);
      al(0, 0) = 1;
      be(0, 0) = 0.391752226571890;
      al(1, 0) = 0.444370493651235;
      al(1, 1) = 0.555629506348765;
      be(1, 1) = 0.368410593050371;
      al(2, 0) = 0.620101851488403;
      al(2, 2) = 0.379898148511597;
      be(2, 2) = 0.251891774271694;
      al(3, 0) = 0.178079954393132;
      al(3, 3) = 0.821920045606868;
      be(3, 3) = 0.544974750228521;
      al(4, 2) = 0.517231671970585;
      al(4, 3) = 0.096059710526147;
      be(4, 3) = 0.063692468666290;
      al(4, 4) = 0.386708617503269;
      be(4, 4) = 0.226007483236906;
      return from_shu_osher(kind, al, be);
    }
  }
  throw Error(Errc::invalid_count, "unknown scheme");
}

RkScheme RkScheme::for_degree(int r) { return make(r <= 2 ? RkKind::tvd_rk3 : RkKind::ssp_rk4_5); }

double RkScheme::amplification(double z) const {
  const int s = stages();
  Eigen::VectorXd k(s);
  for (int i = 0; i < s; ++i) k(i) = z * (1.0 + a.row(i).head(i).dot(k.head(i)));
  return 1.0 + b.dot(k);
}

BoundaryDataLadder::BoundaryDataLadder(TimeFunction g, TimeFunction dg, TimeFunction d2g)
    : g_(std::move(g)), dg_(std::move(dg)), d2g_(std::move(d2g)) {}

BoundaryDataLadder BoundaryDataLadder::zero(int components) {
  auto z = [components](double) { return Eigen::VectorXd::Zero(components).eval(); };
  return BoundaryDataLadder(z, z, z);
}

Eigen::VectorXd BoundaryDataLadder::value(double t) const { return g_(t); }

Eigen::VectorXd BoundaryDataLadder::derivative(double t, int order) const {
  if (order == 0) return g_(t);
  if (order == 1 && dg_) return dg_(t);
  if (order == 2 && d2g_) return d2g_(t);
  const double d = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(t));
  if (order == 1) return (g_(t + d) - g_(t - d)) / (2 * d);
  if (order == 2) {
    const double d2 = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, std::abs(t));
    return (g_(t + d2) - 2 * g_(t) + g_(t - d2)) / (d2 * d2);
  }
  throw Error(Errc::invalid_count, "derivative order above two");
}

BoundaryDataLadder::Mode BoundaryDataLadder::mode_for(const RkScheme& scheme) const {
  return scheme.kind == RkKind::tvd_rk3 ? Mode::taylor : Mode::exact;
}

std::vector<Eigen::VectorXd> BoundaryDataLadder::stage_values(const RkScheme& scheme, double t, double dt) const {
  std::vector<Eigen::VectorXd> out;
  if (mode_for(scheme) == Mode::taylor) {
    const Eigen::VectorXd g0 = g_(t), g1 = derivative(t, 1), g2 = derivative(t, 2);
    out.push_back(g0);
    out.push_back(g0 + dt * g1);
    out.push_back(g0 + dt / 2 * g1 + dt * dt / 4 * g2);
    return out;
  }
  for (int i = 0; i < scheme.stages(); ++i) out.push_back(g_(t + scheme.c(i) * dt));
  return out;
}

double courant_number(int r) {
  switch (r) {
    case 1: return 0.3;
    case 2: return 0.2;
    case 3: return 0.1;
  }
  throw Error(Errc::invalid_count, "no tabulated Courant number for degree " + std::to_string(r));
}

double cfl_dt(double h, const FluxModel& flux, int r, std::optional<double> courant) {
  const double C = courant ? *courant : courant_number(r);
  return C * h / flux.max_speed();
}

Eigen::VectorXd rk_step(const RkScheme& scheme, const RateFunction& rate, const Eigen::VectorXd& u, double t,
                        double dt) {
  const int s = scheme.stages();
  std::vector<Eigen::VectorXd> k(s);
  Eigen::VectorXd out = u;
  for (int i = 0; i < s; ++i) {
    Eigen::VectorXd U = u;
    for (int j = 0; j < i; ++j)
      if (scheme.a(i, j) != 0.0) U += dt * scheme.a(i, j) * k[j];
    k[i] = rate(i, t + scheme.c(i) * dt, U);
    out += dt * scheme.b(i) * k[i];
  }
  return out;
}

SemiDiscrete1D::SemiDiscrete1D(const DgOperators& ops) : ops_(ops), ldlt_(ops.mass) {
  if (ldlt_.info() != Eigen::Success) throw Error(Errc::solver_failure, "mass factorization failed");
}

Eigen::VectorXd SemiDiscrete1D::solve_mass(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = ldlt_.solve(rhs);
  if (ldlt_.info() != Eigen::Success) throw Error(Errc::solver_failure, "mass solve failed");
  return x;
}

Eigen::VectorXd SemiDiscrete1D::rate(const Eigen::VectorXd& u, const Eigen::VectorXd& g_left,
                                     const Eigen::VectorXd& g_right) const {
  Eigen::VectorXd rhs = -(ops_.spatial * u);
  rhs += ops_.inflow_left * g_left + ops_.inflow_right * g_right;
  return solve_mass(rhs);
}

Eigen::VectorXd step(const RkScheme& scheme, const SemiDiscrete1D& system, const Eigen::VectorXd& u, double t,
                     double dt, const BoundaryDataLadder& left, const BoundaryDataLadder& right,
                     const StageObserver& observer) {
  const auto gl = left.stage_values(scheme, t, dt);
  const auto gr = right.stage_values(scheme, t, dt);
  return rk_step(
      scheme,
      [&](int i, double ti, const Eigen::VectorXd& U) {
        if (observer) observer({i, ti, &U, gl[i], gr[i]});
        return system.rate(U, gl[i], gr[i]);
      },
      u, t, dt);
}

}  // namespace cutdg
