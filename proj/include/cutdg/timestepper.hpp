#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <functional>
#include <optional>
#include <vector>

#include "cutdg/assembly1d.hpp"

namespace cutdg {

enum class RkKind { tvd_rk3, ssp_rk4_5, rk2_tvd };

// Explicit Runge-Kutta scheme in Butcher form.
struct RkScheme {
  RkKind kind = RkKind::tvd_rk3;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  int stages() const { return static_cast<int>(b.size()); }
  // Stability polynomial R(z) of one step applied to u' = z u / dt.
  double amplification(double z) const;

  static RkScheme make(RkKind kind);
  // Three-stage for r <= 2, five-stage fourth order for r = 3.
  static RkScheme for_degree(int r);
  // Converts a Shu-Osher form u_i = sum_k alpha_ik u_k + dt beta_ik L(u_k), i = 1..s.
  static RkScheme from_shu_osher(RkKind kind, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& beta);
};

using TimeFunction = std::function<Eigen::VectorXd(double t)>;

// Boundary data g(t) and the stage values fed to the integrator.
class BoundaryDataLadder {
 public:
  enum class Mode { taylor, exact };

  BoundaryDataLadder() = default;
  BoundaryDataLadder(TimeFunction g, TimeFunction dg = {}, TimeFunction d2g = {});
  static BoundaryDataLadder zero(int components);

  Eigen::VectorXd value(double t) const;
  // Closed form when supplied, central differences otherwise.
  Eigen::VectorXd derivative(double t, int order) const;

  // Taylor ladder for the three-stage scheme, exact g at the abscissae otherwise.
  std::vector<Eigen::VectorXd> stage_values(const RkScheme& scheme, double t, double dt) const;
  Mode mode_for(const RkScheme& scheme) const;

 private:
  TimeFunction g_, dg_, d2g_;
};

double courant_number(int r);
// dt = C h / max speed; C defaults to the tabulated value for r in 1..3.
double cfl_dt(double h, const FluxModel& flux, int r, std::optional<double> courant = std::nullopt);

struct StageRecord {
  int stage = 0;
  double t = 0;
  const Eigen::VectorXd* u = nullptr;
  Eigen::VectorXd g_left;
  Eigen::VectorXd g_right;
};

using StageObserver = std::function<void(const StageRecord&)>;
using RateFunction = std::function<Eigen::VectorXd(int stage, double t, const Eigen::VectorXd& u)>;

// One explicit step u + dt sum b_i k_i with k_i = L(stage, t + c_i dt, U_i).
Eigen::VectorXd rk_step(const RkScheme& scheme, const RateFunction& rate, const Eigen::VectorXd& u, double t,
                        double dt);

// mass u' = -spatial u + inflow_left g_L + inflow_right g_R with one factorization of the mass.
class SemiDiscrete1D {
 public:
  explicit SemiDiscrete1D(const DgOperators& ops);

  const DgOperators& operators() const { return ops_; }
  Eigen::VectorXd solve_mass(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd rate(const Eigen::VectorXd& u, const Eigen::VectorXd& g_left, const Eigen::VectorXd& g_right) const;

 private:
  const DgOperators& ops_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
};

Eigen::VectorXd step(const RkScheme& scheme, const SemiDiscrete1D& system, const Eigen::VectorXd& u, double t,
                     double dt, const BoundaryDataLadder& left, const BoundaryDataLadder& right,
                     const StageObserver& observer = {});

}  // namespace cutdg
