#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "cutdg/assembly1d.hpp"
#include "cutdg/geometry1d.hpp"

namespace cutdg {

// Piecewise polynomial in space on per-side element ranges; index (side, elem, mode).
struct SpatialField {
  BackgroundMesh1D mesh;
  int degree = 0;
  std::array<int, 2> first{0, 0};
  std::array<int, 2> last{-1, -1};
  std::array<Eigen::VectorXd, 2> coeffs;

  bool has(int side, int elem) const { return elem >= first[side - 1] && elem <= last[side - 1]; }
  Eigen::Ref<const Eigen::VectorXd> element(int side, int elem) const {
    return coeffs[side - 1].segment((elem - first[side - 1]) * (degree + 1), degree + 1);
  }
  double value(int side, int elem, double x) const;

  static SpatialField from_operators(const DgOperators& ops, const Eigen::VectorXd& u);
  static SpatialField zeros(const BackgroundMesh1D& mesh, int degree, std::array<int, 2> first,
                            std::array<int, 2> last);
};

enum class TimeQuadratureKind { trapezoid, simpson };

struct TimeQuadrature {
  TimeQuadratureKind kind = TimeQuadratureKind::simpson;
  std::vector<double> tau;      // in [0, 1]
  std::vector<double> fraction; // weights divided by dt

  static TimeQuadrature make(TimeQuadratureKind kind);
  int size() const { return static_cast<int>(tau.size()); }
  double point(int q, double t0, double dt) const { return t0 + tau[q] * dt; }
  double weight(int q, double dt) const { return fraction[q] * dt; }
};

enum class Formulation { integrated_by_parts, direct };

// Dofs of P^{r_t} x P^{r_s} on the slab active elements, side 1 first.
struct SlabSpace {
  int rs = 1;
  int rt = 1;
  SlabTopology slab;
  std::array<int, 2> first{0, 0};
  std::array<int, 2> last{-1, -1};
  std::array<int, 2> offset{0, 0};
  int size = 0;

  int block() const { return (rt + 1) * (rs + 1); }
  int index(int side, int elem, int l, int k) const {
    return offset[side - 1] + ((elem - first[side - 1]) * (rt + 1) + l) * (rs + 1) + k;
  }
  bool has(int side, int elem) const { return elem >= first[side - 1] && elem <= last[side - 1]; }

  // Active elements restricted to the background elements lo..hi.
  static SlabSpace make(const SlabTopology& slab, int rs, int rt, int lo, int hi);
};

// Individual weak-form contributions, for testing.
struct SlabTermMask {
  bool time = true;
  bool volume = true;
  bool edges = true;
  bool ends = true;
  bool interface = true;
  bool ghost = true;
};

// End conditions of a slab region. For data ends `value` is g, for prescribed ends it is the flux.
struct SlabEnd {
  EndKind kind = EndKind::data;
  std::function<double(int q, double t)> value;
};

struct SlabProblem {
  const BackgroundMesh1D* mesh = nullptr;
  double a1 = 2;
  double a2 = 1;
  PenaltyConfig penalties;
  InterfacePath path = InterfacePath::constant(0);
  int rs = 1;
  int rt = 1;
  TimeQuadrature quadrature = TimeQuadrature::make(TimeQuadratureKind::simpson);
  Formulation formulation = Formulation::integrated_by_parts;
  // Background element range of the region; -1 means the whole mesh.
  int lo = 0;
  int hi = -1;
  SlabEnd left{EndKind::data, {}};
  SlabEnd right{EndKind::extrapolate, {}};
  SlabTermMask mask;
};

struct SlabSystem {
  SlabSpace space;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  double t_start = 0;
  double dt = 0;
  int sign_warnings = 0;
};

// Upwind trace u^{n-1,-} evaluated on (side, element, x).
using TraceFunction = std::function<double(int side, int elem, double x)>;

SlabSystem assemble_slab(const SlabProblem& problem, double t_start, double dt, const SpatialField& u_prev);
SlabSystem assemble_slab(const SlabProblem& problem, double t_start, double dt, const TraceFunction& u_prev);

struct SlabSolveInfo {
  std::optional<double> condition_estimate;
};

Eigen::VectorXd solve_slab(const SlabSystem& system, SlabSolveInfo* info = nullptr, bool estimate_condition = false);

// Slab solution at tau in [0, 1] restricted to its own active ranges.
SpatialField slab_trace(const BackgroundMesh1D& mesh, const SlabSystem& system, const Eigen::VectorXd& sol,
                        double tau);

// Integral over Omega_i(t) intersected with the region [x_lo, x_hi].
double field_integral(const SpatialField& u, double x_gamma, double x_lo, double x_hi);

// Quadrature-weighted left and right end fluxes over the slab, matching the assembled form.
std::pair<double, double> slab_end_fluxes(const SlabProblem& problem, const SlabSystem& system,
                                          const Eigen::VectorXd& sol);

// Weighted energy 1/2 int_{Omega_1(t)} u^2 + eta/2 int_{Omega_2(t)} u^2.
double field_energy(const SpatialField& u, double x_gamma, double eta = 1.0);

struct SpaceTimeConfig {
  BackgroundMesh1D mesh;
  double a1 = 2;
  double a2 = 1;
  PenaltyConfig penalties{0.0, -1.0, 0.25, 0.75, {}};
  InterfacePath path = InterfacePath::constant(0);
  int rs = 1;
  int rt = 1;
  TimeQuadratureKind quadrature = TimeQuadratureKind::simpson;
  Formulation formulation = Formulation::integrated_by_parts;
  std::function<double(double t)> inflow;
  std::function<double(int side, double x)> initial;
  double dt = 0.01;
  double t_end = 1;
  bool estimate_condition = false;
};

struct SpaceTimeResult {
  SpatialField final;
  std::vector<double> times;
  std::vector<double> conservation;
  std::vector<double> energy;
  std::vector<double> jump_dissipation;
  int sign_warnings = 0;
  int slabs = 0;
  double max_condition = 0;
};

// Stabilized projection of side data at the classification of x_gamma.
SpatialField project_field(const BackgroundMesh1D& mesh, double x_gamma, int degree, const PenaltyConfig& penalties,
                           const std::function<double(int side, double x)>& f);

SpaceTimeResult advance(const SpaceTimeConfig& config);

}  // namespace cutdg
