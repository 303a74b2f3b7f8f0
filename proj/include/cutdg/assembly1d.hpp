#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "cutdg/geometry1d.hpp"

namespace cutdg {

using SparseMatrix = Eigen::SparseMatrix<double>;

double default_omega(int k);

struct PenaltyConfig {
  double lambda_1 = 0.1;
  double lambda_2 = -0.9;
  double gamma_M = 0.25;
  double gamma_A = 0.75;
  std::vector<double> omega;  // empty: 1/((k!)^2 (2k+1))

  double omega_k(int k) const;
  double lambda(int side) const { return side == 1 ? lambda_1 : lambda_2; }
  bool conservative() const;

  static PenaltyConfig scalar_defaults() { return {}; }
  static PenaltyConfig acoustic_defaults() { return {0.5, -0.5, 0.25, 0.75, {}}; }
};

struct FluxModel {
  enum class Kind { scalar, system };

  Kind kind = Kind::scalar;
  Eigen::MatrixXd A1;
  Eigen::MatrixXd A2;
  double speed1 = 0;
  double speed2 = 0;

  static FluxModel scalar(double a1, double a2);
  static FluxModel system(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2);
  static FluxModel system(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2, double speed1, double speed2);

  int components() const { return static_cast<int>(A1.rows()); }
  const Eigen::MatrixXd& A(int side) const { return side == 1 ? A1 : A2; }
  double speed(int side) const { return side == 1 ? speed1 : speed2; }
  double a(int side) const { return A(side)(0, 0); }
  double max_speed() const { return std::max(speed1, speed2); }
};

// How an external end of the domain is closed.
//  data:        Lax-Friedrichs flux with a prescribed exterior state g
//  extrapolate: exterior state copied from the interior trace
//  prescribed:  the flux value itself is given
enum class EndKind { data, extrapolate, prescribed };

struct BoundarySpec {
  EndKind left = EndKind::data;
  EndKind right = EndKind::extrapolate;

  // Inflow data at the upwind end, outflow elsewhere.
  static BoundarySpec upwind(const FluxModel& flux);
  static BoundarySpec data_both() { return {EndKind::data, EndKind::data}; }
};

struct DofMap1D {
  int degree = 0;
  int components = 1;
  std::array<int, 2> first{0, 0};
  std::array<int, 2> last{-1, -1};
  std::array<int, 2> offset{0, 0};
  int size = 0;

  int block() const { return components * (degree + 1); }
  int index(int side, int elem, int comp, int mode) const {
    return offset[side - 1] + ((elem - first[side - 1]) * components + comp) * (degree + 1) + mode;
  }
  bool has(int side, int elem) const { return elem >= first[side - 1] && elem <= last[side - 1]; }

  static DofMap1D make(const ActiveTopology& s1, const ActiveTopology& s2, int degree, int components);
};

struct DgOperators {
  BackgroundMesh1D mesh;
  std::array<ActiveTopology, 2> topo;
  int degree = 0;
  FluxModel flux;
  PenaltyConfig penalties;
  BoundarySpec bc;
  DofMap1D dofs;
  double x_gamma = 0;

  SparseMatrix mass;
  SparseMatrix spatial;
  // n_dofs x components; mass u' = -spatial u + inflow_left g_L + inflow_right g_R.
  Eigen::MatrixXd inflow_left;
  Eigen::MatrixXd inflow_right;

  const ActiveTopology& side(int s) const { return topo[s - 1]; }
};

SparseMatrix assemble_mass(const BackgroundMesh1D& mesh, const ActiveTopology& s1, const ActiveTopology& s2,
                           int degree, const PenaltyConfig& penalties, int components = 1);

struct SpatialPart {
  SparseMatrix spatial;
  Eigen::MatrixXd inflow_left;
  Eigen::MatrixXd inflow_right;
};

SpatialPart assemble_spatial(const BackgroundMesh1D& mesh, const ActiveTopology& s1, const ActiveTopology& s2,
                             int degree, const PenaltyConfig& penalties, const FluxModel& flux,
                             const BoundarySpec& bc);

SparseMatrix ghost_penalty(const BackgroundMesh1D& mesh, const ActiveTopology& s1, const ActiveTopology& s2,
                           int degree, int s, int components = 1);

DgOperators assemble_operators(const BackgroundMesh1D& mesh, double x_gamma, int degree,
                               const PenaltyConfig& penalties, const FluxModel& flux, const BoundarySpec& bc);

using SideFunction = std::function<double(int side, double x)>;
using SideVectorFunction = std::function<Eigen::VectorXd(int side, double x)>;

Eigen::VectorXd project_initial(const DgOperators& ops, const SideFunction& f);
Eigen::VectorXd project_initial(const DgOperators& ops, const SideVectorFunction& f);

// Value of component `comp` of the discrete solution on `side` at x (x inside element `elem`).
double evaluate(const DgOperators& ops, const Eigen::VectorXd& u, int side, int elem, double x, int comp = 0);
double evaluate(const DgOperators& ops, const Eigen::VectorXd& u, int side, double x, int comp = 0);

// Integral of each component over the physical domain of both sides.
Eigen::VectorXd total_integral(const DgOperators& ops, const Eigen::VectorXd& u);

// Lax-Friedrichs boundary fluxes at x_L and x_R given the exterior data.
std::pair<Eigen::VectorXd, Eigen::VectorXd> boundary_fluxes(const DgOperators& ops, const Eigen::VectorXd& u,
                                                            const Eigen::VectorXd& g_left,
                                                            const Eigen::VectorXd& g_right);

// Coefficients of the test function equal to one in component `comp` on both sides.
Eigen::VectorXd ones_test_vector(const DofMap1D& dofs, int comp = 0);

}  // namespace cutdg
