#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

#include "cutdg/assembly1d.hpp"
#include "cutdg/spacetime.hpp"

namespace cutdg {

// Elements l_first..l_last form the implicit region; the rest are uncut far-field regions.
struct DomainPartition {
  int n_elements = 0;
  int l_first = 0;
  int l_last = -1;

  bool has_left() const { return l_first > 0; }
  bool has_right() const { return l_last < n_elements - 1; }
  double x_e1(const BackgroundMesh1D& m) const { return m.nodes[l_first]; }
  double x_e2(const BackgroundMesh1D& m) const { return m.nodes[l_last + 1]; }
};

// Elements with an edge in the stabilized face sets plus the swept elements, widened by `pad`.
DomainPartition partition_for(const BackgroundMesh1D& mesh, const SlabTopology& slab, int pad = 0);

// Uncut standard DG on elements first..last of one side: mass u' = -K u + b_left g_L + b_right g_R.
struct ExplicitRegion {
  int side = 1;
  int first = 0;
  int last = -1;
  int degree = 1;
  double a = 1;
  EndKind left = EndKind::data;
  EndKind right = EndKind::extrapolate;
  DofMap1D dofs;
  SparseMatrix K;
  Eigen::VectorXd b_left;
  Eigen::VectorXd b_right;
  Eigen::VectorXd mass_diag;

  Eigen::VectorXd rate(const Eigen::VectorXd& u, double g_left, double g_right) const;
  int size() const { return dofs.size; }
};

ExplicitRegion make_explicit_region(const BackgroundMesh1D& mesh, int side, int first, int last, double a,
                                    EndKind left, EndKind right, int degree = 1);

struct Rk2Stages {
  Eigen::VectorXd stage1;
  Eigen::VectorXd next;
};

// Heun step; end data at t^{n-1} drives the first stage, data at t^n the second.
Rk2Stages rk2_explicit_step(const ExplicitRegion& region, const Eigen::VectorXd& u, double dt,
                            std::array<double, 2> left_values, std::array<double, 2> right_values);

struct CoupledConfig {
  BackgroundMesh1D mesh;
  double a1 = 2;
  double a2 = 1;
  PenaltyConfig penalties{0.0, -1.0, 0.25, 0.75, {}};
  InterfacePath path = InterfacePath::constant(0);
  TimeQuadratureKind quadrature = TimeQuadratureKind::trapezoid;
  std::function<double(double t)> inflow;
  std::function<double(int side, double x)> initial;
  double dt = 0.01;
  double t_end = 1;
  int pad = 0;
};

struct CoupledResult {
  SpatialField final;
  std::vector<double> times;
  std::vector<double> conservation;
  std::vector<DomainPartition> partitions;
  // Largest difference between the slab's e_1 flux integral and the trapezoid of the explicit stage fluxes.
  double flux_mismatch = 0;
  int slabs = 0;
};

CoupledResult coupled_advance(const CoupledConfig& config);

}  // namespace cutdg
