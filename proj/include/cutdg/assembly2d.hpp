#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <vector>

#include "cutdg/assembly1d.hpp"
#include "cutdg/basis.hpp"
#include "cutdg/geometry2d.hpp"
#include "cutdg/timestepper.hpp"

namespace cutdg {

struct DofMap2D {
  int degree = 0;
  int block = 1;
  std::array<int, 2> offset{0, 0};
  std::array<std::vector<int>, 2> local;
  int size = 0;

  int index(int side, int tri, int mode) const { return offset[side - 1] + local[side - 1][tri] * block + mode; }
  bool has(int side, int tri) const { return local[side - 1][tri] >= 0; }
};

struct Operators2D {
  TriMesh mesh;
  LineInterface line;
  std::array<ActiveTopology2D, 2> topo;
  int degree = 0;
  Vec2 a1, a2;
  PenaltyConfig penalties;
  DofMap2D dofs;
  std::vector<TriangleBasis<double>::Frame> frames;

  SparseMatrix mass;
  SparseMatrix spatial;
  // Inflow data enters through g sampled at `inflow_points`: mass u' = -spatial u + inflow g.
  std::vector<Vec2> inflow_points;
  SparseMatrix inflow;
  // Total outward boundary flux = outflux_u . u + outflux_g . g.
  Eigen::VectorXd outflux_u;
  Eigen::VectorXd outflux_g;
  // Integral over both physical sides = integral_weights . u.
  Eigen::VectorXd integral_weights;

  const ActiveTopology2D& side(int s) const { return topo[s - 1]; }
  const Vec2& a(int s) const { return s == 1 ? a1 : a2; }
};

// Inflow on the x_min and y_min edges, outflow elsewhere.
Operators2D assemble_2d(const TriMesh& mesh, const LineInterface& line, int degree, const PenaltyConfig& penalties,
                        const Vec2& a1, const Vec2& a2);

// J_s on the stabilized faces with normal derivatives up to the degree.
SparseMatrix ghost_penalty_2d(const Operators2D& ops, int s);

using PlaneFunction = std::function<double(int side, const Vec2& x)>;
using PlaneTimeFunction = std::function<double(const Vec2& x, double t)>;

Eigen::VectorXd project_2d(const Operators2D& ops, const PlaneFunction& f, int quadrature_degree = -1);
double evaluate_2d(const Operators2D& ops, const Eigen::VectorXd& u, int side, int tri, const Vec2& x);
double integral_2d(const Operators2D& ops, const Eigen::VectorXd& u);
double l2_error_2d(const Operators2D& ops, const Eigen::VectorXd& u, const PlaneFunction& exact);

// 0.5 h / ((2r + 1) max |a_i|) with h the grid spacing.
double dt_2d(const Operators2D& ops);

struct Run2DResult {
  Eigen::VectorXd u;
  std::vector<double> times;
  std::vector<double> conservation;
  int steps = 0;
};

// Explicit Runge-Kutta integration; the Taylor ladder supplies stage data for the three-stage scheme.
Run2DResult advance_2d(const Operators2D& ops, const Eigen::VectorXd& u0, const PlaneTimeFunction& g, double t_end,
                       double dt, const RkScheme& scheme, int record_every = 1);

}  // namespace cutdg
