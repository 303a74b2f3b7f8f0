#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "cutdg/assembly1d.hpp"
#include "cutdg/assembly2d.hpp"
#include "cutdg/spacetime.hpp"

namespace cutdg {

struct ErrorNorms {
  double l1 = 0;
  double l2 = 0;
  double linf = 0;
};

// Physical part [a, b] of background element `elem` on `side`.
struct PhysicalPiece {
  int side = 1;
  int elem = 0;
  double a = 0;
  double b = 0;
};

using PieceEvaluator = std::function<double(int side, int elem, double x)>;
using ExactFunction = std::function<double(int side, double x)>;

// L1 and L2 with an n-point Gauss rule per piece; Linf over those points and the piece ends.
ErrorNorms error_norms(const std::vector<PhysicalPiece>& pieces, int points, const PieceEvaluator& approx,
                       const ExactFunction& exact);

std::vector<PhysicalPiece> physical_pieces(const DgOperators& ops);
// Pieces of a field whose sides meet at x_gamma.
std::vector<PhysicalPiece> physical_pieces(const SpatialField& u, double x_gamma);

// r + 3 points per piece.
ErrorNorms error_norms(const DgOperators& ops, const Eigen::VectorXd& u, const ExactFunction& exact, int comp = 0);
ErrorNorms error_norms(const SpatialField& u, double x_gamma, const ExactFunction& exact);

// Same rules in 2D: polygon rules of degree 2r + 3, Linf also at polygon vertices.
ErrorNorms error_norms_2d(const Operators2D& ops, const Eigen::VectorXd& u, const PlaneFunction& exact);

}  // namespace cutdg
