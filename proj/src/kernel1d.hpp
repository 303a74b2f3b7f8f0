#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <vector>

#include "cutdg/assembly1d.hpp"
#include "cutdg/basis.hpp"
#include "cutdg/geometry1d.hpp"

namespace cutdg::detail {

struct LocalDof {
  int side;
  int elem;
  int comp;
  int mode;
};

// Elements first..last of one side with physical extent [x_begin, x_end].
struct SideSpan {
  int side = 1;
  int first = 0;
  int last = -1;
  double x_begin = 0;
  double x_end = 0;
};

struct SpatialTerms {
  bool volume = true;
  bool edges = true;
  bool ends = true;
  bool interface = true;
};

// Spatial form at one instant: one span (no interface) or two spans meeting at x_gamma.
struct Snapshot {
  const BackgroundMesh1D* mesh = nullptr;
  int degree = 0;
  std::vector<SideSpan> spans;
  std::array<Eigen::MatrixXd, 2> A;
  std::array<double, 2> speed{0, 0};
  EndKind left = EndKind::data;
  EndKind right = EndKind::extrapolate;

  bool interface = false;
  double x_gamma = 0;
  std::array<double, 2> lambda{0, 0};
  // Coefficients of the [F v] and [F] parts of the interface term.
  std::array<Eigen::MatrixXd, 2> iface_flux;
  std::array<Eigen::MatrixXd, 2> iface_jump;
};

class Sink {
 public:
  virtual ~Sink() = default;
  virtual void matrix(const LocalDof& v, const LocalDof& u, double value) = 0;
  // Right-hand side contribution value * datum[data_comp] at end 0 (left) or 1 (right).
  virtual void data(const LocalDof& v, int end, int data_comp, double value) = 0;
};

void emit_spatial(const Snapshot& snap, Sink& sink, const SpatialTerms& terms = {});

void emit_mass(const BackgroundMesh1D& mesh, int degree, int components, const std::vector<SideSpan>& spans,
               Sink& sink);

void emit_ghost(const BackgroundMesh1D& mesh, int degree, int components, int side, const std::vector<int>& faces,
                int s, const PenaltyConfig& penalties, double scale, Sink& sink);

// Scatters into global triplets through a DofMap1D.
class TripletSink : public Sink {
 public:
  TripletSink(const DofMap1D& dofs, int data_components);

  void matrix(const LocalDof& v, const LocalDof& u, double value) override;
  void data(const LocalDof& v, int end, int data_comp, double value) override;

  SparseMatrix build() const;

  std::vector<Eigen::Triplet<double>> triplets;
  std::array<Eigen::MatrixXd, 2> data_columns;

 private:
  const DofMap1D& dofs_;
};

SideSpan span_of(const ActiveTopology& t);

const IntervalBasis<double>& interval_basis(int degree);

}  // namespace cutdg::detail
