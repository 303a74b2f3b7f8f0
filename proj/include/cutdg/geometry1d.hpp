#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace cutdg {

struct BackgroundMesh1D {
  double x_left = 0;
  double x_right = 1;
  int n_elements = 0;
  std::vector<double> nodes;

  double h() const { return (x_right - x_left) / n_elements; }
  double element_left(int j) const { return nodes[j]; }
  double element_right(int j) const { return nodes[j + 1]; }
  double length() const { return x_right - x_left; }
};

BackgroundMesh1D build_mesh(double x_left, double x_right, int n);

class InterfacePath {
 public:
  enum class Kind { constant, linear, sinusoidal };

  static InterfacePath constant(double x0);
  static InterfacePath linear(double x0, double speed);
  // x(t) = x0 + amplitude * sin(t)
  static InterfacePath sinusoidal(double x0, double amplitude);
  // Amplitude 0.4 (x0 - x_left)(x_right - x0).
  static InterfacePath sinusoidal_in(double x0, double x_left, double x_right);

  double position(double t) const;
  double velocity(double t) const;
  Kind kind() const { return kind_; }
  double x0() const { return x0_; }
  double parameter() const { return p_; }

 private:
  InterfacePath(Kind k, double x0, double p) : kind_(k), x0_(x0), p_(p) {}
  Kind kind_;
  double x0_;
  double p_;
};

struct CutInterval {
  int element;
  double a;
  double b;
};

struct ActiveTopology {
  int side = 1;
  int first = 0;
  int last = -1;
  double x_begin = 0;
  double x_end = 0;
  std::vector<int> elements;
  std::vector<int> interior_edges;
  std::vector<int> stabilized_faces;
  std::optional<CutInterval> cut_element;

  bool contains(int j) const { return j >= first && j <= last; }
  int size() const { return last - first + 1; }
  double physical_left(const BackgroundMesh1D& m, int j) const;
  double physical_right(const BackgroundMesh1D& m, int j) const;
};

// Interfaces within this distance (relative to h) of a node are treated as lying on it.
constexpr double node_snap_tolerance = 1e-14;

double snap_to_node(const BackgroundMesh1D& mesh, double x_gamma);

std::pair<ActiveTopology, ActiveTopology> classify(const BackgroundMesh1D& mesh, double x_gamma);

struct SlabTopology {
  double t_start = 0;
  double t_end = 0;
  std::vector<int> active_1;
  std::vector<int> active_2;
  std::vector<int> swept_elements;
  std::vector<int> stabilized_faces_1;
  std::vector<int> stabilized_faces_2;

  const std::vector<int>& active(int side) const { return side == 1 ? active_1 : active_2; }
  const std::vector<int>& stabilized_faces(int side) const {
    return side == 1 ? stabilized_faces_1 : stabilized_faces_2;
  }
};

constexpr int slab_time_samples = 64;

SlabTopology slab_topology(const BackgroundMesh1D& mesh, const InterfacePath& path, double t_start,
                           double t_end, const std::vector<double>& extra_times = {});

}  // namespace cutdg
