#include "cutdg/geometry1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cutdg/error.hpp"

namespace cutdg {

BackgroundMesh1D build_mesh(double x_left, double x_right, int n) {
  if (!(x_left < x_right)) throw Error(Errc::invalid_extent, "x_left must be below x_right");
  if (n < 2) throw Error(Errc::invalid_count, "need at least two elements, got " + std::to_string(n));
  BackgroundMesh1D m;
  m.x_left = x_left;
  m.x_right = x_right;
  m.n_elements = n;
  m.nodes.resize(n + 1);
  const double h = (x_right - x_left) / n;
  for (int k = 0; k <= n; ++k) m.nodes[k] = x_left + k * h;
  m.nodes[n] = x_right;
  return m;
}

InterfacePath InterfacePath::constant(double x0) { return {Kind::constant, x0, 0.0}; }
InterfacePath InterfacePath::linear(double x0, double speed) { return {Kind::linear, x0, speed}; }
InterfacePath InterfacePath::sinusoidal(double x0, double amplitude) {
  return {Kind::sinusoidal, x0, amplitude};
}
InterfacePath InterfacePath::sinusoidal_in(double x0, double x_left, double x_right) {
  return sinusoidal(x0, 0.4 * (x0 - x_left) * (x_right - x0));
}

double InterfacePath::position(double t) const {
  switch (kind_) {
    case Kind::constant: return x0_;
    case Kind::linear: return x0_ + p_ * t;
    case Kind::sinusoidal: return x0_ + p_ * std::sin(t);
  }
  return x0_;
}

double InterfacePath::velocity(double t) const {
  switch (kind_) {
    case Kind::constant: return 0.0;
    case Kind::linear: return p_;
    case Kind::sinusoidal: return p_ * std::cos(t);
  }
  return 0.0;
}

double ActiveTopology::physical_left(const BackgroundMesh1D& m, int j) const {
  return std::max(m.nodes[j], x_begin);
}

double ActiveTopology::physical_right(const BackgroundMesh1D& m, int j) const {
  return std::min(m.nodes[j + 1], x_end);
}

double snap_to_node(const BackgroundMesh1D& mesh, double x_gamma) {
  const double h = mesh.h();
  const int k = static_cast<int>(std::lround((x_gamma - mesh.x_left) / h));
  if (k >= 0 && k <= mesh.n_elements && std::abs(x_gamma - mesh.nodes[k]) <= node_snap_tolerance * h)
    return mesh.nodes[k];
  return x_gamma;
}

namespace {

// Last element with positive-measure overlap of [x_left, x], first element overlapping [x, x_right].
std::pair<int, int> side_limits(const BackgroundMesh1D& mesh, double xg) {
  const auto lo = std::lower_bound(mesh.nodes.begin(), mesh.nodes.end(), xg);
  const auto hi = std::upper_bound(mesh.nodes.begin(), mesh.nodes.end(), xg);
  return {static_cast<int>(lo - mesh.nodes.begin()) - 1, static_cast<int>(hi - mesh.nodes.begin()) - 1};
}

}  // namespace

std::pair<ActiveTopology, ActiveTopology> classify(const BackgroundMesh1D& mesh, double x_gamma) {
  if (!(x_gamma > mesh.x_left && x_gamma < mesh.x_right))
    throw Error(Errc::interface_outside_domain, "interface at " + std::to_string(x_gamma));
  const double xg = snap_to_node(mesh, x_gamma);
  const auto [j1, j2] = side_limits(mesh, xg);
  const int n = mesh.n_elements;

  ActiveTopology s1, s2;
  s1.side = 1;
  s1.first = 0;
  s1.last = j1;
  s1.x_begin = mesh.x_left;
  s1.x_end = xg;
  s2.side = 2;
  s2.first = j2;
  s2.last = n - 1;
  s2.x_begin = xg;
  s2.x_end = mesh.x_right;
  for (int j = s1.first; j <= s1.last; ++j) s1.elements.push_back(j);
  for (int j = s2.first; j <= s2.last; ++j) s2.elements.push_back(j);
  for (int k = s1.first + 1; k <= s1.last; ++k) s1.interior_edges.push_back(k);
  for (int k = s2.first + 1; k <= s2.last; ++k) s2.interior_edges.push_back(k);

  if (j1 == j2) {
    const int j = j1;
    s1.cut_element = CutInterval{j, mesh.nodes[j], xg};
    s2.cut_element = CutInterval{j, xg, mesh.nodes[j + 1]};
    if (j >= 1) s1.stabilized_faces.push_back(j);
    if (j + 1 <= n - 1) s2.stabilized_faces.push_back(j + 1);
  }
  return {s1, s2};
}

SlabTopology slab_topology(const BackgroundMesh1D& mesh, const InterfacePath& path, double t_start,
                           double t_end, const std::vector<double>& extra_times) {
  std::vector<double> times;
  for (int i = 0; i < slab_time_samples; ++i)
    times.push_back(t_start + (t_end - t_start) * i / (slab_time_samples - 1));
  times.insert(times.end(), extra_times.begin(), extra_times.end());

  const int n = mesh.n_elements;
  int last1 = -1, first2 = n, cut_lo = n, cut_hi = -1;
  for (double t : times) {
    const double x = path.position(t);
    if (!(x > mesh.x_left && x < mesh.x_right))
      throw Error(Errc::interface_exits_domain, "interface at " + std::to_string(x) + " for t=" + std::to_string(t));
    const auto [j1, j2] = side_limits(mesh, snap_to_node(mesh, x));
    last1 = std::max(last1, j1);
    first2 = std::min(first2, j2);
    if (j1 == j2) {
      cut_lo = std::min(cut_lo, j1);
      cut_hi = std::max(cut_hi, j1);
    }
  }

  SlabTopology s;
  s.t_start = t_start;
  s.t_end = t_end;
  for (int j = 0; j <= last1; ++j) s.active_1.push_back(j);
  for (int j = first2; j < n; ++j) s.active_2.push_back(j);
  for (int j = cut_lo; j <= cut_hi; ++j) s.swept_elements.push_back(j);

  auto swept = [&](int j) { return j >= cut_lo && j <= cut_hi; };
  for (int k = 1; k < n; ++k) {
    if (!(swept(k - 1) || swept(k))) continue;
    if (k <= last1) s.stabilized_faces_1.push_back(k);
    if (k - 1 >= first2) s.stabilized_faces_2.push_back(k);
  }
  return s;
}

}  // namespace cutdg
