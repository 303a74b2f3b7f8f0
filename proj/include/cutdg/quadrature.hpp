#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "cutdg/error.hpp"

namespace cutdg {

template <typename T, int Dim>
struct QuadratureRule {
  Eigen::Matrix<T, Dim, Eigen::Dynamic> points;
  Eigen::Matrix<T, Eigen::Dynamic, 1> weights;
  int degree = 0;

  Eigen::Index size() const { return weights.size(); }
};

template <typename T>
using Rule1D = QuadratureRule<T, 1>;
template <typename T>
using Rule2D = QuadratureRule<T, 2>;

template <typename T>
using Point2 = Eigen::Matrix<T, 2, 1>;

namespace detail {

// Returns (P_n(x), P_n'(x)).
template <typename T>
std::pair<T, T> legendre_with_derivative(int n, T x) {
  T p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1)};
}

// Newton iteration on P_n from the Tricomi initial guess.
template <typename T>
Rule1D<T> compute_gauss_legendre(int n) {
  Rule1D<T> rule;
  rule.points.resize(1, n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;
  const T pi = std::numbers::pi_v<T>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    T x = std::cos(pi * (T(i) + T(0.75)) / (T(n) + T(0.5)));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const T dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 4 * std::numeric_limits<T>::epsilon()) break;
    }
    const T dp = legendre_with_derivative(n, x).second;
    const T w = 2 / ((1 - x * x) * dp * dp);
    rule.points(0, i) = -x;
    rule.points(0, n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.points(0, n / 2) = 0;
  return rule;
}

}  // namespace detail

constexpr int max_gauss_points = 20;

// Gauss-Legendre rule on [-1, 1].
template <typename T = double>
const Rule1D<T>& gauss_reference(int n) {
  static const std::array<Rule1D<T>, max_gauss_points + 1> table = [] {
    std::array<Rule1D<T>, max_gauss_points + 1> t;
    for (int k = 1; k <= max_gauss_points; ++k) t[k] = detail::compute_gauss_legendre<T>(k);
    return t;
  }();
  if (n < 1 || n > max_gauss_points)
    throw Error(Errc::unsupported_point_count, "Gauss rule needs 1..20 points, got " + std::to_string(n));
  return table[n];
}

template <typename T = double>
Rule1D<T> gauss_rule(int n, T a, T b) {
  const Rule1D<T>& ref = gauss_reference<T>(n);
  Rule1D<T> rule;
  const T half = (b - a) / 2, mid = (a + b) / 2;
  rule.points = (ref.points.array() * half + mid).matrix();
  rule.weights = ref.weights * half;
  rule.degree = ref.degree;
  return rule;
}

// Collapsed (Duffy) tensor rule on a triangle, exact for total degree `degree`.
template <typename T = double>
Rule2D<T> triangle_rule(int degree, const Point2<T>& v0, const Point2<T>& v1, const Point2<T>& v2) {
  // The collapsed map adds a factor (1 - eta) of degree one.
  const int n = (degree + 3) / 2;
  const Rule1D<T>& g = gauss_reference<T>(n);
  const Point2<T> e1 = v1 - v0, e2 = v2 - v0;
  const T det = std::abs(e1(0) * e2(1) - e1(1) * e2(0));
  Rule2D<T> rule;
  rule.points.resize(2, n * n);
  rule.weights.resize(n * n);
  rule.degree = degree;
  int q = 0;
  for (int i = 0; i < n; ++i) {
    const T xi = (g.points(0, i) + 1) / 2;
    for (int j = 0; j < n; ++j) {
      const T eta = (g.points(0, j) + 1) / 2;
      rule.points.col(q) = v0 + xi * (1 - eta) * e1 + eta * e2;
      rule.weights(q) = g.weights(i) * g.weights(j) / 4 * (1 - eta) * det;
      ++q;
    }
  }
  return rule;
}

template <typename T = double>
T polygon_area(const std::vector<Point2<T>>& poly) {
  T a = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    a += p(0) * q(1) - q(0) * p(1);
  }
  return a / 2;
}

template <typename T = double>
Rule2D<T> polygon_rule(int degree, const std::vector<Point2<T>>& poly) {
  if (poly.size() < 3 || !(std::abs(polygon_area(poly)) > 0))
    throw Error(Errc::empty_sub_extent, "polygon has zero area");
  Point2<T> c = Point2<T>::Zero();
  for (const auto& p : poly) c += p;
  c /= T(poly.size());
  std::vector<Rule2D<T>> parts;
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    parts.push_back(triangle_rule<T>(degree, c, poly[i], poly[(i + 1) % poly.size()]));
    total += parts.back().size();
  }
  Rule2D<T> rule;
  rule.points.resize(2, total);
  rule.weights.resize(total);
  rule.degree = degree;
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    rule.points.middleCols(off, p.size()) = p.points;
    rule.weights.segment(off, p.size()) = p.weights;
    off += p.size();
  }
  return rule;
}

template <typename T = double>
Rule1D<T> cut_cell_rule(int basis_degree, T a, T b) {
  if (!(b > a)) throw Error(Errc::empty_sub_extent, "sub-interval has zero length");
  return gauss_rule<T>(basis_degree + 2, a, b);
}

template <typename T = double>
Rule2D<T> cut_cell_rule(int basis_degree, const std::vector<Point2<T>>& poly) {
  return polygon_rule<T>(2 * basis_degree + 2, poly);
}

// Gauss rule along the segment [p, q]; weights carry the segment length.
template <typename T = double>
Rule2D<T> segment_rule(int n, const Point2<T>& p, const Point2<T>& q) {
  const Rule1D<T>& g = gauss_reference<T>(n);
  const T len = (q - p).norm();
  Rule2D<T> rule;
  rule.points.resize(2, n);
  rule.weights = g.weights * (len / 2);
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) rule.points.col(i) = p + (g.points(0, i) + 1) / 2 * (q - p);
  return rule;
}

}  // namespace cutdg
