#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cutdg/error.hpp"
#include "cutdg/quadrature.hpp"

namespace cutdg {

namespace detail {

inline double falling_factorial(int p, int k) {
  double f = 1;
  for (int i = 0; i < k; ++i) f *= p - i;
  return f;
}

inline void check_derivative_order(int k, int r) {
  if (k < 0 || k > r)
    throw Error(Errc::derivative_order_exceeds_degree,
                "derivative order " + std::to_string(k) + " for degree " + std::to_string(r));
}

}  // namespace detail

// phi_k(x) = sqrt(2k+1) P_k(xi) with xi the affine image of x in [-1, 1].
// The mass matrix of a full element of length h is h * I.
template <typename T = double>
class IntervalBasis {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  explicit IntervalBasis(int degree) : r_(degree), coeff_(Matrix::Zero(degree + 1, degree + 1)) {
    if (degree < 0) throw Error(Errc::invalid_count, "negative degree");
    coeff_(0, 0) = 1;
    if (degree >= 1) coeff_(1, 1) = 1;
    for (int k = 1; k < degree; ++k) {
      for (int p = 0; p <= k; ++p) coeff_(k + 1, p + 1) += T(2 * k + 1) / T(k + 1) * coeff_(k, p);
      for (int p = 0; p <= k - 1; ++p) coeff_(k + 1, p) -= T(k) / T(k + 1) * coeff_(k - 1, p);
    }
    for (int k = 0; k <= degree; ++k) coeff_.row(k) *= std::sqrt(T(2 * k + 1));
  }

  int degree() const { return r_; }
  int dof_count() const { return r_ + 1; }

  // k-th derivative of every basis function of the element [a, b] at x.
  Vector eval(T a, T b, T x, int k = 0) const {
    detail::check_derivative_order(k, r_);
    const T xi = (2 * x - a - b) / (b - a);
    const T scale = std::pow(T(2) / (b - a), k);
    Vector out(r_ + 1);
    for (int i = 0; i <= r_; ++i) {
      T acc = 0;
      for (int p = r_; p >= k; --p) acc = acc * xi + coeff_(i, p) * T(detail::falling_factorial(p, k));
      out(i) = acc * scale;
    }
    return out;
  }

  // Columns hold derivatives 0..kmax.
  Matrix eval_derivatives(T a, T b, T x, int kmax) const {
    Matrix out(r_ + 1, kmax + 1);
    for (int k = 0; k <= kmax; ++k) out.col(k) = eval(a, b, x, k);
    return out;
  }

  const Matrix& monomial_coefficients() const { return coeff_; }

 private:
  int r_;
  Matrix coeff_;
};

// Scaled monomials ((x - xc)/s)^p ((y - yc)/s)^q, p + q <= r, ordered by total degree.
template <typename T = double>
class TriangleBasis {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  explicit TriangleBasis(int degree) : r_(degree) {
    if (degree < 0) throw Error(Errc::invalid_count, "negative degree");
    for (int d = 0; d <= degree; ++d)
      for (int p = d; p >= 0; --p) exps_.emplace_back(p, d - p);
  }

  int degree() const { return r_; }
  int dof_count() const { return (r_ + 1) * (r_ + 2) / 2; }
  const std::vector<std::pair<int, int>>& exponents() const { return exps_; }

  struct Frame {
    Point2<T> center;
    T scale;
  };

  static Frame frame(const Point2<T>& v0, const Point2<T>& v1, const Point2<T>& v2) {
    const T diam = std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()});
    return {(v0 + v1 + v2) / T(3), diam / 2};
  }

  // Partial derivative d^(dx+dy) / dx^dx dy^dy of every basis function.
  Vector eval(const Frame& f, const Point2<T>& x, int dx = 0, int dy = 0) const {
    detail::check_derivative_order(dx + dy, r_);
    const T xi = (x(0) - f.center(0)) / f.scale, eta = (x(1) - f.center(1)) / f.scale;
    const T s = std::pow(f.scale, -(dx + dy));
    Vector out(dof_count());
    for (int i = 0; i < dof_count(); ++i) {
      const auto [p, q] = exps_[i];
      if (p < dx || q < dy) {
        out(i) = 0;
        continue;
      }
      out(i) = T(detail::falling_factorial(p, dx) * detail::falling_factorial(q, dy)) *
               std::pow(xi, p - dx) * std::pow(eta, q - dy) * s;
    }
    return out;
  }

  // k-th directional derivative along the unit vector n.
  Vector eval_directional(const Frame& f, const Point2<T>& x, const Point2<T>& n, int k) const {
    detail::check_derivative_order(k, r_);
    Vector out = Vector::Zero(dof_count());
    T binom = 1;
    for (int j = 0; j <= k; ++j) {
      out += binom * std::pow(n(0), j) * std::pow(n(1), k - j) * eval(f, x, j, k - j);
      binom = binom * T(k - j) / T(j + 1);
    }
    return out;
  }

 private:
  int r_;
  std::vector<std::pair<int, int>> exps_;
};

}  // namespace cutdg
