#include "kernel1d.hpp"

#include <cmath>

#include "cutdg/quadrature.hpp"

namespace cutdg::detail {

const IntervalBasis<double>& interval_basis(int degree) {
  static const std::vector<IntervalBasis<double>> table = [] {
    std::vector<IntervalBasis<double>> t;
    for (int r = 0; r <= 8; ++r) t.emplace_back(r);
    return t;
  }();
  if (degree < 0 || degree > 8) throw Error(Errc::invalid_count, "degree outside 0..8");
  return table[degree];
}

SideSpan span_of(const ActiveTopology& t) { return {t.side, t.first, t.last, t.x_begin, t.x_end}; }

namespace {

Eigen::VectorXd trace(const BackgroundMesh1D& m, const IntervalBasis<double>& b, int elem, double x) {
  const double xl = m.nodes[elem], xr = m.nodes[elem + 1];
  if (x != xl && x != xr) return b.eval(xl, xr, x);
  // phi_k(+-1) = (+-1)^k sqrt(2k + 1)
  Eigen::VectorXd v(b.degree() + 1);
  for (int k = 0; k <= b.degree(); ++k) v(k) = (x == xl && k % 2 ? -1.0 : 1.0) * std::sqrt(2.0 * k + 1);
  return v;
}

// int phi_i' phi_j over a whole element: 2 sqrt((2i + 1)(2j + 1)) for i > j, i + j odd.
const Eigen::MatrixXd& reference_stiffness(int degree) {
  static const std::vector<Eigen::MatrixXd> table = [] {
    std::vector<Eigen::MatrixXd> t;
    for (int r = 0; r <= 8; ++r) {
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r + 1, r + 1);
      for (int i = 0; i <= r; ++i)
        for (int j = 0; j < i; ++j)
          if ((i + j) % 2) d(i, j) = 2 * std::sqrt((2.0 * i + 1) * (2.0 * j + 1));
      t.push_back(d);
    }
    return t;
  }();
  return table[degree];
}

bool whole_element(const BackgroundMesh1D& m, int j, double a, double c) { return a == m.nodes[j] && c == m.nodes[j + 1]; }

// v-side trace pv, u-side trace pu, coupling matrix C: emits pv_i pu_j C(cv, cu).
void emit_block(Sink& sink, int side_v, int elem_v, const Eigen::VectorXd& pv, int side_u, int elem_u,
                const Eigen::VectorXd& pu, const Eigen::MatrixXd& C) {
  for (int cv = 0; cv < C.rows(); ++cv)
    for (int cu = 0; cu < C.cols(); ++cu) {
      const double c = C(cv, cu);
      if (c == 0.0) continue;
      for (int i = 0; i < pv.size(); ++i)
        for (int j = 0; j < pu.size(); ++j)
          sink.matrix({side_v, elem_v, cv, i}, {side_u, elem_u, cu, j}, c * pv(i) * pu(j));
    }
}

void emit_end(const Snapshot& s, const SideSpan& sp, bool left_end, Sink& sink) {
  const auto& b = interval_basis(s.degree);
  const int side = sp.side;
  const Eigen::MatrixXd& A = s.A[side - 1];
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const double lam = s.speed[side - 1];
  const int elem = left_end ? sp.first : sp.last;
  const double x = left_end ? sp.x_begin : sp.x_end;
  const Eigen::VectorXd p = trace(*s.mesh, b, elem, x);
  const EndKind kind = left_end ? s.left : s.right;
  const int end = left_end ? 0 : 1;
  // Left end: the form carries -F v+, right end: +F v-.
  const double sign = left_end ? -1.0 : 1.0;
  switch (kind) {
    case EndKind::data: {
      const Eigen::MatrixXd interior = left_end ? Eigen::MatrixXd(0.5 * (A - lam * I)) : Eigen::MatrixXd(0.5 * (A + lam * I));
      const Eigen::MatrixXd exterior = left_end ? Eigen::MatrixXd(0.5 * (A + lam * I)) : Eigen::MatrixXd(0.5 * (A - lam * I));
      emit_block(sink, side, elem, p, side, elem, p, sign * interior);
      for (int cv = 0; cv < A.rows(); ++cv)
        for (int dc = 0; dc < A.cols(); ++dc) {
          if (exterior(cv, dc) == 0.0) continue;
          for (int i = 0; i < p.size(); ++i) sink.data({side, elem, cv, i}, end, dc, -sign * exterior(cv, dc) * p(i));
        }
      break;
    }
    case EndKind::extrapolate:
      emit_block(sink, side, elem, p, side, elem, p, sign * A);
      break;
    case EndKind::prescribed:
      for (int cv = 0; cv < A.rows(); ++cv)
        for (int i = 0; i < p.size(); ++i) sink.data({side, elem, cv, i}, end, cv, -sign * p(i));
      break;
  }
}

}  // namespace

void emit_spatial(const Snapshot& s, Sink& sink, const SpatialTerms& terms) {
  const auto& b = interval_basis(s.degree);
  const BackgroundMesh1D& m = *s.mesh;
  const int nq = s.degree + 2;

  for (const SideSpan& sp : s.spans) {
    const int side = sp.side;
    const Eigen::MatrixXd& A = s.A[side - 1];
    const double lam = s.speed[side - 1];
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.rows(), A.cols());

    if (terms.volume) {
      for (int j = sp.first; j <= sp.last; ++j) {
        const double a = std::max(m.nodes[j], sp.x_begin), c = std::min(m.nodes[j + 1], sp.x_end);
        if (!(c > a)) continue;
        if (whole_element(m, j, a, c)) {
          const Eigen::MatrixXd& D = reference_stiffness(s.degree);
          for (int cv = 0; cv < A.rows(); ++cv)
            for (int cu = 0; cu < A.cols(); ++cu) {
              if (A(cv, cu) == 0.0) continue;
              for (int i = 0; i <= s.degree; ++i)
                for (int k = 0; k < i; ++k)
                  if (D(i, k) != 0.0) sink.matrix({side, j, cv, i}, {side, j, cu, k}, -A(cv, cu) * D(i, k));
            }
          continue;
        }
        const Rule1D<double> rule = gauss_rule<double>(nq, a, c);
        for (Eigen::Index q = 0; q < rule.size(); ++q) {
          const double x = rule.points(0, q);
          const Eigen::VectorXd phi = b.eval(m.nodes[j], m.nodes[j + 1], x, 0);
          const Eigen::VectorXd dphi = s.degree > 0 ? b.eval(m.nodes[j], m.nodes[j + 1], x, 1)
                                                    : Eigen::VectorXd::Zero(1);
          emit_block(sink, side, j, dphi, side, j, phi, -rule.weights(q) * A);
        }
      }
    }

    if (terms.edges) {
      const Eigen::MatrixXd up = 0.5 * (A + lam * I), down = 0.5 * (A - lam * I);
      for (int k = sp.first + 1; k <= sp.last; ++k) {
        const double x = m.nodes[k];
        const Eigen::VectorXd pl = trace(m, b, k - 1, x), pr = trace(m, b, k, x);
        emit_block(sink, side, k - 1, pl, side, k - 1, pl, up);
        emit_block(sink, side, k - 1, pl, side, k, pr, down);
        emit_block(sink, side, k, pr, side, k - 1, pl, -up);
        emit_block(sink, side, k, pr, side, k, pr, -down);
      }
    }
  }

  if (terms.ends) {
    emit_end(s, s.spans.front(), true, sink);
    emit_end(s, s.spans.back(), false, sink);
  }

  if (terms.interface && s.interface) {
    const SideSpan& s1 = s.spans[0];
    const SideSpan& s2 = s.spans[1];
    const Eigen::VectorXd p1 = trace(m, b, s1.last, s.x_gamma), p2 = trace(m, b, s2.first, s.x_gamma);
    const double l1 = s.lambda[0], l2 = s.lambda[1];
    const auto& F1 = s.iface_flux[0];
    const auto& F2 = s.iface_flux[1];
    const auto& P1 = s.iface_jump[0];
    const auto& P2 = s.iface_jump[1];
    emit_block(sink, 1, s1.last, p1, 1, s1.last, p1, F1 - l1 * P1);
    emit_block(sink, 1, s1.last, p1, 2, s2.first, p2, l1 * P2);
    emit_block(sink, 2, s2.first, p2, 2, s2.first, p2, -F2 - l2 * P2);
    emit_block(sink, 2, s2.first, p2, 1, s1.last, p1, l2 * P1);
  }
}

void emit_mass(const BackgroundMesh1D& m, int degree, int components, const std::vector<SideSpan>& spans,
               Sink& sink) {
  const auto& b = interval_basis(degree);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(components, components);
  for (const SideSpan& sp : spans) {
    for (int j = sp.first; j <= sp.last; ++j) {
      const double a = std::max(m.nodes[j], sp.x_begin), c = std::min(m.nodes[j + 1], sp.x_end);
      if (!(c > a)) continue;
      if (whole_element(m, j, a, c)) {
        for (int cv = 0; cv < components; ++cv)
          for (int i = 0; i <= degree; ++i) sink.matrix({sp.side, j, cv, i}, {sp.side, j, cv, i}, c - a);
        continue;
      }
      const Rule1D<double> rule = gauss_rule<double>(degree + 2, a, c);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd phi = b.eval(m.nodes[j], m.nodes[j + 1], rule.points(0, q));
        emit_block(sink, sp.side, j, phi, sp.side, j, phi, rule.weights(q) * I);
      }
    }
  }
}

void emit_ghost(const BackgroundMesh1D& m, int degree, int components, int side, const std::vector<int>& faces,
                int s, const PenaltyConfig& penalties, double scale, Sink& sink) {
  const auto& b = interval_basis(degree);
  const double h = m.h();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(components, components);
  for (int k : faces) {
    const double x = m.nodes[k];
    const Eigen::MatrixXd dm = b.eval_derivatives(m.nodes[k - 1], m.nodes[k], x, degree);
    const Eigen::MatrixXd dp = b.eval_derivatives(m.nodes[k], m.nodes[k + 1], x, degree);
    for (int kk = 0; kk <= degree; ++kk) {
      const double c = scale * penalties.omega_k(kk) * std::pow(h, 2 * kk + s);
      const Eigen::VectorXd vm = dm.col(kk), vp = dp.col(kk);
      emit_block(sink, side, k, vp, side, k, vp, c * I);
      emit_block(sink, side, k, vp, side, k - 1, vm, -c * I);
      emit_block(sink, side, k - 1, vm, side, k, vp, -c * I);
      emit_block(sink, side, k - 1, vm, side, k - 1, vm, c * I);
    }
  }
}

TripletSink::TripletSink(const DofMap1D& dofs, int data_components) : dofs_(dofs) {
  data_columns[0] = Eigen::MatrixXd::Zero(dofs.size, data_components);
  data_columns[1] = Eigen::MatrixXd::Zero(dofs.size, data_components);
}

void TripletSink::matrix(const LocalDof& v, const LocalDof& u, double value) {
  triplets.emplace_back(dofs_.index(v.side, v.elem, v.comp, v.mode), dofs_.index(u.side, u.elem, u.comp, u.mode),
                        value);
}

void TripletSink::data(const LocalDof& v, int end, int data_comp, double value) {
  data_columns[end](dofs_.index(v.side, v.elem, v.comp, v.mode), data_comp) += value;
}

SparseMatrix TripletSink::build() const {
  SparseMatrix M(dofs_.size, dofs_.size);
  M.setFromTriplets(triplets.begin(), triplets.end());
  return M;
}

}  // namespace cutdg::detail
