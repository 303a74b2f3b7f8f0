#include "cutdg/conservation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "cutdg/error.hpp"

namespace cutdg {

double ConservationTrace::max_abs() const {
  double m = 0;
  for (const auto& e : error) m = std::max(m, e.cwiseAbs().maxCoeff());
  return m;
}

double ConservationTrace::final_abs() const { return error.empty() ? 0.0 : error.back().cwiseAbs().maxCoeff(); }

ConservationRecorder::ConservationRecorder(const DgOperators& ops, const RkScheme& scheme, const Eigen::VectorXd& u0,
                                           double t0)
    : ops_(ops), scheme_(scheme), initial_(total_integral(ops, u0)) {
  const int m = ops.flux.components();
  net_ = Eigen::VectorXd::Zero(m);
  step_flux_ = Eigen::VectorXd::Zero(m);
  seen_.assign(scheme.stages(), 0);
  trace_.times.push_back(t0);
  trace_.error.push_back(Eigen::VectorXd::Zero(m));
}

StageObserver ConservationRecorder::observer() {
  return [this](const StageRecord& rec) {
    const auto [fl, fr] = boundary_fluxes(ops_, *rec.u, rec.g_left, rec.g_right);
    step_flux_ += scheme_.b(rec.stage) * (fl - fr);
    seen_[rec.stage] = 1;
  };
}

void ConservationRecorder::finish_step(double t, double dt, const Eigen::VectorXd& u) {
  if (std::find(seen_.begin(), seen_.end(), 0) != seen_.end())
    throw Error(Errc::missing_stage_records, "step closed without all stage fluxes");
  net_ += dt * step_flux_;
  step_flux_.setZero();
  std::fill(seen_.begin(), seen_.end(), 0);
  trace_.times.push_back(t);
  trace_.error.push_back(net_ - (total_integral(ops_, u) - initial_));
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0)) throw Error(Errc::non_spd_input, "smallest eigenvalue " + std::to_string(lmin));
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  return sv(0) / sv(sv.size() - 1);
}

double condition_number(const SparseMatrix& m) {
  // Spectrum is the union of the spectra of the decoupled diagonal blocks.
  const int n = static_cast<int>(m.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0) parent[find(static_cast<int>(it.row()))] = find(static_cast<int>(it.col()));
  std::map<int, std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks[find(i)].push_back(i);
  double lmin = std::numeric_limits<double>::infinity(), lmax = 0;
  for (const auto& [root, idx] : blocks) {
    Eigen::MatrixXd b(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) b(i, j) = m.coeff(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
    lmin = std::min(lmin, es.eigenvalues().minCoeff());
    lmax = std::max(lmax, es.eigenvalues().maxCoeff());
  }
  if (!(lmin > 0)) throw Error(Errc::non_spd_input, "smallest eigenvalue " + std::to_string(lmin));
  return lmax / lmin;
}

}  // namespace cutdg
