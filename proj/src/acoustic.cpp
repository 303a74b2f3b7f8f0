#include "cutdg/acoustic.hpp"

#include <cmath>
#include <numbers>

#include "cutdg/error.hpp"

namespace cutdg {

Eigen::Matrix2d acoustic_flux_matrix(const AcousticMaterial& m) {
  Eigen::Matrix2d A;
  A << 0, m.rho * m.c * m.c, 1 / m.rho, 0;
  return A;
}

Eigen::Matrix2d acoustic_energy_weight(const AcousticMaterial& m) {
  return Eigen::Vector2d(1 / m.rho, m.rho * m.c * m.c).asDiagonal();
}

AcousticSystem AcousticSystem::make(const AcousticMaterial& m1, const AcousticMaterial& m2) {
  for (const auto* m : {&m1, &m2})
    if (!(m->rho > 0 && m->c > 0)) throw Error(Errc::invalid_extent, "material parameters must be positive");
  AcousticSystem s;
  s.material_1 = m1;
  s.material_2 = m2;
  s.A_1 = acoustic_flux_matrix(m1);
  s.A_2 = acoustic_flux_matrix(m2);
  s.B_1 = acoustic_energy_weight(m1);
  s.B_2 = acoustic_energy_weight(m2);
  return s;
}

FluxModel AcousticSystem::flux() const { return FluxModel::system(A_1, A_2, material_1.c, material_2.c); }

Eigen::Vector2d to_conservative(const AcousticMaterial& m, double u, double p) {
  return {m.rho * u, p / (m.rho * m.c * m.c)};
}

Eigen::Vector2d to_primitive(const AcousticMaterial& m, double mom, double q) {
  return {mom / m.rho, q * m.rho * m.c * m.c};
}

Eigen::VectorXd acoustic_energy_weights(const AcousticSystem& sys, const DofMap1D& dofs) {
  Eigen::VectorXd w(dofs.size);
  for (int side = 1; side <= 2; ++side)
    for (int j = dofs.first[side - 1]; j <= dofs.last[side - 1]; ++j)
      for (int c = 0; c < 2; ++c)
        w.segment(dofs.index(side, j, c, 0), dofs.degree + 1).setConstant(sys.B(side)(c, c));
  return w;
}

double acoustic_energy(const AcousticSystem& sys, const DgOperators& ops, const Eigen::VectorXd& u) {
  const Eigen::VectorXd w = acoustic_energy_weights(sys, ops.dofs);
  return 0.5 * u.dot(w.cwiseProduct(ops.mass * u));
}

double AcousticPulse::f0(double xi) const {
  if (!(xi > 0 && xi < 1 / fc)) return 0;
  const double w = 2 * std::numbers::pi * fc;
  return std::sin(w * xi) - 21.0 / 32 * std::sin(2 * w * xi) + 63.0 / 768 * std::sin(4 * w * xi) -
         1.0 / 512 * std::sin(8 * w * xi);
}

double AcousticPulse::df0(double xi) const {
  if (!(xi > 0 && xi < 1 / fc)) return 0;
  const double w = 2 * std::numbers::pi * fc;
  return w * (std::cos(w * xi) - 42.0 / 32 * std::cos(2 * w * xi) + 252.0 / 768 * std::cos(4 * w * xi) -
              8.0 / 512 * std::cos(8 * w * xi));
}

AcousticExact::AcousticExact(const AcousticSystem& sys, double x_gamma, AcousticPulse pulse)
    : sys_(sys), xg_(x_gamma), pulse_(pulse) {
  const double z1 = sys.material_1.impedance(), z2 = sys.material_2.impedance();
  R_ = (z2 - z1) / (z2 + z1);
  T_ = 2 * z2 / (z1 + z2);
}

// Incident pressure at the interface, as a function of time.
double AcousticExact::phi(double s) const {
  const auto& m1 = sys_.material_1;
  return -m1.rho * pulse_.f0(pulse_.t0 + s - xg_ / m1.c);
}

Eigen::Vector2d AcousticExact::primitive(int side, double x, double t) const {
  const double c1 = sys_.material_1.c, c2 = sys_.material_2.c;
  const double z1 = sys_.material_1.impedance(), z2 = sys_.material_2.impedance();
  if (side == 1) {
    const double pi = phi(t - (x - xg_) / c1);
    const double pr = R_ * phi(t - (xg_ - x) / c1);
    return {pi / z1 - pr / z1, pi + pr};
  }
  const double pt = T_ * phi(t - (x - xg_) / c2);
  return {pt / z2, pt};
}

Eigen::Vector2d AcousticExact::conservative(int side, double x, double t) const {
  const Eigen::Vector2d up = primitive(side, x, t);
  return to_conservative(sys_.material(side), up(0), up(1));
}

}  // namespace cutdg
