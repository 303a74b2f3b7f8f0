#pragma once

#include <Eigen/Dense>

#include "cutdg/assembly1d.hpp"

namespace cutdg {

struct AcousticMaterial {
  double rho = 1;
  double c = 1;

  double impedance() const { return rho * c; }
};

// Conservative variables (m, q) = (rho u, p / (rho c^2)).
struct AcousticSystem {
  AcousticMaterial material_1;
  AcousticMaterial material_2;
  Eigen::Matrix2d A_1, A_2;
  Eigen::Matrix2d B_1, B_2;

  static AcousticSystem make(const AcousticMaterial& m1, const AcousticMaterial& m2);

  const AcousticMaterial& material(int side) const { return side == 1 ? material_1 : material_2; }
  const Eigen::Matrix2d& A(int side) const { return side == 1 ? A_1 : A_2; }
  const Eigen::Matrix2d& B(int side) const { return side == 1 ? B_1 : B_2; }
  // Flux model with edge speeds c_i.
  FluxModel flux() const;
};

Eigen::Matrix2d acoustic_flux_matrix(const AcousticMaterial& m);
Eigen::Matrix2d acoustic_energy_weight(const AcousticMaterial& m);

Eigen::Vector2d to_conservative(const AcousticMaterial& m, double u, double p);
// Returns (u, p).
Eigen::Vector2d to_primitive(const AcousticMaterial& m, double mom, double q);

// 1/2 (int U^T B U + gamma_M J_1(U, B U)).
double acoustic_energy(const AcousticSystem& sys, const DgOperators& ops, const Eigen::VectorXd& u);

// Per-dof weight B_i(comp, comp); B-weighted mass is diag(w) * mass.
Eigen::VectorXd acoustic_energy_weights(const AcousticSystem& sys, const DofMap1D& dofs);

// Band-limited source pulse f0(xi) supported on (0, 1/fc).
struct AcousticPulse {
  double fc = 50;
  double t0 = 0.051;

  double f0(double xi) const;
  double df0(double xi) const;
};

// Incident pulse in material 1, reflected and transmitted at a fixed interface.
class AcousticExact {
 public:
  AcousticExact(const AcousticSystem& sys, double x_gamma, AcousticPulse pulse = {});

  // (u, p) on the given side.
  Eigen::Vector2d primitive(int side, double x, double t) const;
  Eigen::Vector2d conservative(int side, double x, double t) const;
  double reflection() const { return R_; }
  double transmission() const { return T_; }

 private:
  double phi(double s) const;
  AcousticSystem sys_;
  double xg_;
  AcousticPulse pulse_;
  double R_, T_;
};

}  // namespace cutdg
