#include <doctest.h>

#include <random>

#include "cutdg/assembly1d.hpp"
#include "cutdg/conservation.hpp"
#include "cutdg/norms.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace cutdg;

namespace {

const double pi = std::acos(-1.0);

DgOperators scalar_ops(int n, double xg, int r, const PenaltyConfig& pen = {}) {
  const FluxModel flux = FluxModel::scalar(2, 1);
  return assemble_operators(build_mesh(-1, 1, n), xg, r, pen, flux, BoundarySpec::upwind(flux));
}

Eigen::VectorXd random_vector(int n, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(gen);
  return v;
}

}  // namespace

TEST_CASE("ghost penalty weights and the conservation flag") {
  CHECK(default_omega(0) == doctest::Approx(1));
  CHECK(default_omega(1) == doctest::Approx(1.0 / 3));
  CHECK(default_omega(2) == doctest::Approx(1.0 / 20));
  CHECK(default_omega(3) == doctest::Approx(1.0 / 252));
  PenaltyConfig p;
  CHECK(p.omega_k(2) == doctest::Approx(1.0 / 20));
  p.omega = {2.0, 5.0};
  CHECK(p.omega_k(1) == 5.0);
  CHECK(PenaltyConfig{0.1, -0.9, 0.25, 0.75, {}}.conservative());
  CHECK_FALSE(PenaltyConfig{0.25, -0.25, 0.25, 0.75, {}}.conservative());
  CHECK(PenaltyConfig::acoustic_defaults().conservative());
}

TEST_CASE("flux models reject ill-posed speeds") {
  CHECK_THROWS_AS(FluxModel::scalar(2, -1), Error);
  CHECK_THROWS_AS(FluxModel::scalar(0, 1), Error);
  const FluxModel f = FluxModel::scalar(-2, -1);
  CHECK(f.max_speed() == doctest::Approx(2));
  const BoundarySpec bc = BoundarySpec::upwind(f);
  CHECK(bc.left == EndKind::extrapolate);
  CHECK(bc.right == EndKind::data);
}

TEST_CASE("uncut constant elements have mass h") {
  const DgOperators ops = scalar_ops(10, 1e-4, 0);
  const Eigen::MatrixXd m = props::dense(ops.mass);
  CHECK(m(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(m(3, 3) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(ops.dofs.size == 6 + 5);
}

TEST_CASE("uncut blocks away from stabilized faces are standard DG mass blocks") {
  for (int r = 1; r <= 3; ++r) {
    const DgOperators ops = scalar_ops(12, 0.0123, r);
    const Eigen::MatrixXd m = props::dense(ops.mass);
    const int b = r + 1;
    for (int j : {0, 3}) {
      const int i = ops.dofs.index(1, j, 0, 0);
      CHECK((m.block(i, i, b, b) - ops.mesh.h() * Eigen::MatrixXd::Identity(b, b)).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK(m.row(i).cwiseAbs().sum() == doctest::Approx(ops.mesh.h()).epsilon(1e-14));
    }
  }
}

TEST_CASE("mass ghost penalty for constants across one face") {
  const BackgroundMesh1D mesh = build_mesh(-1, 1, 10);
  const auto [s1, s2] = classify(mesh, 0.05);
  const PenaltyConfig with{0.1, -0.9, 0.25, 0.75, {}}, without{0.1, -0.9, 0.0, 0.75, {}};
  const Eigen::MatrixXd diff =
      props::dense(assemble_mass(mesh, s1, s2, 0, with)) - props::dense(assemble_mass(mesh, s1, s2, 0, without));
  const DofMap1D d = DofMap1D::make(s1, s2, 0, 1);
  const double h = mesh.h(), g = 0.25;
  // Side 1 stabilizes face 5 between elements 4 and 5; side 2 face 6 between elements 5 and 6.
  const int a = d.index(1, 4, 0, 0), b = d.index(1, 5, 0, 0), c = d.index(2, 5, 0, 0), e = d.index(2, 6, 0, 0);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(d.size, d.size);
  for (auto [i, j] : {std::pair{a, b}, std::pair{c, e}}) {
    expected(i, i) = expected(j, j) = g * h;
    expected(i, j) = expected(j, i) = -g * h;
  }
  CHECK((diff - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("ghost penalty form") {
  SUBCASE("global quadratic across stabilized faces has no jumps") {
    const DgOperators ops = scalar_ops(10, 0.033, 2);
    const Eigen::VectorXd u = project_initial(ops, SideFunction([](int, double x) { return x * x - 0.3 * x; }));
    const SparseMatrix j1 = ghost_penalty(ops.mesh, ops.side(1), ops.side(2), 2, 1);
    const SparseMatrix j0 = ghost_penalty(ops.mesh, ops.side(1), ops.side(2), 2, 0);
    CHECK(std::abs(u.dot(j1 * u)) <= 1e-14);
    CHECK(std::abs(u.dot(j0 * u)) <= 1e-14);
  }
  SUBCASE("jump of one between unit elements") {
    const BackgroundMesh1D mesh = build_mesh(0, 4, 4);
    const auto [s1, s2] = classify(mesh, 2.5);
    REQUIRE(s1.stabilized_faces == std::vector<int>{2});
    const DofMap1D d = DofMap1D::make(s1, s2, 1, 1);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d.size);
    u(d.index(1, 2, 0, 0)) = 1;
    const SparseMatrix j0 = ghost_penalty(mesh, s1, s2, 1, 0);
    CHECK(u.dot(j0 * u) == doctest::Approx(1).epsilon(1e-14));
  }
  SUBCASE("nonnegative for random vectors") {
    std::mt19937 gen(1);
    for (int r = 0; r <= 3; ++r) {
      const DgOperators ops = scalar_ops(9, 0.071, r);
      const SparseMatrix j1 = ghost_penalty(ops.mesh, ops.side(1), ops.side(2), r, 1);
      for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd v = random_vector(ops.dofs.size, gen);
        CHECK(v.dot(j1 * v) >= -1e-15);
      }
    }
  }
}

TEST_CASE("fitted interface reproduces two-domain DG entry by entry") {
  for (int r = 0; r <= 3; ++r) {
    CAPTURE(r);
    CHECK(props::fitted_equivalence_error(r) <= 1e-14);
  }
}

TEST_CASE("upwind coupling at interior edges") {
  const DgOperators ops = scalar_ops(10, 0.05, 2);
  const Eigen::MatrixXd k = props::dense(ops.spatial);
  // a > 0: the downwind element does not feed the upwind one.
  for (int j = 1; j < 4; ++j)
    CHECK(k.block(ops.dofs.index(1, j - 1, 0, 0), ops.dofs.index(1, j, 0, 0), 3, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(k.block(ops.dofs.index(1, 1, 0, 0), ops.dofs.index(1, 0, 0, 0), 3, 3).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("conservation identity of the spatial operator") {
  std::mt19937 gen(2);
  for (int r = 1; r <= 3; ++r) {
    for (const PenaltyConfig& pen : {PenaltyConfig{0.1, -0.9, 0.25, 0.75, {}}, PenaltyConfig{0.25, -0.25, 0.25, 0.75, {}}}) {
      const DgOperators ops = scalar_ops(11, 0.0377, r, pen);
      const Eigen::VectorXd ones = ones_test_vector(ops.dofs);
      for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd u = random_vector(ops.dofs.size, gen);
        const double g = std::uniform_real_distribution<double>(-1, 1)(gen);
        const auto [fl, fr] = boundary_fluxes(ops, u, Eigen::VectorXd::Constant(1, g), Eigen::VectorXd::Zero(1));
        const double lhs = ones.dot(ops.spatial * u - ops.inflow_left.col(0) * g);
        const double jump = 1 * evaluate(ops, u, 2, ops.x_gamma) - 2 * evaluate(ops, u, 1, ops.x_gamma);
        const double expected = fr(0) - fl(0) - (pen.lambda_2 - pen.lambda_1 + 1) * jump;
        CHECK(std::abs(lhs - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("two-sided constant state is steady") {
  for (int r = 0; r <= 3; ++r)
    for (double xg : {1e-4, 0.0371, 0.1 - 1e-9}) CHECK(props::stationary_steady_residual(r, xg) <= 1e-13);
}

TEST_CASE("stabilized projection") {
  SUBCASE("constants") {
    const DgOperators ops = scalar_ops(10, 0.013, 3);
    const Eigen::VectorXd u = project_initial(ops, SideFunction([](int, double) { return 1.0; }));
    for (int side = 1; side <= 2; ++side)
      for (int j = ops.dofs.first[side - 1]; j <= ops.dofs.last[side - 1]; ++j) {
        CHECK(u(ops.dofs.index(side, j, 0, 0)) == doctest::Approx(1).epsilon(1e-13));
        for (int k = 1; k <= 3; ++k) CHECK(std::abs(u(ops.dofs.index(side, j, 0, k))) <= 1e-13);
      }
    const SparseMatrix j1 = ghost_penalty(ops.mesh, ops.side(1), ops.side(2), 3, 1);
    CHECK(std::abs(u.dot(j1 * u)) <= 1e-14);
  }
  SUBCASE("piecewise linear data with r = 1") {
    const DgOperators ops = scalar_ops(10, 0.013, 1);
    auto f = [](int side, double x) { return side == 1 ? 3 * x - 1 : -0.5 * x + 2; };
    const Eigen::VectorXd u = project_initial(ops, SideFunction(f));
    for (int i = 0; i <= 100; ++i) {
      const double x = -1 + 2.0 * i / 100;
      const int side = x <= ops.x_gamma ? 1 : 2;
      CHECK(evaluate(ops, u, side, x) == doctest::Approx(f(side, x)).epsilon(1e-12));
    }
    // The cut element's physical parts on both sides.
    CHECK(evaluate(ops, u, 1, 5, 0.005) == doctest::Approx(f(1, 0.005)).epsilon(1e-12));
    CHECK(evaluate(ops, u, 2, 5, 0.1) == doctest::Approx(f(2, 0.1)).epsilon(1e-12));
  }
  SUBCASE("smooth data converges at order r + 1") {
    for (int r = 1; r <= 3; ++r) {
      double prev = 0;
      for (int n : {160, 320, 640}) {
        const double xg = 1e-4;
        const DgOperators ops = scalar_ops(n, xg, r);
        auto f = [&](int side, double x) { return side == 1 ? std::sin(2 * pi * x) : 2 * std::sin(4 * pi * (x - xg / 2)); };
        const Eigen::VectorXd u = project_initial(ops, SideFunction(f));
        const double e = error_norms(ops, u, f).l2;
        CAPTURE(r);
        if (prev > 0) {
          CHECK(std::log2(prev / e) >= r + 1 - 0.1);
          CHECK(std::log2(prev / e) <= r + 1 + 0.5);
        }
        prev = e;
      }
    }
  }
}

TEST_CASE("mass stays SPD and bounded over cut positions") {
  const BackgroundMesh1D mesh = build_mesh(-1, 1, 40);
  const double h = mesh.h();
  const std::vector<double> alphas{1e-8, 1e-6, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99};
  for (int r = 1; r <= 3; ++r) {
    double lo = INFINITY, hi = 0;
    for (double a : alphas) {
      const auto [s1, s2] = classify(mesh, a * h);
      const double k = condition_number(assemble_mass(mesh, s1, s2, r, PenaltyConfig{}));
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    CAPTURE(r);
    CHECK(hi / lo < 100);
  }
  // Linear elements: a sliver cut stays within a factor 10 of the centred cut.
  auto kappa = [&](double a, double gm) {
    const auto [s1, s2] = classify(mesh, a * h);
    return condition_number(assemble_mass(mesh, s1, s2, 1, PenaltyConfig{0.1, -0.9, gm, 0.75, {}}));
  };
  CHECK(kappa(1e-6, 0.25) < 10 * kappa(0.5, 0.25));
  // Without the mass penalty the sliver makes the mass nearly singular.
  double unstabilized = INFINITY;
  try {
    unstabilized = kappa(1e-8, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_spd_input);
  }
  CHECK(unstabilized >= 1e3 * kappa(1e-8, 0.25));
}

TEST_CASE("system assembly keeps components apart on uncut elements") {
  Eigen::MatrixXd A1(2, 2), A2(2, 2);
  A1 << 0, 4, 1, 0;
  A2 << 0, 9, 1, 0;
  const FluxModel flux = FluxModel::system(A1, A2);
  CHECK(flux.speed(1) == doctest::Approx(2));
  CHECK(flux.speed(2) == doctest::Approx(3));
  const DgOperators ops =
      assemble_operators(build_mesh(0, 1, 8), 0.43, 1, PenaltyConfig::acoustic_defaults(), flux, BoundarySpec::data_both());
  CHECK(ops.dofs.components == 2);
  CHECK(ops.dofs.size == 2 * 2 * (4 + 5));
  const Eigen::MatrixXd m = props::dense(ops.mass);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
}
