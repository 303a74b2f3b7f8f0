#include <doctest.h>

#include <functional>
#include <random>

#include "cutdg/error.hpp"
#include "cutdg/geometry1d.hpp"

using namespace cutdg;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::invalid_count;
}

}  // namespace

TEST_CASE("uniform background mesh") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 8);
  CHECK(m.nodes.size() == 9);
  CHECK(m.h() == doctest::Approx(0.25));
  CHECK(m.nodes.front() == -1);
  CHECK(m.nodes.back() == 1);
  for (int j = 0; j < 8; ++j) CHECK(m.element_right(j) - m.element_left(j) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(code_of([] { build_mesh(1, -1, 4); }) == Errc::invalid_extent);
  CHECK(code_of([] { build_mesh(-1, 1, 1); }) == Errc::invalid_count);
}

TEST_CASE("cut classification") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 20);
  const auto [s1, s2] = classify(m, 1e-4);
  REQUIRE(s1.cut_element.has_value());
  REQUIRE(s2.cut_element.has_value());
  CHECK(s1.cut_element->element == 10);
  CHECK(s2.cut_element->element == 10);
  CHECK(s1.cut_element->b == doctest::Approx(1e-4));
  CHECK(s2.cut_element->a == doctest::Approx(1e-4));
  CHECK(s1.first == 0);
  CHECK(s1.last == 10);
  CHECK(s2.first == 10);
  CHECK(s2.last == 19);
  // The cut element is stabilized through its face interior to each active mesh.
  CHECK(s1.stabilized_faces == std::vector<int>{10});
  CHECK(s2.stabilized_faces == std::vector<int>{11});
  CHECK(s1.physical_right(m, 10) == doctest::Approx(1e-4));
  CHECK(s2.physical_left(m, 10) == doctest::Approx(1e-4));
}

TEST_CASE("interface on a node is fitted") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 20);
  for (double x : {0.0, 0.1, 0.1 + 1e-17}) {
    const auto [s1, s2] = classify(m, x);
    CHECK_FALSE(s1.cut_element.has_value());
    CHECK_FALSE(s2.cut_element.has_value());
    CHECK(s1.stabilized_faces.empty());
    CHECK(s2.stabilized_faces.empty());
    CHECK(s1.last + 1 == s2.first);
  }
  CHECK(snap_to_node(m, 0.1 + 1e-17) == m.nodes[11]);
  CHECK(snap_to_node(m, 0.1 + 1e-8) != m.nodes[11]);
}

TEST_CASE("active meshes partition the background mesh for random cuts") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 37);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  for (int t = 0; t < 200; ++t) {
    const double x = u(gen);
    const auto [s1, s2] = classify(m, x);
    CHECK(s1.first == 0);
    CHECK(s2.last == 36);
    const int overlap = s1.last - s2.first + 1;
    CHECK((overlap == 0 || overlap == 1));
    CHECK(s1.cut_element.has_value() == (overlap == 1));
    double len = 0;
    for (int j : s1.elements) len += s1.physical_right(m, j) - s1.physical_left(m, j);
    for (int j : s2.elements) len += s2.physical_right(m, j) - s2.physical_left(m, j);
    CHECK(len == doctest::Approx(2).epsilon(1e-14));
  }
}

TEST_CASE("interface outside the domain") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 10);
  CHECK(code_of([&] { classify(m, 1.0); }) == Errc::interface_outside_domain);
  CHECK(code_of([&] { classify(m, -2.0); }) == Errc::interface_outside_domain);
}

TEST_CASE("interface paths") {
  const InterfacePath c = InterfacePath::constant(0.3);
  CHECK(c.position(7) == 0.3);
  CHECK(c.velocity(7) == 0);
  const InterfacePath l = InterfacePath::linear(1e-4, 0.111);
  CHECK(l.position(0.1) == doctest::Approx(1e-4 + 0.0111));
  CHECK(l.velocity(0.5) == doctest::Approx(0.111));
  const InterfacePath s = InterfacePath::sinusoidal_in(-0.499, -1, 1);
  const double amp = 0.4 * (-0.499 + 1) * (1 + 0.499);
  CHECK(s.position(0.4) == doctest::Approx(-0.499 + amp * std::sin(0.4)));
  CHECK(s.velocity(0.4) == doctest::Approx(amp * std::cos(0.4)));
}

TEST_CASE("slab topology of a moving interface") {
  const BackgroundMesh1D m = build_mesh(-1, 1, 20);
  // Crosses the node at 0 during the slab.
  const InterfacePath p = InterfacePath::linear(-0.02, 1.0);
  const SlabTopology s = slab_topology(m, p, 0.0, 0.04);
  CHECK(s.swept_elements == std::vector<int>{9, 10});
  CHECK(s.active_1.back() == 10);
  CHECK(s.active_2.front() == 9);
  CHECK(s.stabilized_faces(1) == std::vector<int>{9, 10});
  CHECK(s.stabilized_faces(2) == std::vector<int>{10, 11});
  CHECK(code_of([&] { slab_topology(m, InterfacePath::linear(0.9, 1.0), 0.0, 0.5); }) == Errc::interface_exits_domain);
}
