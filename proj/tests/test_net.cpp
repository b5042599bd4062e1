#include <doctest.h>

#include <random>

#include "opinionlab/net.hpp"

using namespace opinionlab;

TEST_CASE("generators: exact row sums and zero diagonals") {
  for (int n : {2, 3, 4, 5, 7, 12, 20, 49, 121}) {
    std::vector<Network> nets;
    nets.push_back(make_complete(n));
    nets.push_back(make_directed_circle(n));
    if (n >= 3) nets.push_back(make_star(n));
    if (n >= 3) nets.push_back(make_two_stars(n));
    for (const Network& net : nets) {
      for (int i = 0; i < net.n; ++i) {
        CHECK(net.A.row(i).sum() == 1.0);  // exact, compensated construction
        CHECK(net.A(i, i) == 0.0);
      }
    }
  }
}

TEST_CASE("generator shapes") {
  const Network star3 = make_star(3);
  Matrix want(3, 3);
  want << 0, .5, .5, 1, 0, 0, 1, 0, 0;
  CHECK((star3.A - want).cwiseAbs().maxCoeff() == 0.0);

  const Network circ3 = make_directed_circle(3);
  Matrix wantc(3, 3);
  wantc << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  CHECK((circ3.A - wantc).cwiseAbs().maxCoeff() == 0.0);

  const Network two = make_two_stars(4);
  CHECK(two.n == 8);
  CHECK(two.A.topRightCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
  CHECK(two.A.bottomLeftCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("connectivity flags") {
  CHECK(is_connected(make_complete(4)));
  CHECK_FALSE(is_connected(make_two_stars(5)));

  // A pure cycle is strongly connected but periodic, so the strict
  // positive-power test fails. Cross-checked by inspecting A^k directly.
  const Network circle = make_directed_circle(5);
  const Connectivity c = connectivity(circle);
  CHECK(c.strongly_connected);
  CHECK_FALSE(c.aperiodic);
  CHECK_FALSE(is_connected(circle));
  Matrix power = Matrix::Identity(5, 5);
  bool ever_positive = false;
  for (int k = 1; k <= 25; ++k) {
    power = power * circle.A;
    if (power.minCoeff() > 0.0) ever_positive = true;
  }
  CHECK_FALSE(ever_positive);

  // The two-level star is bipartite, hence periodic as well.
  CHECK(connectivity(make_star(5)).strongly_connected);
  CHECK_FALSE(connectivity(make_star(5)).aperiodic);
  CHECK(connectivity(make_complete(3)).aperiodic);
}

TEST_CASE("stationary weights: frozen cases") {
  const Vector rho_c3 = stationary_weights(make_complete(3));
  for (int i = 0; i < 3; ++i) CHECK(rho_c3(i) == doctest::Approx(1.0 / 3).epsilon(1e-13));

  // Star n=5: rho_hub = 4 rho_spoke and the total is one.
  const Vector rho_star = stationary_weights(make_star(5));
  CHECK(rho_star(0) == doctest::Approx(0.5).epsilon(1e-13));
  for (int i = 1; i < 5; ++i) CHECK(rho_star(i) == doctest::Approx(0.125).epsilon(1e-13));

  const Vector rho_d4 = stationary_weights(make_directed_circle(4));
  for (int i = 0; i < 4; ++i) CHECK(rho_d4(i) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("stationary weights: uniform on complete networks, residual tight") {
  for (int n = 2; n <= 20; ++n) {
    const Network net = make_complete(n);
    const Vector rho = stationary_weights(net);
    for (int i = 0; i < n; ++i) CHECK(rho(i) == doctest::Approx(1.0 / n).epsilon(1e-12));
    CHECK((net.A.transpose() * rho - rho).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stationary weights agree with damped power iteration on random nets") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(eng() % 6);
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, (i + 1) % n) = u(eng);  // embedded cycle keeps it strongly connected
      for (int j = 0; j < n; ++j)
        if (j != i && eng() % 3 == 0) A(i, j) += u(eng);
      A(i, i) = 0.0;
      A.row(i) /= A.row(i).sum();
    }
    // Re-normalize exactly enough for validation.
    for (int i = 0; i < n; ++i) A.row(i) /= A.row(i).sum();
    const Network net = make_network(A);
    const Vector rho = stationary_weights(net);
    Vector p = Vector::Constant(n, 1.0 / n);
    for (int it = 0; it < 20000; ++it) {
      p = 0.5 * (net.A.transpose() * p) + 0.5 * p;
      p /= p.sum();
    }
    CHECK((p - rho).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("stationary weights reject disconnected networks") {
  CHECK_THROWS_AS(stationary_weights(make_two_stars(3)), NotStronglyConnected);
}

TEST_CASE("invalid constructions") {
  CHECK_THROWS_AS(make_complete(1), InvalidSize);
  CHECK_THROWS_AS(make_star(2), InvalidSize);
  Matrix bad(2, 2);
  bad << 0.5, 0.5, 1.0, 0.0;  // nonzero diagonal
  CHECK_THROWS_AS(make_network(bad), InvalidSize);
  Matrix bad2(2, 2);
  bad2 << 0.0, 0.9, 1.0, 0.0;  // row sum off
  CHECK_THROWS_AS(make_network(bad2), InvalidSize);
  CHECK_THROWS_AS(make_named_network("grid", 4), ConfigError);
}
