#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "testing.hpp"
#include "ycl/errors.hpp"
#include "ycl/spectrum.hpp"

using namespace ycl;
using namespace ycl::testing;

TEST_CASE("free Laplacian modes on an 8-point torus") {
  const TorusGrid grid{1, 8, 1};
  const Spectrum s = diagonalize(Hamiltonian::free_particle(grid));
  auto mode = [&](int j) {
    const double k = 2.0 * std::numbers::pi * j / grid.cells;
    return 0.5 * k * k;
  };
  const std::vector<double> expected = {0.0,     mode(1), mode(1), mode(2),
                                        mode(2), mode(3), mode(3), mode(4)};
  REQUIRE(s.size() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(s.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("constant potential shifts the spectrum exactly") {
  const TorusGrid grid{1, 4, 4};
  const Spectrum free = diagonalize(Hamiltonian::free_particle(grid));
  const Spectrum shifted =
      diagonalize(Hamiltonian::with_potential(ScalarField::constant(grid, 2.5)));
  for (int i = 0; i < free.size(); ++i)
    CHECK(shifted.eigenvalues(i) ==
          doctest::Approx(free.eigenvalues(i) + 2.5).epsilon(1e-12));
}

TEST_CASE("8x8 eigenvalues match characteristic-polynomial bisection") {
  const TorusGrid grid{1, 4, 2};
  const ScalarField v = smooth_random_field(grid, 7, 2.0);
  const Hamiltonian h{grid, v};
  const Spectrum s = diagonalize(h);
  const auto roots = charpoly_eigenvalues(dense_hamiltonian(h));
  REQUIRE(roots.size() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(s.eigenvalues(i) == doctest::Approx(roots[i]).epsilon(1e-9));
}

TEST_CASE("dense-solver budget is enforced") {
  const TorusGrid grid{1, 8, 8};
  CHECK_THROWS_AS(diagonalize(Hamiltonian::free_particle(grid), 32), Error);
}

TEST_CASE("densities from the Fermi projector") {
  const TorusGrid grid{1, 4, 4};
  Spectrum s = diagonalize(Hamiltonian::free_particle(grid));

  // Empty filling.
  set_fermi_by_level(s, -1.0);
  CHECK(s.n_occupied == 0);
  CHECK(l2_norm(density_from_fermi(s, 0.0)) == 0.0);

  // Constant mode only: the density is uniform 1/L^d with unit integral.
  set_fermi_by_count(s, 1);
  const ScalarField rho = density_from_fermi(s, 0.0);
  CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.values().maxCoeff() == doctest::Approx(1.0 / 4).epsilon(1e-12));
  CHECK(rho.values().minCoeff() == doctest::Approx(1.0 / 4).epsilon(1e-12));

  // Gap gate.
  CHECK_THROWS_AS(density_from_fermi(s, 1e9), Error);
}

TEST_CASE("two-site toy: density matches the explicit 2x2 projector") {
  const TorusGrid grid{1, 2, 1};
  ScalarField v = ScalarField::zero(grid);
  v.values()(1) = 1.0;
  Spectrum s = diagonalize(Hamiltonian::with_potential(v));
  set_fermi_by_count(s, 1);

  // H = [[t, -t], [-t, t+1]] with t = pi^2/4.
  const double t = std::numbers::pi * std::numbers::pi / 4.0;
  const double lam = (2 * t + 1 - std::sqrt(1 + 4 * t * t)) / 2.0;
  Eigen::Vector2d u(-t, lam - t);
  u.normalize();
  const ScalarField rho = density_from_fermi(s, 0.0);
  CHECK(rho(0) == doctest::Approx(u(0) * u(0)).epsilon(1e-12));
  CHECK(rho(1) == doctest::Approx(u(1) * u(1)).epsilon(1e-12));
}

TEST_CASE("traces of functions of the Hamiltonian") {
  const TorusGrid grid{1, 8, 4};
  const ScalarField v = smooth_random_field(grid, 9, 1.0);
  const Spectrum s = diagonalize(Hamiltonian::with_potential(v));

  // Far-away gaussian: numerically zero trace.
  CHECK(std::abs(trace_of_function(s, TestFunction::gaussian(1e9, 1.0))) < 1e-14);

  // Very wide gaussian: completeness, trace = dimension.
  const double dim = trace_of_function(s, TestFunction::gaussian(0.0, 1e8));
  CHECK(dim == doctest::Approx(static_cast<double>(s.size())).epsilon(1e-6));

  // Gaussian trace equals the direct mode sum on the free spectrum.
  const Spectrum free = diagonalize(Hamiltonian::free_particle(grid));
  const TestFunction phi = TestFunction::gaussian(0.3, 0.7);
  double direct = 0;
  for (int i = 0; i < grid.axis_points(); ++i) {
    const double k = free.grid.frequency(i);
    direct += phi(0.5 * k * k);
  }
  CHECK(trace_of_function(free, phi) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("local traces partition the global trace") {
  const TorusGrid grid{1, 8, 4};
  const TestFunction phi = TestFunction::gaussian(1.0, 2.0);

  // Per-cell periodic potential: every cell sees the same local trace.
  ScalarField v = ScalarField::zero(grid);
  for (std::int64_t i = 0; i < grid.total_points(); ++i) {
    const double x = grid.point_coords(i)[0];
    v.values()(i) = std::cos(2 * std::numbers::pi * (x - std::floor(x)));
  }
  const Spectrum s = diagonalize(Hamiltonian::with_potential(v));
  const double first = local_trace_of_function(s, phi, 0);
  double total = 0;
  for (int c = 0; c < grid.total_cells(); ++c) {
    const double lt = local_trace_of_function(s, phi, c);
    CHECK(lt == doctest::Approx(first).epsilon(1e-10));
    total += lt;
  }
  const double global = trace_of_function(s, phi);
  CHECK(std::abs(total - global) <= 1e-10 * std::abs(global));

  // Partition also holds for a non-periodic potential.
  const Spectrum s2 =
      diagonalize(Hamiltonian::with_potential(smooth_random_field(grid, 17, 1.0)));
  double total2 = 0;
  for (int c = 0; c < grid.total_cells(); ++c) total2 += local_trace_of_function(s2, phi, c);
  CHECK(std::abs(total2 - trace_of_function(s2, phi)) <=
        1e-10 * std::abs(trace_of_function(s2, phi)));
}

TEST_CASE("local projector distances") {
  const TorusGrid grid{1, 4, 4};
  const ScalarField v = smooth_random_field(grid, 23, 1.0);
  Spectrum s1 = diagonalize(Hamiltonian::with_potential(v));
  set_fermi_by_count(s1, 4);
  const std::vector<int> region = {0, 1};

  CHECK(local_projector_distance(s1, s1, region) == doctest::Approx(0.0).epsilon(1e-14));

  // Against the empty filling: the distance is the local occupied mass.
  Spectrum s0 = s1;
  set_fermi_by_level(s0, s1.eigenvalues(0) - 1.0);
  double mass = 0;
  const Eigen::MatrixXd p = fermi_projector(s1);
  for (int c : region)
    for (auto pt : grid.points_in_cell(c)) mass += p(pt, pt);
  CHECK(local_projector_distance(s1, s0, region) == doctest::Approx(mass).epsilon(1e-10));
}

TEST_CASE("2x2 toy projector distance matches hand singular values") {
  const TorusGrid grid{1, 2, 1};
  ScalarField v = ScalarField::zero(grid);
  v.values()(1) = 0.8;
  Spectrum sa = diagonalize(Hamiltonian::with_potential(v));
  set_fermi_by_count(sa, 1);
  Spectrum sb = diagonalize(Hamiltonian::free_particle(grid));
  set_fermi_by_count(sb, 1);

  // Trace norm of the difference of two rank-1 projectors u u^T - w w^T:
  // both nonzero singular values equal sqrt(1 - (u.w)^2).
  const Eigen::VectorXd u = sa.eigenvectors.col(0);
  const Eigen::VectorXd w = sb.eigenvectors.col(0);
  const double overlap = u.dot(w);
  const double expected = 2.0 * std::sqrt(1.0 - overlap * overlap);
  CHECK(local_projector_distance(sa, sb, {0, 1}) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("projector idempotency and gauge invariance") {
  const TorusGrid grid{1, 8, 4};
  const ScalarField v = smooth_random_field(grid, 31, 1.5);
  Spectrum s = diagonalize(Hamiltonian::with_potential(v));
  set_fermi_by_count(s, 8);

  const Eigen::MatrixXd p = fermi_projector(s);
  CHECK((p * p - p).norm() <= 1e-8);

  // Flipping eigenvector signs must not change densities, traces, or
  // projector distances.
  Spectrum flipped = s;
  for (int j = 0; j < flipped.size(); j += 2) flipped.eigenvectors.col(j) *= -1.0;
  const TestFunction phi = TestFunction::gaussian(0.5, 1.0);
  CHECK((density_from_fermi(flipped, 0.0).values() ==
         density_from_fermi(s, 0.0).values())
            .all());
  CHECK(trace_of_function(flipped, phi) == trace_of_function(s, phi));
  CHECK(local_trace_of_function(flipped, phi, 2) == local_trace_of_function(s, phi, 2));
  CHECK(local_projector_distance(flipped, s, {0, 1, 2}) <= 1e-12);
}

TEST_CASE("resolvent kernel decay: free case rate and monotonicity") {
  const TorusGrid grid{1, 32, 8};
  const Spectrum s = diagonalize(Hamiltonian::free_particle(grid));
  const std::vector<int> radii = {2, 3, 4, 5, 6, 7, 8};

  const double delta = 0.5;
  const auto probe = resolvent_kernel_decay(s, {-delta, 0.0}, 16, radii);
  CHECK(probe.r_squared >= 0.99);
  CHECK(probe.fitted_rate == doctest::Approx(std::sqrt(2 * delta)).epsilon(0.05));
  CHECK(probe.c1 == doctest::Approx(1.0 / delta).epsilon(1e-12));

  // Doubling the distance to the spectrum increases the fitted rate.
  const auto probe2 = resolvent_kernel_decay(s, {-2 * delta, 0.0}, 16, radii);
  CHECK(probe2.fitted_rate > probe.fitted_rate);

  // Shell norms non-increasing beyond 2 cells on a random gapped instance.
  const ScalarField v = smooth_random_field(grid, 37, 1.0);
  Spectrum sr = diagonalize(Hamiltonian::with_potential(v));
  const auto probe3 =
      resolvent_kernel_decay(sr, {sr.eigenvalues(0) - 0.5, 0.0}, 16, radii);
  for (std::size_t i = 0; i + 1 < probe3.shell_norms.size(); ++i)
    CHECK(probe3.shell_norms[i + 1] <= probe3.shell_norms[i] * (1 + 1e-9));

  // z too close to an eigenvalue is rejected.
  CHECK_THROWS_AS(
      resolvent_kernel_decay(s, {s.eigenvalues(3) + 1e-10, 0.0}, 16, radii), Error);
}

TEST_CASE("test functions: derivatives are exact and seminorms sane") {
  const TestFunction g = TestFunction::gaussian(0.3, 0.8);
  const TestFunction dg = g.derivative();
  for (double x : {-1.0, 0.0, 0.4, 2.0}) {
    const double h = 1e-6;
    const double fd = (g(x + h) - g(x - h)) / (2 * h);
    CHECK(dg(x) == doctest::Approx(fd).epsilon(1e-8));
  }
  CHECK(TestFunction::gaussian_derivative(0.3, 0.8)(1.0) == doctest::Approx(dg(1.0)));

  const TestFunction p = TestFunction::polynomial_damped(0.0, 1.0, 3);
  CHECK(p(2.0) == doctest::Approx(8.0 * std::exp(-2.0)).epsilon(1e-12));

  // N_{0,0} of a unit gaussian is 1; N_{1,0} of exp(-x^2/2) peaks at x = 1.
  CHECK(TestFunction::gaussian(0.0, 1.0).seminorm(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(TestFunction::gaussian(0.0, 1.0).seminorm(1, 0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
}
