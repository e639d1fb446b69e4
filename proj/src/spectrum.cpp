#include "ycl/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "ycl/errors.hpp"
#include "ycl/fitting.hpp"

namespace ycl {

Spectrum diagonalize(const Hamiltonian& h, int max_dense_dim) {
  const std::int64_t n = h.grid.total_points();
  if (n > max_dense_dim)
    fail(ErrorCode::budget_exceeded,
         "diagonalize: matrix dimension " + std::to_string(n) + " exceeds dense budget " +
             std::to_string(max_dense_dim));
  const Eigen::MatrixXd mat = dense_hamiltonian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::ill_conditioned, "diagonalize: eigensolver did not converge");

  Spectrum s;
  s.grid = h.grid;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();

  // Deterministic gauge: largest-magnitude component positive.
  for (int j = 0; j < s.size(); ++j) {
    int arg = 0;
    s.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (s.eigenvectors(arg, j) < 0) s.eigenvectors.col(j) = -s.eigenvectors.col(j);
  }

  // Post-conditions on the decomposition quality.
  const double scale = 1.0 + s.eigenvalues.cwiseAbs().maxCoeff();
  const double residual =
      (mat * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * scale)
    fail(ErrorCode::ill_conditioned, "diagonalize: eigenpair residual too large");
  const double ortho = (s.eigenvectors.transpose() * s.eigenvectors -
                        Eigen::MatrixXd::Identity(s.size(), s.size()))
                           .cwiseAbs()
                           .maxCoeff();
  if (ortho > 1e-10)
    fail(ErrorCode::ill_conditioned, "diagonalize: eigenvectors not orthonormal");
  return s;
}

void set_fermi_by_count(Spectrum& s, int n_occ, double degeneracy_tol) {
  if (n_occ < 0 || n_occ > s.size())
    fail(ErrorCode::config_invalid, "set_fermi_by_count: occupation out of range");
  if (n_occ == 0 || n_occ == s.size())
    fail(ErrorCode::config_invalid, "set_fermi_by_count: empty or full filling has no gap");
  const double below = s.eigenvalues(n_occ - 1);
  const double above = s.eigenvalues(n_occ);
  if (above - below < degeneracy_tol)
    fail(ErrorCode::degenerate_fermi_level,
         "set_fermi_by_count: eigenvalue tie at the Fermi level");
  s.n_occupied = n_occ;
  s.fermi_level = 0.5 * (below + above);
  s.gap = 0.5 * (above - below);
}

void set_fermi_by_level(Spectrum& s, double fermi_level) {
  s.fermi_level = fermi_level;
  int count = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.size(); ++i) {
    if (s.eigenvalues(i) <= fermi_level) count = i + 1;
    gap = std::min(gap, std::abs(s.eigenvalues(i) - fermi_level));
  }
  s.n_occupied = count;
  s.gap = gap;
}

ScalarField density_from_fermi(const Spectrum& s, double gap_min) {
  if (s.gap < gap_min)
    fail(ErrorCode::metallic_configuration,
         "density_from_fermi: spectral gap " + std::to_string(s.gap) +
             " below threshold (metallic configuration)");
  Eigen::ArrayXd rho = Eigen::ArrayXd::Zero(s.grid.total_points());
  for (int i = 0; i < s.n_occupied; ++i) rho += s.eigenvectors.col(i).array().square();
  rho /= s.grid.point_weight();
  return ScalarField(s.grid, std::move(rho));
}

Eigen::MatrixXd fermi_projector(const Spectrum& s) {
  const auto occ = s.eigenvectors.leftCols(s.n_occupied);
  return occ * occ.transpose();
}

double trace_of_function(const Spectrum& s, const TestFunction& phi) {
  double sum = 0;
  for (int i = 0; i < s.size(); ++i) sum += phi(s.eigenvalues(i));
  return sum;
}

double local_trace_of_function(const Spectrum& s, const TestFunction& phi, int cell_index) {
  const auto pts = s.grid.points_in_cell(cell_index);
  double sum = 0;
  for (int i = 0; i < s.size(); ++i) {
    double mass = 0;
    for (auto p : pts) mass += s.eigenvectors(p, i) * s.eigenvectors(p, i);
    sum += phi(s.eigenvalues(i)) * mass;
  }
  return sum;
}

double local_projector_distance(const Spectrum& s1, const Spectrum& s2,
                                const std::vector<int>& cells) {
  if (!(s1.grid == s2.grid))
    fail(ErrorCode::grid_mismatch, "local_projector_distance: spectra on different grids");
  std::vector<std::int64_t> pts;
  for (int c : cells) {
    auto cp = s1.grid.points_in_cell(c);
    pts.insert(pts.end(), cp.begin(), cp.end());
  }
  const Eigen::MatrixXd diff = fermi_projector(s1) - fermi_projector(s2);
  Eigen::MatrixXd block(pts.size(), pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b) block(a, b) = diff(pts[a], pts[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

ResolventDecayProbe resolvent_kernel_decay(const Spectrum& s, std::complex<double> z,
                                           int source_cell, const std::vector<int>& radii) {
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.size(); ++i)
    dist = std::min(dist, std::abs(z - std::complex<double>(s.eigenvalues(i), 0)));
  if (dist < 1e-8)
    fail(ErrorCode::ill_conditioned, "resolvent probe: z within 1e-8 of an eigenvalue");

  // Source: canonical basis vector at the center point of the source cell.
  const auto pts = s.grid.points_in_cell(source_cell);
  const std::int64_t src = pts[pts.size() / 2];
  // u = sum_i u_i <u_i, e_src> / (z - lambda_i), via the eigendecomposition.
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(s.grid.total_points());
  for (int i = 0; i < s.size(); ++i) {
    const std::complex<double> coeff = s.eigenvectors(src, i) / (z - s.eigenvalues(i));
    u += coeff * s.eigenvectors.col(i).cast<std::complex<double>>();
  }

  ResolventDecayProbe probe;
  probe.radii = radii;
  probe.c1 = 1.0 / dist;
  probe.c2 = dist / (1.0 + std::abs(z));
  for (int r : radii) {
    double norm2 = 0;
    for (int c = 0; c < s.grid.total_cells(); ++c) {
      if (std::lround(s.grid.cell_distance(source_cell, c)) != r) continue;
      for (auto p : s.grid.points_in_cell(c)) norm2 += std::norm(u(p));
    }
    probe.shell_norms.push_back(std::sqrt(norm2));
  }

  // Exponential fit log(norm) = a - b * r, first shell excluded when enough
  // shells are available (near-field contamination).
  std::vector<double> xs, ys;
  const std::size_t start = (radii.size() >= 4) ? 1 : 0;
  for (std::size_t i = start; i < radii.size(); ++i) {
    if (probe.shell_norms[i] > 0) {
      xs.push_back(radii[i]);
      ys.push_back(std::log(probe.shell_norms[i]));
    }
  }
  if (xs.size() >= 2) {
    const LineFit fit = fit_line(xs, ys);
    probe.fitted_rate = -fit.slope;
    probe.r_squared = fit.r_squared;
  }
  return probe;
}

}  // namespace ycl
