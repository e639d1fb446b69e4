#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "ycl/defect_scf.hpp"
#include "ycl/test_function.hpp"

namespace ycl {

// Finite set K of lattice sites carrying copies of the defect shape chi
// (supported in one cell). nu_K = sum_{k in K} chi(. - k), assembled exactly.
struct DefectConfig {
  std::vector<int> sites;  // distinct flattened cell indices
  void validate(const TorusGrid& grid) const;
  std::uint64_t bitmask(const TorusGrid& grid) const;
};

// Bernoulli ensemble of defect configurations.
struct EnsembleSpec {
  double p = 0.1;
  std::uint64_t seed = 0;
  int samples = 0;
  int threads = 1;
};

enum class DosProvenance { exact_enumeration, monte_carlo, mu_term };

// A scalar pairing <n, phi> of a (difference of) density of states against a
// test function.
struct DosPairing {
  double value = 0;
  double stderr_ = 0;  // 0 for exact / enumerated values
  DosProvenance provenance = DosProvenance::exact_enumeration;
  double tail = 0;     // truncation diagnostic where applicable
};

// Memoizes T_K(phi)-style traces by site bitmask so enumeration, Monte Carlo
// and the expansion terms share SCF solves. Thread-safe.
class TraceCache {
 public:
  std::optional<double> lookup(std::uint64_t key) const;
  void store(std::uint64_t key, double value);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::uint64_t, double> values_;
};

// Tr phi(H_K) for the full nonlinear SCF Hamiltonian of nu_K; cached by K.
double configuration_trace(const std::vector<int>& sites, const ScalarField& chi,
                           const PeriodicGroundState& gs, const ScfOptions& opts,
                           const TestFunction& phi, TraceCache* cache);

// Spectral shift pairing T_K(phi) = Tr(phi(H_K)) - Tr(phi(H_0)).
double spectral_shift_pairing(const DefectConfig& config, const ScalarField& chi,
                              const TestFunction& phi, const PeriodicGroundState& gs,
                              const ScfOptions& opts, TraceCache* cache = nullptr);

// Expansion coefficients: <mu_1, phi> = T_{{0}}(phi); <mu_2, phi> =
// sum_{0 < |k| <= cutoff} (T_{{0,k}}(phi) - 2 T_{{0}}(phi)) / 2, using exact
// torus translation invariance. The tail field reports the contribution of
// the outermost shell.
DosPairing mu_pairing(int j, const TestFunction& phi, double cutoff, const ScalarField& chi,
                      const PeriodicGroundState& gs, const ScfOptions& opts,
                      TraceCache* cache = nullptr);

// Exact expectation over all 2^N site subsets (N = L^d within the budget):
// <n_p, phi> = sum_K p^{|K|} (1-p)^{N-|K|} Tr(phi(H_K)) / L^d. With
// localized_cell set, the per-volume trace is replaced by the localized
// trace Tr(1_Gamma phi(H_K) 1_Gamma) at that cell.
DosPairing dos_exact_enumeration(double p, const TestFunction& phi, const ScalarField& chi,
                                 const PeriodicGroundState& gs, const ScfOptions& opts,
                                 TraceCache* cache = nullptr, int site_budget = 10,
                                 std::optional<int> localized_cell = std::nullopt);

// Monte Carlo estimate of the same pairing over seeded Bernoulli draws.
// Deterministic given (seed, samples): per-site draws are counter-based and
// the reduction runs in fixed sample order, independent of thread count.
DosPairing dos_monte_carlo(const EnsembleSpec& ensemble, const TestFunction& phi,
                           const ScalarField& chi, const PeriodicGroundState& gs,
                           const ScfOptions& opts, TraceCache* cache = nullptr,
                           std::optional<int> localized_cell = std::nullopt);

// Residuals r_J(p) = |<n_p,phi> - <n_0,phi> - sum_{j<=J} <mu_j,phi> p^j| from
// exact enumeration, and their log-log slopes across consecutive p pairs.
struct ExpansionSlopeReport {
  std::vector<double> p_values;
  std::vector<double> pairings;       // <n_p, phi>
  double n0 = 0;                      // <n_0, phi>
  double mu1 = 0;
  double mu2 = 0;
  double mu2_tail = 0;
  std::vector<std::vector<double>> residuals;  // [J][i]
  std::vector<std::vector<double>> slopes;     // [J][i] between p_i, p_{i+1}
};

ExpansionSlopeReport expansion_residual_slopes(const std::vector<double>& p_values, int j_max,
                                               const TestFunction& phi, double cutoff,
                                               const ScalarField& chi,
                                               const PeriodicGroundState& gs,
                                               const ScfOptions& opts,
                                               TraceCache* cache = nullptr);

}  // namespace ycl
