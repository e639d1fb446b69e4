#include "ycl/dos.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <set>

#include "ycl/errors.hpp"
#include "ycl/rng.hpp"

namespace ycl {

void DefectConfig::validate(const TorusGrid& grid) const {
  std::set<int> seen;
  for (int s : sites) {
    if (s < 0 || s >= grid.total_cells())
      fail(ErrorCode::config_invalid, "defect config: site outside torus");
    if (!seen.insert(s).second)
      fail(ErrorCode::config_invalid, "defect config: duplicate site");
  }
}

std::uint64_t DefectConfig::bitmask(const TorusGrid& grid) const {
  if (grid.total_cells() > 64)
    fail(ErrorCode::budget_exceeded, "defect config: bitmask limited to 64 sites");
  std::uint64_t mask = 0;
  for (int s : sites) mask |= (1ULL << s);
  return mask;
}

std::optional<double> TraceCache::lookup(std::uint64_t key) const {
  std::scoped_lock lock(mutex_);
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void TraceCache::store(std::uint64_t key, double value) {
  std::scoped_lock lock(mutex_);
  values_.emplace(key, value);
}

std::size_t TraceCache::size() const {
  std::scoped_lock lock(mutex_);
  return values_.size();
}

namespace {

double trace_for_sites(const std::vector<int>& sites, const ScalarField& chi,
                       const PeriodicGroundState& gs, const ScfOptions& opts,
                       const TestFunction& phi, std::optional<int> localized_cell) {
  const Spectrum* spectrum = &gs.spectrum;
  DefectSolution sol;
  if (!sites.empty()) {
    sol = solve_defect_scf(assemble_defects(chi, sites), gs, opts);
    spectrum = &sol.spectrum;
  }
  if (localized_cell)
    return local_trace_of_function(*spectrum, phi, *localized_cell);
  return trace_of_function(*spectrum, phi);
}

}  // namespace

double configuration_trace(const std::vector<int>& sites, const ScalarField& chi,
                           const PeriodicGroundState& gs, const ScfOptions& opts,
                           const TestFunction& phi, TraceCache* cache) {
  if (cache) {
    DefectConfig config{sites};
    const std::uint64_t key = config.bitmask(chi.grid());
    if (auto hit = cache->lookup(key)) return *hit;
    const double value = trace_for_sites(sites, chi, gs, opts, phi, std::nullopt);
    cache->store(key, value);
    return value;
  }
  return trace_for_sites(sites, chi, gs, opts, phi, std::nullopt);
}

double spectral_shift_pairing(const DefectConfig& config, const ScalarField& chi,
                              const TestFunction& phi, const PeriodicGroundState& gs,
                              const ScfOptions& opts, TraceCache* cache) {
  config.validate(chi.grid());
  if (config.sites.empty()) return 0.0;
  const double t_k = configuration_trace(config.sites, chi, gs, opts, phi, cache);
  const double t_0 = configuration_trace({}, chi, gs, opts, phi, cache);
  return t_k - t_0;
}

DosPairing mu_pairing(int j, const TestFunction& phi, double cutoff, const ScalarField& chi,
                      const PeriodicGroundState& gs, const ScfOptions& opts, TraceCache* cache) {
  const TorusGrid& grid = chi.grid();
  if (j != 1 && j != 2) fail(ErrorCode::config_invalid, "mu_pairing: j must be 1 or 2");
  if (cutoff > grid.cells / 2.0 + 1e-12)
    fail(ErrorCode::config_invalid, "mu_pairing: cutoff exceeds torus half-width");

  DosPairing out;
  out.provenance = DosProvenance::mu_term;
  const double t_single = spectral_shift_pairing({{0}}, chi, phi, gs, opts, cache);
  if (j == 1) {
    out.value = t_single;
    return out;
  }

  // Nonzero offsets within the cutoff, grouped by distance; translation
  // invariance reduces every pair {k, k'} to {0, k'-k}.
  double sum = 0;
  double last_shell = 0;
  double max_dist = 0;
  for (int c = 1; c < grid.total_cells(); ++c) {
    const double dist = grid.cell_distance(0, c);
    if (dist > cutoff + 1e-12) continue;
    const double t_pair = spectral_shift_pairing({{0, c}}, chi, phi, gs, opts, cache);
    const double term = 0.5 * (t_pair - 2.0 * t_single);
    sum += term;
    if (dist > max_dist + 1e-9) {
      max_dist = dist;
      last_shell = std::abs(term);
    } else if (std::abs(dist - max_dist) <= 1e-9) {
      last_shell += std::abs(term);
    }
  }
  out.value = sum;
  out.tail = last_shell;
  return out;
}

DosPairing dos_exact_enumeration(double p, const TestFunction& phi, const ScalarField& chi,
                                 const PeriodicGroundState& gs, const ScfOptions& opts,
                                 TraceCache* cache, int site_budget,
                                 std::optional<int> localized_cell) {
  const TorusGrid& grid = chi.grid();
  const int n_sites = grid.total_cells();
  if (n_sites > site_budget)
    fail(ErrorCode::budget_exceeded,
         "dos_exact_enumeration: " + std::to_string(n_sites) + " sites exceed budget " +
             std::to_string(site_budget));
  if (p < 0 || p > 1) fail(ErrorCode::config_invalid, "dos_exact_enumeration: p outside [0,1]");

  TraceCache local_cache;
  TraceCache* use_cache = cache ? cache : &local_cache;

  double value = 0;
  double weight_total = 0;
  const std::uint64_t n_configs = 1ULL << n_sites;
  for (std::uint64_t mask = 0; mask < n_configs; ++mask) {
    std::vector<int> sites;
    for (int s = 0; s < n_sites; ++s)
      if (mask & (1ULL << s)) sites.push_back(s);
    const double weight = std::pow(p, sites.size()) *
                          std::pow(1.0 - p, n_sites - sites.size());
    weight_total += weight;
    double trace;
    if (localized_cell) {
      // The localized variant is not cached (cache keys are per-volume).
      try {
        trace = trace_for_sites(sites, chi, gs, opts, phi, localized_cell);
      } catch (const Error& e) {
        fail(e.code(), "dos_exact_enumeration: SCF failed for K = mask " +
                           std::to_string(mask) + ": " + e.what());
      }
    } else {
      try {
        trace = configuration_trace(sites, chi, gs, opts, phi, use_cache);
      } catch (const Error& e) {
        fail(e.code(), "dos_exact_enumeration: SCF failed for K = mask " +
                           std::to_string(mask) + ": " + e.what());
      }
    }
    value += weight * trace;
  }
  if (std::abs(weight_total - 1.0) > 1e-12)
    fail(ErrorCode::ill_conditioned, "dos_exact_enumeration: binomial weights do not sum to 1");

  DosPairing out;
  out.provenance = DosProvenance::exact_enumeration;
  out.value = localized_cell ? value : value / grid.torus_volume();
  return out;
}

DosPairing dos_monte_carlo(const EnsembleSpec& ensemble, const TestFunction& phi,
                           const ScalarField& chi, const PeriodicGroundState& gs,
                           const ScfOptions& opts, TraceCache* cache,
                           std::optional<int> localized_cell) {
  if (ensemble.samples < 2) fail(ErrorCode::config_invalid, "dos_monte_carlo: samples must be >= 2");
  if (ensemble.p < 0 || ensemble.p > 1)
    fail(ErrorCode::config_invalid, "dos_monte_carlo: p outside [0,1]");
  const TorusGrid& grid = chi.grid();
  const int n_sites = grid.total_cells();

  TraceCache local_cache;
  TraceCache* use_cache = (cache && !localized_cell) ? cache : &local_cache;

  std::vector<double> results(ensemble.samples, 0.0);
  std::vector<char> failed(ensemble.samples, 0);

  auto run_sample = [&](int sample) {
    std::vector<int> sites;
    for (int s = 0; s < n_sites; ++s)
      if (counter_uniform01(ensemble.seed, sample, s) < ensemble.p) sites.push_back(s);
    try {
      if (localized_cell) {
        results[sample] = trace_for_sites(sites, chi, gs, opts, phi, localized_cell);
      } else {
        results[sample] = configuration_trace(sites, chi, gs, opts, phi, use_cache) /
                          grid.torus_volume();
      }
    } catch (const Error&) {
      failed[sample] = 1;
    }
  };

  const int threads = std::max(1, ensemble.threads);
  if (threads == 1) {
    for (int i = 0; i < ensemble.samples; ++i) run_sample(i);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      futures.push_back(std::async(std::launch::async, [&] {
        for (int i = next.fetch_add(1); i < ensemble.samples; i = next.fetch_add(1))
          run_sample(i);
      }));
    for (auto& f : futures) f.get();
  }

  int n_failed = 0;
  for (char f : failed) n_failed += f;
  if (n_failed * 100 > ensemble.samples)
    fail(ErrorCode::scf_not_converged,
         "dos_monte_carlo: " + std::to_string(n_failed) + " of " +
             std::to_string(ensemble.samples) + " samples failed (> 1%)");

  // Reduction in fixed sample order: independent of scheduling.
  double mean = 0;
  int n_ok = 0;
  for (int i = 0; i < ensemble.samples; ++i)
    if (!failed[i]) {
      mean += results[i];
      ++n_ok;
    }
  mean /= n_ok;
  double var = 0;
  for (int i = 0; i < ensemble.samples; ++i)
    if (!failed[i]) var += (results[i] - mean) * (results[i] - mean);
  var /= (n_ok - 1);

  DosPairing out;
  out.provenance = DosProvenance::monte_carlo;
  out.value = mean;
  out.stderr_ = std::sqrt(var / n_ok);
  return out;
}

ExpansionSlopeReport expansion_residual_slopes(const std::vector<double>& p_values, int j_max,
                                               const TestFunction& phi, double cutoff,
                                               const ScalarField& chi,
                                               const PeriodicGroundState& gs,
                                               const ScfOptions& opts, TraceCache* cache) {
  if (p_values.size() < 2)
    fail(ErrorCode::config_invalid, "expansion_residual_slopes: need >= 2 p values");
  if (j_max < 0 || j_max > 2)
    fail(ErrorCode::config_invalid, "expansion_residual_slopes: J must be in {0,1,2}");

  TraceCache local_cache;
  TraceCache* use_cache = cache ? cache : &local_cache;

  ExpansionSlopeReport report;
  report.p_values = p_values;
  report.n0 =
      configuration_trace({}, chi, gs, opts, phi, use_cache) / chi.grid().torus_volume();
  report.mu1 = mu_pairing(1, phi, chi.grid().cells / 2.0, chi, gs, opts, use_cache).value;
  const DosPairing mu2 =
      mu_pairing(2, phi, cutoff, chi, gs, opts, use_cache);
  report.mu2 = mu2.value;
  report.mu2_tail = mu2.tail;
  for (double p : p_values)
    report.pairings.push_back(
        dos_exact_enumeration(p, phi, chi, gs, opts, use_cache).value);

  for (int j = 0; j <= j_max; ++j) {
    std::vector<double> res;
    for (std::size_t i = 0; i < p_values.size(); ++i) {
      const double p = p_values[i];
      double model = report.n0;
      if (j >= 1) model += report.mu1 * p;
      if (j >= 2) model += report.mu2 * p * p;
      res.push_back(std::abs(report.pairings[i] - model));
    }
    std::vector<double> slopes;
    for (std::size_t i = 0; i + 1 < res.size(); ++i) {
      if (res[i] <= 0 || res[i + 1] <= 0) {
        slopes.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      slopes.push_back(std::log(res[i + 1] / res[i]) /
                       std::log(p_values[i + 1] / p_values[i]));
    }
    report.residuals.push_back(std::move(res));
    report.slopes.push_back(std::move(slopes));
  }
  return report;
}

}  // namespace ycl
