#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "robustness/random.hpp"
#include "robustness/state.hpp"

namespace robustness {

enum class VerdictKind { exact, ppt_upper_bound };

inline const char* to_string(VerdictKind v) {
  return v == VerdictKind::exact ? "exact" : "PPT-upper-bound";
}

/// Overrides the sampler; receives the global sample index.
using StateHook = std::function<DensityMatrix(long)>;

struct VolumeConfig {
  PartyStructure structure{2, 2};
  long samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool require_exact = false;  // refuse dimensions where PPT is not sufficient
  bool record_flags = false;   // keep per-sample verdicts (CSV export)
  StateHook hook;              // test hook

  void validate() const {
    if (samples < 1) throw Error(ErrorKind::invalid_state, "samples must be >= 1");
    if (workers < 1) throw Error(ErrorKind::invalid_state, "workers must be >= 1");
  }
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

struct VolumeReport {
  double fraction_estimate = 0.0;
  WilsonInterval wilson_interval_95;
  double lower_bound = 0.0;
  long samples_used = 0;
  long separable_count = 0;
  VerdictKind verdict_kind = VerdictKind::exact;
  std::vector<std::uint8_t> flags;  // only with record_flags

  friend bool operator==(const VolumeReport& a, const VolumeReport& b) {
    return a.fraction_estimate == b.fraction_estimate &&
           a.wilson_interval_95.lo == b.wilson_interval_95.lo &&
           a.wilson_interval_95.hi == b.wilson_interval_95.hi && a.lower_bound == b.lower_bound &&
           a.samples_used == b.samples_used && a.separable_count == b.separable_count &&
           a.verdict_kind == b.verdict_kind && a.flags == b.flags;
  }
};

/// (1 / (1 + n/2))^{(n-1)(N-1)}.
inline double volume_lower_bound(int n, int parties) {
  return std::pow(1.0 / (1.0 + n / 2.0), double(n - 1) * double(parties - 1));
}

/// Mixing weight p = (1 + n/2)^{-(N-1)} for which p rho + (1-p) I/n is
/// separable for every rho.
inline double shrink_weight(int n, int parties) {
  return std::pow(1.0 / (1.0 + n / 2.0), parties - 1);
}

inline WilsonInterval wilson_interval(long successes, long trials, double z = 1.959963984540054) {
  const double nn = double(trials);
  const double p = double(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct SpectralSample {
  ComplexMatrix unitary;  // columns are the eigenvectors P_k
  RealVector weights;     // Lambda on the simplex
};

/// Draws ({P_k}, Lambda) from Haar x Lebesgue on the simplex.
inline SpectralSample sample_spectral(const PartyStructure& s, Rng& rng) {
  const int n = s.total();
  ComplexMatrix u = haar_unitary(n, rng);
  RealVector w = simplex_point(n, rng);
  return {std::move(u), std::move(w)};
}

/// rho = sum_k Lambda_k P_k.
inline DensityMatrix sample_state(const PartyStructure& s, Rng& rng) {
  const SpectralSample sp = sample_spectral(s, rng);
  const ComplexMatrix m = sp.unitary * sp.weights.asDiagonal() * sp.unitary.adjoint();
  return DensityMatrix::from_unnormalized(s, m);
}

/// Monte Carlo fraction of separable states. Worker w handles a fixed,
/// contiguous block of sample indices with its own RNG stream, so the result
/// depends only on (seed, workers, samples).
inline VolumeReport estimate_separable_fraction(const VolumeConfig& cfg) {
  cfg.validate();
  const PartyStructure& s = cfg.structure;
  const bool exact = ppt_small_dimension(s);
  if (!exact && cfg.require_exact) {
    throw Error(ErrorKind::unsupported_dimension,
                "exact separability verdicts need a bipartite system with n <= 6");
  }

  std::vector<std::uint8_t> flags(static_cast<std::size_t>(cfg.samples));
  auto work = [&](int worker) {
    const long begin = cfg.samples * worker / cfg.workers;
    const long end = cfg.samples * (worker + 1) / cfg.workers;
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(worker));
    for (long i = begin; i < end; ++i) {
      const DensityMatrix rho = cfg.hook ? cfg.hook(i) : sample_state(s, rng);
      const bool sep = exact ? is_separable_small(rho).separable : is_ppt(rho);
      flags[static_cast<std::size_t>(i)] = sep ? 1 : 0;
    }
  };
  if (cfg.workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  VolumeReport report;
  for (auto f : flags) report.separable_count += f;
  report.samples_used = cfg.samples;
  report.fraction_estimate = double(report.separable_count) / double(cfg.samples);
  report.wilson_interval_95 = wilson_interval(report.separable_count, cfg.samples);
  report.lower_bound = volume_lower_bound(s.total(), s.parties());
  report.verdict_kind = exact ? VerdictKind::exact : VerdictKind::ppt_upper_bound;
  if (cfg.record_flags) report.flags = std::move(flags);
  return report;
}

}  // namespace robustness
