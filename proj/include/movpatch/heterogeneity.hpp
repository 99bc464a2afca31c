#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace movpatch {

// kappa-periodic micro-scale coefficients: diffusivities eps_k and
// advection weights gam_k. Immutable once constructed.
struct HeterogeneityProfile {
  int kappa = 1;
  std::vector<double> eps;
  std::vector<double> gam;
  double eps_harmonic_mean = 1.0;
};

inline double harmonic_mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("harmonic_mean: empty");
  double s = 0.0;
  for (double x : v) {
    if (!(x > 0.0)) throw std::invalid_argument("harmonic_mean: nonpositive entry");
    s += 1.0 / x;
  }
  return static_cast<double>(v.size()) / s;
}

inline double arithmetic_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Log-normal draws for eps and gam; deterministic for a fixed seed.
// The result is NOT normalised.
inline HeterogeneityProfile sample_profile(int kappa, double sigma_eps,
                                           double sigma_gam, std::uint64_t seed) {
  if (kappa < 1) throw std::invalid_argument("sample_profile: kappa must be >= 1");
  if (sigma_eps < 0.0 || sigma_gam < 0.0)
    throw std::invalid_argument("sample_profile: negative sigma");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  HeterogeneityProfile p;
  p.kappa = kappa;
  p.eps.resize(kappa);
  p.gam.resize(kappa);
  // Always draw, even for sigma = 0, so the stream layout is fixed.
  for (int i = 0; i < kappa; ++i) {
    const double z = unit(rng);
    p.eps[i] = sigma_eps > 0.0 ? std::exp(sigma_eps * z) : 1.0;
  }
  for (int i = 0; i < kappa; ++i) {
    const double z = unit(rng);
    p.gam[i] = sigma_gam > 0.0 ? std::exp(sigma_gam * z) : 1.0;
  }
  p.eps_harmonic_mean = harmonic_mean(p.eps);
  return p;
}

// Rescale eps by one constant so its harmonic mean equals eps_target.
inline HeterogeneityProfile normalize_eps(HeterogeneityProfile p, double eps_target) {
  if (!(eps_target > 0.0)) throw std::invalid_argument("normalize: eps_target must be > 0");
  const double scale = eps_target / harmonic_mean(p.eps);
  for (double& e : p.eps) e *= scale;
  p.eps_harmonic_mean = eps_target;
  return p;
}

// Rescale eps to the target harmonic mean and gam to arithmetic mean 1.
inline HeterogeneityProfile normalize(HeterogeneityProfile p, double eps_target) {
  p = normalize_eps(std::move(p), eps_target);
  const double gmean = arithmetic_mean(p.gam);
  if (!(std::abs(gmean) > 0.0)) throw std::invalid_argument("normalize: gam mean is zero");
  for (double& g : p.gam) g /= gmean;
  return p;
}

// Phase convention: the left edge of every patch (micro index -n) carries
// phase 0, so patches with n mod kappa = 0 span whole periods and the
// coefficient cycle is unbroken across merges.
inline int coeff_phase(const HeterogeneityProfile& p, long micro_index, long half_count) {
  if (half_count % p.kappa != 0)
    throw std::invalid_argument("coeff_at: patch half-count not a multiple of kappa");
  if (micro_index < -half_count || micro_index > half_count)
    throw std::invalid_argument("coeff_at: micro index out of patch");
  const long m = (micro_index + half_count) % p.kappa;
  return static_cast<int>(m < 0 ? m + p.kappa : m);
}

struct CoeffPair {
  double eps;
  double gam;
};

inline CoeffPair coeff_at(const HeterogeneityProfile& p, long micro_index, long half_count) {
  const int ph = coeff_phase(p, micro_index, half_count);
  return {p.eps[ph], p.gam[ph]};
}

}  // namespace movpatch
