#pragma once

#include <random>

#include "twinfock/state.hpp"

namespace twinfock {

/// Knobs for the separable-state sampler. Defaults match the two-modes-per-
/// side witness setting used by the property tests.
struct SamplerConfig {
  int modes_per_side = 2;
  int cutoff = 4;
  int min_terms = 2;
  int max_terms = 8;
  int low_fock_total = 2;    // support n1+n2 <= this for the low-Fock draws
  double coherent_max = 1.2; // |alpha| bound for coherent-like draws
};

namespace detail {

inline Vector random_low_fock(const FockSpace& side, int max_total, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v = Vector::Zero(side.dimension());
  for (Index i = 0; i < side.dimension(); ++i) {
    int total = 0;
    for (int m = 0; m < side.mode_count(); ++m) total += side.occupation(i, m);
    if (total <= max_total) v[i] = Complex(g(rng), g(rng));
  }
  v.normalize();
  return v;
}

inline Vector random_coherent_like(const FockSpace& side, double amax, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector v = Vector::Ones(side.dimension());
  for (int m = 0; m < side.mode_count(); ++m) {
    double mag = amax * std::sqrt(u(rng));
    double phase = 2.0 * M_PI * u(rng);
    Complex alpha = std::polar(mag, phase);
    for (Index i = 0; i < side.dimension(); ++i) {
      int n = side.occupation(i, m);
      Complex w{1.0, 0.0};
      for (int k = 1; k <= n; ++k) w *= alpha / std::sqrt(static_cast<double>(k));
      v[i] *= w;
    }
  }
  v.normalize();
  return v;
}

}  // namespace detail

/// Random convex mixture of product states across the Alice/Bob cut. Total
/// function of the seed; every output is separable by construction, so the
/// witness may never go (numerically) negative on it.
///
/// Mode layout of the result: Bob's pair first (modes 0..k-1), then Alice's
/// (modes k..2k-1).
inline DensityMatrix separable_sampler(std::uint64_t seed, const SamplerConfig& cfg = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> term_count(cfg.min_terms, cfg.max_terms);
  std::uniform_int_distribution<int> style(0, 1);
  std::exponential_distribution<double> weight(1.0);

  FockSpace side = FockSpace::uniform(cfg.modes_per_side, cfg.cutoff);
  FockSpace full = FockSpace::uniform(2 * cfg.modes_per_side, cfg.cutoff);
  const int terms = term_count(rng);

  std::vector<double> weights(terms);
  double wsum = 0.0;
  for (double& w : weights) {
    w = weight(rng) + 1e-6;
    wsum += w;
  }

  Matrix rho = Matrix::Zero(full.dimension(), full.dimension());
  for (int t = 0; t < terms; ++t) {
    Vector bob = style(rng) ? detail::random_low_fock(side, cfg.low_fock_total, rng)
                            : detail::random_coherent_like(side, cfg.coherent_max, rng);
    Vector alice = style(rng) ? detail::random_low_fock(side, cfg.low_fock_total, rng)
                              : detail::random_coherent_like(side, cfg.coherent_max, rng);
    Vector prod(full.dimension());
    const Index da = alice.size();
    for (Index i = 0; i < bob.size(); ++i) prod.segment(i * da, da) = bob[i] * alice;
    rho.noalias() += (weights[t] / wsum) * (prod * prod.adjoint());
  }
  return DensityMatrix(full, std::move(rho));
}

}  // namespace twinfock
