#pragma once

#include <cmath>
#include <random>

#include "twinfock/errors.hpp"
#include "twinfock/operators.hpp"

namespace twinfock {

struct EvolveResult {
  StateVector state;
  double tail_mass = 0.0;
  double norm_drift = 0.0;  // |norm before renormalization - 1|
};

namespace detail {

// Hermiticity check that works at any dimension: exact materialization when
// cheap, otherwise <x|G y> == <G x|y> on a few random vectors.
inline void require_hermitian(const ModeOperator& g, double tol = 1e-10) {
  const Index d = g.space().dimension();
  if (d <= 512) {
    Matrix m = g.dense();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("evolve: generator is not Hermitian");
    return;
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 3; ++trial) {
    Vector x(d), y(d);
    for (Index i = 0; i < d; ++i) {
      x[i] = Complex(dist(rng), dist(rng));
      y[i] = Complex(dist(rng), dist(rng));
    }
    x.normalize();
    y.normalize();
    Complex lhs = x.dot(g.apply(y));
    Complex rhs = g.apply(x).dot(y);
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (std::abs(lhs - rhs) > 1e-8 * scale)
      throw std::invalid_argument("evolve: generator is not Hermitian");
  }
}

// Crude spectral-radius bound: max over basis states of the total outgoing
// amplitude (Gershgorin-style column sums via the monomial walk).
inline double norm_bound(const ModeOperator& g) {
  double bound = 0.0;
  for (Index col = 0; col < g.space().dimension(); ++col) {
    double colsum = 0.0;
    for (const OpTerm& term : g.terms()) {
      Index row = col;
      Complex c{1.0, 0.0};
      if (g.follow(term, row, c)) colsum += std::abs(c);
    }
    bound = std::max(bound, colsum);
  }
  return bound;
}

}  // namespace detail

/// exp(-i t G)|psi> by scaled Taylor summation of the operator action; each
/// substep is summed until the series remainder bound drops below 1e-16, so
/// the result is exact to rounding on the truncated space.
inline EvolveResult evolve(const StateVector& psi, const ModeOperator& generator, double t) {
  require_same_space(psi.space, generator.space(), "evolve");
  detail::require_hermitian(generator);

  EvolveResult result{psi, 0.0, 0.0};
  if (t == 0.0) {
    result.tail_mass = psi.tail_mass();
    return result;
  }

  const double radius = detail::norm_bound(generator) * std::abs(t);
  int steps = 1;
  while (radius / steps > 0.5 && steps < (1 << 24)) steps *= 2;
  const Complex phase = Complex(0.0, -t / steps);

  Vector v = psi.amplitudes;
  for (int s = 0; s < steps; ++s) {
    Vector sum = v;
    Vector power = v;
    double term_bound = 1.0;
    for (int k = 1; k <= 64; ++k) {
      power = (phase / static_cast<double>(k)) * generator.apply(power);
      sum += power;
      term_bound *= (radius / steps) / k;
      if (term_bound < 1e-17 && power.norm() < 1e-16) break;
    }
    v = std::move(sum);
  }

  result.norm_drift = std::abs(v.norm() - 1.0);
  StateVector out(psi.space, std::move(v));
  out.normalize();
  result.tail_mass = out.tail_mass();
  result.state = std::move(out);
  return result;
}

}  // namespace twinfock
