#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "twinfock/errors.hpp"
#include "twinfock/evolve.hpp"
#include "twinfock/state.hpp"

namespace twinfock {

/// Squeezing strength. lam = tanh(r) is the geometric amplitude decay of the
/// pair state; only real non-negative r is supported, every downstream
/// formula depends on lam alone.
struct SqueezingParams {
  double lam = 0.0;
  double r = 0.0;

  static SqueezingParams from_lambda(double lam) {
    if (lam < 0.0 || lam >= 1.0)
      throw std::invalid_argument("SqueezingParams: lambda must lie in [0,1)");
    return {lam, std::atanh(lam)};
  }
  static SqueezingParams from_r(double r) {
    if (r < 0.0) throw std::invalid_argument("SqueezingParams: r must be non-negative");
    return {std::tanh(r), r};
  }
};

/// Smallest cutoff whose geometric tail lam^{2(n_max+1)} drops below tol.
inline int auto_cutoff(double lam, double tol = 1e-12) {
  if (lam < 0.0 || lam >= 1.0) throw std::invalid_argument("auto_cutoff: lambda outside [0,1)");
  if (lam == 0.0) return 0;
  int n = 0;
  while (std::pow(lam, 2 * (n + 1)) > tol) ++n;
  return n;
}

/// Two-mode squeezed state sum_n lam^n |n,n>, renormalized on the truncated
/// space. Throws if the cutoff cannot hold the tail below `tail_tol`.
inline StateVector make_tmss(const SqueezingParams& p, int cutoff, double tail_tol = 1e-12) {
  if (p.lam < 0.0 || p.lam >= 1.0) throw std::invalid_argument("make_tmss: lambda outside [0,1)");
  if (std::pow(p.lam, 2 * (cutoff + 1)) > tail_tol)
    throw truncation_error("make_tmss: cutoff too small for requested tolerance",
                           std::pow(p.lam, 2 * (cutoff + 1)));
  FockSpace space = FockSpace::uniform(2, cutoff);
  StateVector psi = StateVector::zero(space);
  double amp = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    psi.amplitudes[space.index_of({n, n})] = amp;
    amp *= p.lam;
  }
  psi.normalize();
  return psi;
}

/// The 4-mode pair of identical squeezed states. Mode order (b+, a+, b-, a-):
/// Bob's mode first in each polarization sector.
inline StateVector make_psi1(const SqueezingParams& p, int cutoff, double tail_tol = 1e-12) {
  StateVector sector = make_tmss(p, cutoff, tail_tol);
  return tensor(sector, sector);
}

/// Four independent squeezed sectors, kept factorized; materializing the
/// joint 8-mode vector is never needed and rarely feasible.
struct SectoredState {
  std::vector<std::pair<std::string, StateVector>> sectors;
};

inline SectoredState make_psi2(const SqueezingParams& p, int cutoff, double tail_tol = 1e-12) {
  StateVector sector = make_tmss(p, cutoff, tail_tol);
  SectoredState s;
  for (const char* label : {"+I", "-I", "+II", "-II"}) s.sectors.emplace_back(label, sector);
  return s;
}

/// Generate the squeezed pair dynamically: evolve vacuum under the pair
/// creation generator i(a^dag b^dag - a b) for time r.
inline StateVector make_tmss_by_evolution(double r, int cutoff, double tail_tol = 1e-9) {
  if (r < 0.0) throw std::invalid_argument("make_tmss_by_evolution: r must be non-negative");
  FockSpace space = FockSpace::uniform(2, cutoff);
  ModeOperator adag = mode_operator(space, 0, OperatorKind::create);
  ModeOperator bdag = mode_operator(space, 1, OperatorKind::create);
  ModeOperator a = mode_operator(space, 0, OperatorKind::annihilate);
  ModeOperator b = mode_operator(space, 1, OperatorKind::annihilate);
  ModeOperator generator = Complex(0.0, 1.0) * (adag * bdag - a * b);
  EvolveResult res = evolve(StateVector::vacuum(space), generator, r);
  if (res.tail_mass > tail_tol)
    throw truncation_error("make_tmss_by_evolution: cutoff too small", res.tail_mass);
  return res.state;
}

}  // namespace twinfock
