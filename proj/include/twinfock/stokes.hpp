#pragma once

#include <optional>
#include <string>
#include <utility>

#include "twinfock/operators.hpp"

namespace twinfock {

enum class Side { alice, bob };

/// Schwinger angular-momentum triple built from a pair of modes, plus the
/// total particle number of the pair.
///
///   s_z = (n_plus - n_minus)/2
///   s_x = (a_plus^dag a_minus + a_minus^dag a_plus)/2
///   s_y = sy_sign * i (a_minus^dag a_plus - a_plus^dag a_minus)/2
///
/// sy_sign = +1 on both sides is the convention under which the witness
/// left side vanishes on the twin squeezed pair; see the calibration test.
struct StokesSet {
  Side side;
  int plus_mode;
  int minus_mode;
  int sy_sign;
  ModeOperator sx;
  ModeOperator sy;
  ModeOperator sz;
  ModeOperator total_number;
};

inline StokesSet build_stokes(const FockSpace& space, int plus_mode, int minus_mode, Side side,
                              int sy_sign = +1) {
  if (plus_mode == minus_mode) throw std::invalid_argument("build_stokes: coincident modes");
  if (sy_sign != 1 && sy_sign != -1) throw std::invalid_argument("build_stokes: sy_sign must be +-1");
  ModeOperator ap = mode_operator(space, plus_mode, OperatorKind::annihilate);
  ModeOperator am = mode_operator(space, minus_mode, OperatorKind::annihilate);
  ModeOperator apd = mode_operator(space, plus_mode, OperatorKind::create);
  ModeOperator amd = mode_operator(space, minus_mode, OperatorKind::create);
  ModeOperator np = mode_operator(space, plus_mode, OperatorKind::number);
  ModeOperator nm = mode_operator(space, minus_mode, OperatorKind::number);
  const char* tag = (side == Side::alice) ? "S" : "J";
  StokesSet s{side,
              plus_mode,
              minus_mode,
              sy_sign,
              (0.5 * (apd * am + amd * ap)).set_label(std::string(tag) + "_x"),
              (Complex(0.0, 0.5 * sy_sign) * (amd * ap - apd * am)).set_label(std::string(tag) + "_y"),
              (0.5 * (np - nm)).set_label(std::string(tag) + "_z"),
              (np + nm).set_label(std::string("n_") + (side == Side::alice ? "A" : "B"))};
  return s;
}

/// Everything the criterion evaluation produced. witness < 0 certifies
/// entanglement; 0 is the separable boundary, not a detection.
struct WitnessReport {
  double term_x = 0.0;
  double term_y = 0.0;
  double term_z = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double witness = 0.0;
  double n_alice = 0.0;
  double n_bob = 0.0;
  double tail_mass = 0.0;
  std::optional<std::pair<double, double>> gains;  // (g_a, g_b)
  int sy_sign_alice = +1;
  int sy_sign_bob = +1;
  int mode_count = 0;
  int cutoff = 0;

  bool detected() const { return witness < 0.0; }
};

namespace detail {

template <typename State>
double real_expectation(const State& state, const ModeOperator& op) {
  return expectation(state, op).real();
}

// <(J_x - S_x)^2> etc. For pure states use ||M psi||^2, matrix-free; for
// density matrices trace against the squared monomial expansion.
inline double squared_term(const StateVector& psi, const ModeOperator& difference) {
  return difference.apply(psi.amplitudes).squaredNorm();
}

inline double squared_term(const DensityMatrix& rho, const ModeOperator& difference) {
  return expectation(rho, difference * difference).real();
}

template <typename State>
WitnessReport evaluate_criterion_impl(const State& state, const StokesSet& alice,
                                      const StokesSet& bob, double g_a, double g_b,
                                      bool record_gains) {
  if (alice.side != Side::alice || bob.side != Side::bob)
    throw std::invalid_argument("evaluate_criterion: StokesSet sides are swapped");
  if (!(g_a > 0.0) || !(g_b > 0.0))
    throw std::invalid_argument("evaluate_criterion: gains must be positive");

  WitnessReport rep;
  rep.term_x = squared_term(state, g_b * bob.sx - g_a * alice.sx);
  rep.term_y = squared_term(state, g_b * bob.sy + g_a * alice.sy);
  rep.term_z = squared_term(state, g_b * bob.sz - g_a * alice.sz);
  rep.n_alice = real_expectation(state, alice.total_number);
  rep.n_bob = real_expectation(state, bob.total_number);
  rep.lhs = rep.term_x + rep.term_y + rep.term_z;
  rep.rhs = 0.5 * (g_a * rep.n_alice + g_b * rep.n_bob);
  rep.witness = rep.lhs - rep.rhs;
  rep.tail_mass = state.tail_mass();
  if (record_gains) rep.gains = std::make_pair(g_a, g_b);
  rep.sy_sign_alice = alice.sy_sign;
  rep.sy_sign_bob = bob.sy_sign;
  rep.mode_count = state.space.mode_count();
  rep.cutoff = state.space.cutoff(0);
  return rep;
}

}  // namespace detail

inline WitnessReport evaluate_criterion(const StateVector& psi, const StokesSet& alice,
                                        const StokesSet& bob) {
  require_same_space(psi.space, alice.sx.space(), "evaluate_criterion");
  require_normalized_for(psi, "evaluate_criterion");
  return detail::evaluate_criterion_impl(psi, alice, bob, 1.0, 1.0, false);
}

inline WitnessReport evaluate_criterion(const DensityMatrix& rho, const StokesSet& alice,
                                        const StokesSet& bob) {
  require_same_space(rho.space, alice.sx.space(), "evaluate_criterion");
  return detail::evaluate_criterion_impl(rho, alice, bob, 1.0, 1.0, false);
}

/// Criterion with measured count signals rescaled by per-side gain factors:
/// Stokes components scale linearly, squared terms quadratically, and the
/// bound becomes (g_a <n_A> + g_b <n_B>)/2. g_a = g_b = 1 reduces exactly to
/// evaluate_criterion.
template <typename State>
WitnessReport gain_adjusted_criterion(const State& state, const StokesSet& alice,
                                      const StokesSet& bob, double g_a, double g_b) {
  require_same_space(state.space, alice.sx.space(), "gain_adjusted_criterion");
  return detail::evaluate_criterion_impl(state, alice, bob, g_a, g_b, true);
}

}  // namespace twinfock
