#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "twinfock/entropy.hpp"
#include "twinfock/errors.hpp"
#include "twinfock/state_factory.hpp"
#include "twinfock/stokes.hpp"

namespace twinfock {

/// Photon counts seen at the two beamsplitter output ports.
struct CountOutcome {
  int n_i = 0;
  int n_ii = 0;

  int total() const { return n_i + n_ii; }

  void validate() const {
    if (n_i < 0 || n_ii < 0) throw std::invalid_argument("CountOutcome: negative count");
  }
};

namespace detail {

/// Balanced-splitter block on the conserved total-photon sector T:
/// column n is the image of input |n, T-n>, row k the output |k, T-k>
/// amplitude, under a_in(1) -> (a_out(1)+a_out(2))/sqrt(2),
/// a_in(2) -> (a_out(1)-a_out(2))/sqrt(2).
inline Eigen::MatrixXd bs_block(int total) {
  const int dim = total + 1;
  Eigen::MatrixXd block(dim, dim);
  Eigen::VectorXd cur(dim), next(dim);
  for (int n = 0; n <= total; ++n) {
    const int m = total - n;
    cur.setZero();
    cur[0] = 1.0;
    int t = 0;
    auto step = [&](double sign) {
      next.setZero();
      for (int k = 0; k <= t; ++k) {
        if (cur[k] == 0.0) continue;
        next[k + 1] += cur[k] * std::sqrt((k + 1) / 2.0);
        next[k] += sign * cur[k] * std::sqrt((t - k + 1) / 2.0);
      }
      std::swap(cur, next);
      ++t;
    };
    for (int j = 0; j < n; ++j) step(+1.0);
    for (int j = 0; j < m; ++j) step(-1.0);
    double norm = 1.0;
    for (int j = 2; j <= n; ++j) norm *= j;
    for (int j = 2; j <= m; ++j) norm *= j;
    block.col(n) = cur / std::sqrt(norm);
  }
  return block;
}

}  // namespace detail

/// Balanced beamsplitter on modes (mode_a, mode_b). Exact on every conserved
/// total-photon block that fits under the cutoffs; input mass on blocks that
/// cannot be represented exactly must stay below `over_budget`.
inline StateVector beamsplitter_apply(const StateVector& psi, int mode_a, int mode_b,
                                      double over_budget = 1e-9) {
  const FockSpace& sp = psi.space;
  if (mode_a == mode_b) throw std::invalid_argument("beamsplitter_apply: coincident modes");
  const int ca = sp.cutoff(mode_a), cb = sp.cutoff(mode_b);
  const int safe_total = std::min(ca, cb);

  double risky = 0.0;
  for (Index i = 0; i < sp.dimension(); ++i) {
    if (psi.amplitudes[i] == Complex(0.0)) continue;
    if (sp.occupation(i, mode_a) + sp.occupation(i, mode_b) > safe_total)
      risky += std::norm(psi.amplitudes[i]);
  }
  if (risky > over_budget)
    throw truncation_error("beamsplitter_apply: support touches the cutoff", risky);

  std::vector<Eigen::MatrixXd> blocks(ca + cb + 1);
  Vector out = Vector::Zero(sp.dimension());
  for (Index i = 0; i < sp.dimension(); ++i) {
    const Complex amp = psi.amplitudes[i];
    if (amp == Complex(0.0)) continue;
    const int p = sp.occupation(i, mode_a), q = sp.occupation(i, mode_b);
    const int total = p + q;
    if (blocks[total].size() == 0) blocks[total] = detail::bs_block(total);
    const Index base = i - p * sp.stride(mode_a) - q * sp.stride(mode_b);
    for (int k = 0; k <= total; ++k) {
      if (k > ca || total - k > cb) continue;  // clipped; bounded by `risky`
      out[base + k * sp.stride(mode_a) + (total - k) * sp.stride(mode_b)] +=
          blocks[total](k, p) * amp;
    }
  }
  return StateVector(sp, std::move(out));
}

struct ProjectionResult {
  double probability = 0.0;
  std::optional<StateVector> post_state;  // empty for zero-probability outcomes
};

/// Project the photon modes onto a count outcome; the post-state is the
/// normalized remainder with the photon modes removed.
inline ProjectionResult project_counts(const StateVector& psi, std::pair<int, int> photon_modes,
                                       const CountOutcome& outcome) {
  outcome.validate();
  const FockSpace& sp = psi.space;
  auto [ma, mb] = photon_modes;
  if (outcome.n_i > sp.cutoff(ma) || outcome.n_ii > sp.cutoff(mb))
    throw std::invalid_argument("project_counts: outcome exceeds the cutoff");

  std::vector<int> rest_cut;
  std::vector<int> rest_modes;
  for (int m = 0; m < sp.mode_count(); ++m)
    if (m != ma && m != mb) {
      rest_modes.push_back(m);
      rest_cut.push_back(sp.cutoff(m));
    }
  FockSpace rest_space(rest_cut);

  Vector post = Vector::Zero(rest_space.dimension());
  for (Index i = 0; i < sp.dimension(); ++i) {
    if (psi.amplitudes[i] == Complex(0.0)) continue;
    if (sp.occupation(i, ma) != outcome.n_i || sp.occupation(i, mb) != outcome.n_ii) continue;
    Index r = 0;
    for (int m : rest_modes) r = r * (sp.cutoff(m) + 1) + sp.occupation(i, m);
    post[r] += psi.amplitudes[i];
  }
  ProjectionResult res;
  res.probability = post.squaredNorm();
  if (res.probability > 0.0) {
    post /= std::sqrt(res.probability);
    res.post_state = StateVector(rest_space, std::move(post));
  }
  return res;
}

/// Post-selected coefficients k(n), n = 0..N. `values` are normalized to unit
/// sum of squares with the global phase fixed so the first nonzero entry is
/// positive; `raw_signs` keeps the signs the closed form produced.
struct KCoefficients {
  Eigen::VectorXd values;
  std::vector<int> raw_signs;
};

/// Closed-form coefficients of the post-selected pair state. The terminating
/// hypergeometric sum is accumulated in exact rational arithmetic (the
/// regularized lower-parameter handles n > N_II, where 1/Gamma kills leading
/// terms) and converted to floating point only at the end.
inline KCoefficients k_coefficients(const CountOutcome& outcome) {
  namespace mp = boost::multiprecision;
  outcome.validate();
  const int ni = outcome.n_i, nii = outcome.n_ii, total = outcome.total();

  auto factorial = [](int v) {
    mp::cpp_int f = 1;
    for (int j = 2; j <= v; ++j) f *= j;
    return f;
  };

  std::vector<mp::cpp_rational> squared(total + 1);
  std::vector<int> sign(total + 1, 0);
  mp::cpp_rational sum = 0;
  for (int n = 0; n <= total; ++n) {
    // F = sum_k (-n)_k (-N_I)_k (-1)^k / (k! (N_II - n + k)!), terms with
    // negative factorial argument vanish.
    mp::cpp_rational f = 0;
    const int kmax = std::min(n, ni);
    for (int k = std::max(0, n - nii); k <= kmax; ++k) {
      mp::cpp_int poch = 1;
      for (int j = 0; j < k; ++j) poch *= mp::cpp_int(-n + j) * mp::cpp_int(-ni + j);
      mp::cpp_int num = poch * ((k % 2 == 0) ? 1 : -1);
      mp::cpp_int den = factorial(k) * factorial(nii - n + k);
      f += mp::cpp_rational(num, den);
    }
    const int raw = (f == 0) ? 0 : ((f > 0) ^ (ni % 2 == 1) ? 1 : -1);
    mp::cpp_rational k2 = f * f;
    k2 *= mp::cpp_rational(factorial(nii) * factorial(total - n), factorial(ni) * factorial(n));
    k2 /= mp::cpp_int(1) << total;  // 2^-N
    squared[n] = k2;
    sign[n] = raw;
    sum += k2;
  }
  if (sum == 0) throw std::logic_error("k_coefficients: vanishing norm");

  KCoefficients out;
  out.values.resize(total + 1);
  out.raw_signs = sign;
  int flip = 1;
  for (int n = 0; n <= total; ++n)
    if (sign[n] != 0) {
      flip = sign[n];
      break;
    }
  for (int n = 0; n <= total; ++n) {
    double mag = std::sqrt(static_cast<double>(mp::cpp_rational(squared[n] / sum)));
    out.values[n] = flip * sign[n] * mag;
  }
  return out;
}

/// Entanglement carried by the post-selected pair state, in nats.
inline double entanglement_entropy(const CountOutcome& outcome) {
  KCoefficients k = k_coefficients(outcome);
  double e = 0.0;
  for (Eigen::Index n = 0; n < k.values.size(); ++n) {
    double p = k.values[n] * k.values[n];
    if (p > 1e-18) e -= p * std::log(p);
  }
  return e;
}

/// Entanglement of one squeezed pair (geometric Schmidt spectrum), in nats.
inline double input_entropy(double lam) {
  if (lam < 0.0 || lam >= 1.0) throw std::invalid_argument("input_entropy: lambda outside [0,1)");
  if (lam == 0.0) return 0.0;
  const double x = lam * lam;
  return -std::log(1.0 - x) - x / (1.0 - x) * std::log(x);
}

/// Verbatim closed-form outcome probability quoted alongside the oracle
/// value; it does not normalize over outcomes (the sum is (1+lam)/(1-lam)).
inline double paper_outcome_probability(double lam, const CountOutcome& outcome) {
  return (1.0 - lam * lam) * std::pow(lam, outcome.total());
}

/// Outcome probability of the interference-and-count protocol, evaluated on
/// the conserved photon block (exact for the untruncated input; the row of a
/// unitary block has unit norm, so this reduces to (1-lam^2)^2 lam^{2N}).
inline double oracle_outcome_probability(double lam, const CountOutcome& outcome) {
  const int total = outcome.total();
  Eigen::MatrixXd block = detail::bs_block(total);
  const double row_sq = block.row(outcome.n_i).squaredNorm();
  const double x = lam * lam;
  return (1.0 - x) * (1.0 - x) * std::pow(x, total) * row_sq;
}

/// Pre-measurement 4-mode state of one polarization sector, mode order
/// (photon_I, photon_II, atom_I, atom_II); atom_I rides with the moving
/// condensate, atom_II with the one at rest.
inline StateVector make_swap_input(double lam, int cutoff, double tail_tol = 1e-12) {
  StateVector tmss_i = make_tmss(SqueezingParams::from_lambda(lam), cutoff, tail_tol);
  StateVector joint = tensor(tmss_i, tmss_i);  // (photon_I, atom_I, photon_II, atom_II)
  // swap modes 1 and 2 so the photon pair comes first
  FockSpace sp = joint.space;
  Vector v = Vector::Zero(sp.dimension());
  for (Index i = 0; i < sp.dimension(); ++i) {
    if (joint.amplitudes[i] == Complex(0.0)) continue;
    std::vector<int> occ = sp.occupation_of(i);
    std::swap(occ[1], occ[2]);
    v[sp.index_of(occ)] = joint.amplitudes[i];
  }
  return StateVector(sp, std::move(v));
}

/// Fock-index reversal m -> total - m on one mode; a permutation unitary on
/// states supported below `total`, and an involution.
inline StateVector reverse_mode(const StateVector& psi, int mode, int total) {
  const FockSpace& sp = psi.space;
  if (total < 0 || total > sp.cutoff(mode))
    throw std::invalid_argument("reverse_mode: total outside the cutoff");
  Vector out = Vector::Zero(sp.dimension());
  for (Index i = 0; i < sp.dimension(); ++i) {
    if (psi.amplitudes[i] == Complex(0.0)) continue;
    const int occ = sp.occupation(i, mode);
    if (occ > total)
      throw truncation_error("reverse_mode: support outside the implied sector",
                             std::norm(psi.amplitudes[i]));
    out[i + (total - 2 * occ) * sp.stride(mode)] = psi.amplitudes[i];
  }
  return StateVector(sp, std::move(out));
}

/// The local relabeling on the two resting-condensate modes of the combined
/// atomic state (mode order (rest+, moving+, rest-, moving-)).
inline StateVector relabel_resting_modes(const StateVector& psi, std::pair<int, int> totals) {
  if (psi.space.mode_count() != 4)
    throw std::invalid_argument("relabel_resting_modes: expected the 4-mode atomic state");
  return reverse_mode(reverse_mode(psi, 0, totals.first), 2, totals.second);
}

/// One distillation outcome: probabilities (oracle and quoted closed form),
/// coefficients, entropy, and the post-selected atomic pair state.
struct OutcomeRecord {
  CountOutcome outcome;
  double prob_numeric = 0.0;
  double prob_paper_formula = 0.0;
  KCoefficients coeffs;
  double entropy_nats = 0.0;
  StateVector post_state;
};

inline OutcomeRecord outcome_record(double lam, const CountOutcome& outcome) {
  const int total = outcome.total();
  KCoefficients k = k_coefficients(outcome);
  FockSpace atomic = FockSpace::uniform(2, std::max(total, 1));
  StateVector post = StateVector::zero(atomic);
  for (int n = 0; n <= total; ++n)
    post.amplitudes[atomic.index_of({n, total - n})] = k.values[n];
  OutcomeRecord rec{outcome,
                    oracle_outcome_probability(lam, outcome),
                    paper_outcome_probability(lam, outcome),
                    std::move(k),
                    entanglement_entropy(outcome),
                    std::move(post)};
  return rec;
}

struct Fig2Row {
  double lam = 0.0;
  CountOutcome outcome;
  double probability = 0.0;
  double entropy_nats = 0.0;
  double input_entropy_nats = 0.0;
  bool exceeds_input = false;
};

struct Fig2Aggregate {
  double lam = 0.0;
  double input_entropy_nats = 0.0;
  double p_exceeds_input = 0.0;      // total probability of outcomes with E >= E_input
  double probability_captured = 0.0; // mass of all enumerated outcomes
};

struct Fig2Table {
  int n_max_detect = 0;
  std::vector<Fig2Row> rows;
  std::vector<Fig2Aggregate> aggregates;
};

/// Success probability vs produced entanglement over all outcomes with
/// total <= n_max_detect, for each squeezing value.
inline Fig2Table figure2_sweep(const std::vector<double>& lams, int n_max_detect) {
  if (n_max_detect < 0) throw std::invalid_argument("figure2_sweep: negative detection cap");
  Fig2Table table;
  table.n_max_detect = n_max_detect;

  // Entropies and row weights are lam-independent; compute once.
  std::vector<std::vector<double>> entropy(n_max_detect + 1);
  std::vector<std::vector<double>> row_sq(n_max_detect + 1);
  for (int total = 0; total <= n_max_detect; ++total) {
    Eigen::MatrixXd block = detail::bs_block(total);
    entropy[total].resize(total + 1);
    row_sq[total].resize(total + 1);
    for (int n_i = 0; n_i <= total; ++n_i) {
      entropy[total][n_i] = entanglement_entropy({n_i, total - n_i});
      row_sq[total][n_i] = block.row(n_i).squaredNorm();
    }
  }

  for (double lam : lams) {
    const double e_in = input_entropy(lam);
    const double x = lam * lam;
    Fig2Aggregate agg{lam, e_in, 0.0, 0.0};
    for (int total = 0; total <= n_max_detect; ++total) {
      for (int n_i = 0; n_i <= total; ++n_i) {
        Fig2Row row;
        row.lam = lam;
        row.outcome = {n_i, total - n_i};
        row.probability = (1.0 - x) * (1.0 - x) * std::pow(x, total) * row_sq[total][n_i];
        row.entropy_nats = entropy[total][n_i];
        row.input_entropy_nats = e_in;
        row.exceeds_input = row.entropy_nats >= e_in;
        agg.probability_captured += row.probability;
        if (row.exceeds_input) agg.p_exceeds_input += row.probability;
        table.rows.push_back(row);
      }
    }
    table.aggregates.push_back(agg);
  }
  return table;
}

/// Witness on the relabeled two-condensate state after post-selecting one
/// count outcome per polarization. J reads the resting pair, S the moving
/// pair. No detection is claimed; the report records what the state yields.
inline WitnessReport distilled_witness(double lam, const CountOutcome& outcome_plus,
                                       const CountOutcome& outcome_minus) {
  (void)lam;  // the post-selected states carry no lam dependence
  const int n_plus = outcome_plus.total(), n_minus = outcome_minus.total();
  const int cutoff = n_plus + n_minus + 1;
  FockSpace sector = FockSpace::uniform(2, cutoff);  // (rest, moving)

  auto sector_state = [&sector](const CountOutcome& outcome) {
    KCoefficients k = k_coefficients(outcome);
    StateVector s = StateVector::zero(sector);
    const int total = outcome.total();
    for (int n = 0; n <= total; ++n)
      s.amplitudes[sector.index_of({total - n, n})] = k.values[n];
    return s;
  };

  StateVector combined = tensor(sector_state(outcome_plus), sector_state(outcome_minus));
  combined = relabel_resting_modes(combined, {n_plus, n_minus});
  StokesSet alice = build_stokes(combined.space, 1, 3, Side::alice);
  StokesSet bob = build_stokes(combined.space, 0, 2, Side::bob);
  return evaluate_criterion(combined, alice, bob);
}

}  // namespace twinfock
